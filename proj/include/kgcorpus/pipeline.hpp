#ifndef KGCORPUS_PIPELINE_HPP
#define KGCORPUS_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "kgcorpus/corpus.hpp"
#include "kgcorpus/knowledge_graph.hpp"
#include "kgcorpus/report.hpp"
#include "kgcorpus/sampling.hpp"
#include "kgcorpus/sequence.hpp"
#include "kgcorpus/task.hpp"

namespace kgcorpus {

struct BuildConfig {
  std::string language = "ENG";
  std::uint64_t seed = 42;
  TaskSizes sizes{200000, 100000, 100000};
  std::uint32_t max_hops = 4;
  double mlm_probability = 0.15;
  bool lp_mask_all = true;
  std::vector<std::filesystem::path> freetext;
  std::filesystem::path out_dir = "corpus";
  std::size_t shards = 1;
  std::set<Task> disabled;  // graph tasks only
  std::size_t max_sequence_units = 256;
  GroupEquality group_equality = GroupEquality::kCanonical;
  SpecialTokens tokens = SpecialTokens::defaults();
  std::uint32_t max_attempts = 64;
  std::uint64_t interleave_batch_size = 32;
  bool strict_freetext = false;

  bool enabled(Task task) const { return !disabled.contains(task); }
  // Throws ErrorKind::kUsage on contradictory or out-of-range settings.
  void validate() const;
};

struct BuildResult {
  Manifest manifest;
  Report report;
};

// Renders sampled examples into records. Term choice for Synonym tails draws
// from an RNG keyed by (seed, task, slot), so records do not depend on which
// other slots were rendered.
std::vector<TrainingRecord> render_tc(const KnowledgeGraph& kg, const std::vector<TcExample>& examples,
                                      const BuildConfig& cfg, Report& report);
std::vector<TrainingRecord> render_ep(const KnowledgeGraph& kg, const std::vector<EpExample>& examples,
                                      const BuildConfig& cfg, Report& report);
std::vector<TrainingRecord> render_lp(const KnowledgeGraph& kg, const std::vector<Path>& paths,
                                      const BuildConfig& cfg, Report& report);

// Samples, renders and emits the full corpus from a frozen graph.
BuildResult build_corpus(const KnowledgeGraph& kg, const Report& ingest_report, const BuildConfig& cfg);

}  // namespace kgcorpus

#endif  // KGCORPUS_PIPELINE_HPP
