#ifndef KGCORPUS_SAMPLING_HPP
#define KGCORPUS_SAMPLING_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kgcorpus/knowledge_graph.hpp"
#include "kgcorpus/report.hpp"
#include "kgcorpus/task.hpp"

namespace kgcorpus {

// How "same"/"different" semantic group is decided when choosing a negative
// sampling strategy for a source triple.
enum class GroupEquality {
  kCanonical,     // compare canonical (smallest) groups
  kIntersection,  // same iff the group sets intersect
};

enum class TcProvenance { kPositive, kNegativeEntities, kNegativeRelation };

std::string_view provenance_name(TcProvenance p);

struct TcExample {
  Triple triple;
  bool label = true;
  TcProvenance provenance = TcProvenance::kPositive;
  Triple source;
  std::uint64_t slot = 0;
};

struct EpExample {
  Triple triple;
  std::uint64_t slot = 0;
};

// Alternating concept/relation walk: concepts.size() == relations.size() + 1.
struct Path {
  std::vector<ConceptId> concepts;
  std::vector<RelationType> relations;
  std::uint64_t slot = 0;

  std::size_t hops() const { return relations.size(); }
};

// Precomputed sampling pools over a frozen graph. Strata are the canonical
// groups of head concepts; self-loops are excluded from every pool.
class SamplingIndex {
 public:
  enum class Pool {
    kAll,          // every non-self-loop edge
    kCrossGroup,   // head and tail groups differ
    kSameGroup,    // head and tail share a group
    kNonSynonym,   // candidate path starts
  };

  explicit SamplingIndex(const KnowledgeGraph& kg, GroupEquality equality = GroupEquality::kCanonical);

  const KnowledgeGraph& graph() const { return *kg_; }
  GroupEquality equality() const { return equality_; }

  // Sorted canonical group names that head at least one non-self-loop edge.
  const std::vector<std::string>& strata() const { return strata_; }
  std::span<const std::uint32_t> pool(Pool kind, std::size_t stratum) const;
  std::uint64_t pool_total(Pool kind) const;

  // Non-Synonym, non-self-loop outgoing edges of a concept.
  std::span<const std::uint32_t> path_steps(ConceptId id) const { return steps_[id.value]; }

  // Concepts whose canonical group is `group`.
  std::span<const ConceptId> canonical_members(std::string_view group) const;

  bool same_group(ConceptId a, ConceptId b) const;

 private:
  const KnowledgeGraph* kg_;
  GroupEquality equality_;
  std::vector<std::string> strata_;
  std::array<std::vector<std::vector<std::uint32_t>>, 4> pools_;
  std::vector<std::vector<std::uint32_t>> steps_;
  std::vector<std::pair<std::string, std::vector<ConceptId>>> canonical_members_;
};

struct StratumTarget {
  std::string group;
  std::uint64_t count = 0;

  friend bool operator==(const StratumTarget&, const StratumTarget&) = default;
};

// Splits `size` over weighted keys in proportion to the weights. Floors are
// topped up by largest remainder; equal remainders favour the key that sorts
// first. The result sums to `size` exactly. Zero-weight keys are omitted.
std::vector<StratumTarget> largest_remainder(const std::vector<std::pair<std::string, std::uint64_t>>& weights,
                                             std::uint64_t size);

struct TaskSizes {
  std::uint64_t tc = 0;
  std::uint64_t ep = 0;
  std::uint64_t lp = 0;
};

struct SamplePlan {
  TaskSizes sizes;
  std::vector<StratumTarget> tc_targets;
  std::vector<StratumTarget> ep_targets;
  std::vector<StratumTarget> lp_targets;
  std::uint64_t seed = 0;
  std::uint32_t max_attempts = 64;

  const std::vector<StratumTarget>& targets(Task task) const;
};

// Per-stratum targets proportional to each stratum's share of edges (the
// non-Synonym edges for link prediction).
SamplePlan plan_strata(const SamplingIndex& index, const TaskSizes& sizes, std::uint64_t seed,
                       std::uint32_t max_attempts = 64);

struct SamplerOptions {
  std::uint32_t max_hops = 4;
  // Failed slots tolerated per stratum within one block before the stratum
  // is skipped and its remaining slots go to other strata.
  std::uint32_t stratum_failure_limit = 4;
  // Slots per independently seeded block; the unit of sharding.
  std::uint64_t block_size = 1024;
};

// Subset of blocks handled by one worker: blocks b with b % count == index.
struct Shard {
  std::uint64_t index = 0;
  std::uint64_t count = 1;
};

// Triple classification examples, 50% positive, 25% per negative strategy
// (within one of each target). Results are ordered by slot.
std::vector<TcExample> sample_tc(const SamplingIndex& index, const SamplePlan& plan, Report& report,
                                 const SamplerOptions& options = {}, Shard shard = {});

// Real triples, drawn without replacement within each stratum until the
// stratum's pool is exhausted.
std::vector<EpExample> sample_ep(const SamplingIndex& index, const SamplePlan& plan, Report& report,
                                 const SamplerOptions& options = {}, Shard shard = {});

// Non-Synonym walks of 2..max_hops hops starting from a stratified edge.
std::vector<Path> sample_paths(const SamplingIndex& index, const SamplePlan& plan, Report& report,
                               const SamplerOptions& options = {}, Shard shard = {});

}  // namespace kgcorpus

#endif  // KGCORPUS_SAMPLING_HPP
