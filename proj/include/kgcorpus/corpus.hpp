#ifndef KGCORPUS_CORPUS_HPP
#define KGCORPUS_CORPUS_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "kgcorpus/knowledge_graph.hpp"
#include "kgcorpus/objective.hpp"
#include "kgcorpus/sampling.hpp"
#include "kgcorpus/sequence.hpp"

namespace kgcorpus {

inline constexpr int kManifestSchemaVersion = 1;
inline constexpr std::string_view kManifestFile = "manifest.json";

// Shard file name for an index: part-00000.jsonl.
std::string shard_file_name(std::size_t index);

// Content-derived id "<task>-<tag>-<16 hex>". The tag names the record's
// origin: "doc" (mlm), "edge" (ep), "path" (lp), and for tc the provenance
// "pos", "nent" (corrupted entities) or "nrel" (corrupted relation).
std::string make_record_id(Task task, std::string_view tag, std::string_view key, std::uint64_t draw);
std::string_view provenance_tag(TcProvenance p);
std::optional<TcProvenance> provenance_from_id(std::string_view id);

// One JSON object per line with exactly the fields id, task, text, spans,
// labels. Span offsets are counted in Unicode code points.
nlohmann::ordered_json record_to_json(const TrainingRecord& record);
// Throws ErrorKind::kValidation describing the first schema problem.
TrainingRecord record_from_json(const nlohmann::json& j, const SpecialTokens& tokens);

struct ShardInfo {
  std::string file;
  std::uint64_t records = 0;
  std::array<std::uint64_t, 4> per_task{};
  std::string sha256;
  std::uint64_t bytes = 0;
};

struct Manifest {
  int schema_version = kManifestSchemaVersion;
  std::string tool_version;
  std::uint64_t seed = 0;
  std::string language;
  std::array<std::uint64_t, 4> counts{};  // indexed by task_index()
  TaskWeights weights;
  SpecialTokens tokens = SpecialTokens::defaults();
  std::vector<ShardInfo> shards;
  std::uint64_t total_bytes = 0;  // on-disk bytes of all shards
  nlohmann::ordered_json details = nlohmann::ordered_json::object();

  nlohmann::ordered_json to_json() const;
  static Manifest from_json(const nlohmann::json& j);
};

// Everything in the manifest that does not come from the records themselves.
struct CorpusMetadata {
  std::string language;
  TaskWeights weights;
  SpecialTokens tokens = SpecialTokens::defaults();
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
};

// Writes records into `shards` files, assigning each record by hash(id, seed),
// then writes the manifest last via an atomic rename. Any existing manifest is
// removed first, so a failed run never leaves a valid-looking corpus.
Manifest emit(std::span<const TrainingRecord> records, const std::filesystem::path& out_dir, std::size_t shards,
              std::uint64_t seed, const CorpusMetadata& metadata);

Manifest read_manifest(const std::filesystem::path& corpus_dir);

struct ValidationCheck {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool ok() const;
  const ValidationCheck* find(std::string_view name) const;
  std::string to_text() const;
};

// Re-checks digests, sizes, per-task counts, record schema, span/slice
// consistency, link-prediction labels, triple-classification composition and
// weights. With a graph, also checks that every path hop, entity-prediction
// triple and positive classification triple exists. Throws
// ErrorKind::kValidation if the manifest is missing or unreadable.
ValidationReport validate(const std::filesystem::path& corpus_dir, const KnowledgeGraph* graph = nullptr);

}  // namespace kgcorpus

#endif  // KGCORPUS_CORPUS_HPP
