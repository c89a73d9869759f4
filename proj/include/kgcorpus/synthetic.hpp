#ifndef KGCORPUS_SYNTHETIC_HPP
#define KGCORPUS_SYNTHETIC_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "kgcorpus/knowledge_graph.hpp"
#include "kgcorpus/relation.hpp"

namespace kgcorpus {

// Parameters of a license-free synthetic release.
struct SyntheticKgSpec {
  std::uint32_t concept_count = 1000;
  std::vector<std::pair<std::string, double>> group_weights = {{"ANAT", 0.3}, {"CHEM", 0.3}, {"DISO", 0.4}};
  std::uint32_t min_terms = 1;  // per concept and language
  std::uint32_t max_terms = 3;
  std::array<std::uint64_t, kRelationCount> edges_per_relation = {100, 100, 100, 100, 100, 100, 100};
  std::vector<std::string> languages = {"ENG"};
  // Probability that a concept also has terms in each non-first language.
  double secondary_language_rate = 0.5;
  // Probability that a concept carries a second (lexicographically larger) group.
  double multi_group_rate = 0.1;
  std::uint64_t unmapped_relation_rows = 0;   // extra rows with code "RO"
  std::uint64_t duplicate_relation_rows = 0;  // exact repeats of earlier rows
  std::uint64_t seed = 1;

  // Throws ErrorKind::kUsage naming the first violated constraint.
  void validate() const;
};

// Quantities the generator knows by construction.
struct GroundTruth {
  std::map<std::string, GraphStatistics> per_language;
  std::map<std::string, std::uint64_t> canonical_group_concepts;
  std::map<std::string, std::uint64_t> group_memberships;
  std::map<std::string, std::uint64_t> edges_by_head_group;  // canonical group of head
  std::array<std::uint64_t, kRelationCount> edges_by_relation{};
  std::uint64_t concepts = 0;
  std::uint64_t edges = 0;
  std::uint64_t concept_rows = 0;
  std::uint64_t relation_rows = 0;
  std::uint64_t type_rows = 0;

  nlohmann::ordered_json to_json() const;
};

// Writes MRCONSO.RRF, MRREL.RRF, MRSTY.RRF and SemGroups.txt into `dir`.
// Output is a pure function of the spec.
GroundTruth generate_synthetic_kg(const SyntheticKgSpec& spec, const std::filesystem::path& dir);

}  // namespace kgcorpus

#endif  // KGCORPUS_SYNTHETIC_HPP
