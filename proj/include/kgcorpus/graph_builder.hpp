#ifndef KGCORPUS_GRAPH_BUILDER_HPP
#define KGCORPUS_GRAPH_BUILDER_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "kgcorpus/knowledge_graph.hpp"
#include "kgcorpus/report.hpp"
#include "kgcorpus/rrf.hpp"

namespace kgcorpus {

void add_summary(Report& report, const std::string& section, const ParseSummary& summary);

// Accumulates parser output and produces a frozen graph. Memory grows with
// the number of distinct concepts and triples, not with input rows.
class GraphBuilder {
 public:
  explicit GraphBuilder(IngestConfig cfg) : cfg_(std::move(cfg)) {}

  void add_fragment(const ConceptFragment& fragment);
  void add_membership(std::string_view cui, std::string_view group);
  void add_triple(const RawTriple& triple);

  IngestReport& report() { return report_; }

  struct Result {
    KnowledgeGraph graph;
    IngestReport report;
  };

  // Concepts need at least one term and one allowed group; triples need both
  // endpoints to survive. Concepts and triples are inserted in sorted order,
  // so the graph does not depend on input row order. Throws if no concept survives.
  Result finish() &&;

 private:
  struct Pending {
    std::string cui;
    std::vector<Term> terms;
    std::map<std::string, std::string> preferred;
    std::vector<std::string> groups;
  };

  std::uint32_t intern(std::string_view cui);

  IngestConfig cfg_;
  IngestReport report_;
  std::vector<Pending> pending_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::unordered_set<Triple, TripleHash> triples_;
};

// Release file names inside a directory. Each may carry a ".gz" suffix.
struct ReleaseFiles {
  std::filesystem::path concepts;        // MRCONSO.RRF
  std::filesystem::path relations;       // MRREL.RRF
  std::filesystem::path semantic_types;  // MRSTY.RRF
  std::filesystem::path group_map;       // SemGroups.txt

  static ReleaseFiles in_directory(const std::filesystem::path& dir);
};

GraphBuilder::Result ingest_release(const ReleaseFiles& files, const IngestConfig& cfg);

}  // namespace kgcorpus

#endif  // KGCORPUS_GRAPH_BUILDER_HPP
