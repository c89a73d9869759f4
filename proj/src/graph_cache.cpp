#include "kgcorpus/graph_cache.hpp"

#include <cereal/archives/portable_binary.hpp>
#include <cereal/types/map.hpp>
#include <cereal/types/string.hpp>
#include <cereal/types/utility.hpp>
#include <cereal/types/vector.hpp>

#include <fstream>
#include <new>
#include <stdexcept>
#include <string_view>

#include "kgcorpus/error.hpp"

namespace kgcorpus {
namespace {

// Raw prefix checked before any deserialization, so foreign files never reach cereal.
constexpr std::string_view kMagic = "KGCORPUS-GRAPH\n";

struct CachedConcept {
  std::string cui;
  std::vector<std::pair<std::string, std::string>> terms;
  std::map<std::string, std::string> preferred;
  std::vector<std::string> groups;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(cui, terms, preferred, groups);
  }
};

struct CachedEdge {
  std::uint32_t head = 0;
  std::uint8_t relation = 0;
  std::uint32_t tail = 0;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(head, relation, tail);
  }
};

}  // namespace

void save_graph_cache(const std::filesystem::path& path, const KnowledgeGraph& graph, const IngestReport& report) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::kIo, "cannot write " + tmp.string());
    out.write(kMagic.data(), static_cast<std::streamsize>(kMagic.size()));
    cereal::PortableBinaryOutputArchive ar(out);
    ar(kGraphCacheVersion);

    std::vector<CachedConcept> concepts;
    concepts.reserve(graph.concept_count());
    for (const Concept& c : graph.concepts()) {
      CachedConcept cc{c.cui, {}, c.preferred_term, c.groups};
      for (const Term& t : c.terms) cc.terms.emplace_back(t.language, t.text);
      concepts.push_back(std::move(cc));
    }
    std::vector<CachedEdge> edges;
    edges.reserve(graph.edge_count());
    for (const Triple& t : graph.edges()) {
      edges.push_back(CachedEdge{t.head.value, static_cast<std::uint8_t>(relation_code(t.relation)), t.tail.value});
    }
    ar(concepts, edges, report.counts);
    if (!out) fail(ErrorKind::kIo, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorKind::kIo, "cannot rename " + tmp.string() + ": " + ec.message());
}

LoadedGraph load_graph_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string());
  LoadedGraph loaded;
  std::string magic(kMagic.size(), '\0');
  in.read(magic.data(), static_cast<std::streamsize>(magic.size()));
  if (!in || magic != kMagic) fail(ErrorKind::kData, path.string() + " is not a graph cache");
  try {
    cereal::PortableBinaryInputArchive ar(in);
    std::uint32_t version = 0;
    ar(version);
    if (version != kGraphCacheVersion) {
      fail(ErrorKind::kData, "graph cache version " + std::to_string(version) + " is not supported (expected " +
                                 std::to_string(kGraphCacheVersion) + "); re-run ingest");
    }
    std::vector<CachedConcept> concepts;
    std::vector<CachedEdge> edges;
    ar(concepts, edges, loaded.report.counts);
    for (CachedConcept& cc : concepts) {
      Concept c{std::move(cc.cui), {}, std::move(cc.preferred), std::move(cc.groups)};
      for (auto& [lang, text] : cc.terms) c.terms.push_back(Term{std::move(lang), std::move(text)});
      loaded.graph.insert_concept(c);
    }
    for (const CachedEdge& e : edges) {
      if (e.head >= concepts.size() || e.tail >= concepts.size()) fail(ErrorKind::kData, "corrupt graph cache: edge endpoint out of range");
      auto rel = relation_from_code(e.relation);
      if (!rel) fail(ErrorKind::kData, "corrupt graph cache: relation code " + std::to_string(e.relation));
      loaded.graph.insert_triple(Triple{ConceptId{e.head}, *rel, ConceptId{e.tail}});
    }
  } catch (const cereal::Exception& e) {
    fail(ErrorKind::kData, "corrupt graph cache " + path.string() + ": " + e.what());
  } catch (const std::length_error&) {
    fail(ErrorKind::kData, "corrupt graph cache " + path.string() + ": impossible length");
  } catch (const std::bad_alloc&) {
    fail(ErrorKind::kData, "corrupt graph cache " + path.string() + ": impossible length");
  }
  loaded.graph.freeze();
  return loaded;
}

}  // namespace kgcorpus
