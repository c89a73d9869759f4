#ifndef KGCORPUS_GRAPH_CACHE_HPP
#define KGCORPUS_GRAPH_CACHE_HPP

#include <cstdint>
#include <filesystem>

#include "kgcorpus/graph_builder.hpp"
#include "kgcorpus/knowledge_graph.hpp"

namespace kgcorpus {

// Version of the private binary graph cache written by `ingest`. Caches with
// another version are rejected; there is no cross-version compatibility.
inline constexpr std::uint32_t kGraphCacheVersion = 1;

void save_graph_cache(const std::filesystem::path& path, const KnowledgeGraph& graph, const IngestReport& report);

struct LoadedGraph {
  KnowledgeGraph graph;
  IngestReport report;
};

LoadedGraph load_graph_cache(const std::filesystem::path& path);

}  // namespace kgcorpus

#endif  // KGCORPUS_GRAPH_CACHE_HPP
