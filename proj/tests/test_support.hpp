#ifndef KGCORPUS_TEST_SUPPORT_HPP
#define KGCORPUS_TEST_SUPPORT_HPP

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "kgcorpus/graph_builder.hpp"
#include "kgcorpus/knowledge_graph.hpp"
#include "kgcorpus/synthetic.hpp"

namespace kgtest {

// Directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("kgcorpus-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline kgcorpus::Concept make_concept(const std::string& cui, std::vector<std::string> groups,
                                      const std::vector<std::string>& terms, const std::string& lang = "ENG") {
  kgcorpus::Concept c;
  c.cui = cui;
  for (const auto& t : terms) c.terms.push_back({lang, t});
  if (!terms.empty()) c.preferred_term[lang] = terms.front();
  c.groups = std::move(groups);
  return c;
}

// Synthetic release written to `dir`, ingested with default settings.
inline kgcorpus::KnowledgeGraph synthetic_graph(const kgcorpus::SyntheticKgSpec& spec, const std::filesystem::path& dir,
                                                kgcorpus::GroundTruth* truth = nullptr) {
  auto t = kgcorpus::generate_synthetic_kg(spec, dir);
  if (truth) *truth = t;
  return kgcorpus::ingest_release(kgcorpus::ReleaseFiles::in_directory(dir), kgcorpus::IngestConfig::with_defaults()).graph;
}

}  // namespace kgtest

#endif  // KGCORPUS_TEST_SUPPORT_HPP
