#ifndef KGCORPUS_REPORT_HPP
#define KGCORPUS_REPORT_HPP

#include <cstdint>
#include <map>
#include <string>

namespace kgcorpus {

// Named counters keyed "section.name", e.g. "relations.dangling".
struct Report {
  std::map<std::string, std::uint64_t> counts;

  std::uint64_t get(const std::string& key) const {
    auto it = counts.find(key);
    return it == counts.end() ? 0 : it->second;
  }
  void add(const std::string& key, std::uint64_t n = 1) { counts[key] += n; }
  void merge(const Report& other) {
    for (const auto& [k, v] : other.counts) counts[k] += v;
  }

  // "key = value" lines in key order.
  std::string to_text() const {
    std::string out;
    for (const auto& [k, v] : counts) out += k + " = " + std::to_string(v) + "\n";
    return out;
  }
};

using IngestReport = Report;

}  // namespace kgcorpus

#endif  // KGCORPUS_REPORT_HPP
