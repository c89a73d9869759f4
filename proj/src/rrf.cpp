#include "kgcorpus/rrf.hpp"

#include <zlib.h>

#include <fstream>
#include <memory>
#include <unordered_set>

#include "kgcorpus/error.hpp"

namespace kgcorpus {
namespace {

constexpr std::size_t kChunk = 1 << 20;

// Splits a byte stream into lines. `read` fills a buffer and returns the
// number of bytes read, 0 at end of input.
template <typename Read>
void split_lines(Read&& read, const std::function<void(std::string_view, std::uint64_t)>& fn) {
  std::vector<char> buffer(kChunk);
  std::string carry;
  std::uint64_t line_number = 0;
  auto emit = [&](std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line, ++line_number);
  };
  for (;;) {
    std::size_t n = read(buffer.data(), buffer.size());
    if (n == 0) break;
    std::string_view chunk(buffer.data(), n);
    std::size_t start = 0;
    for (;;) {
      std::size_t nl = chunk.find('\n', start);
      if (nl == std::string_view::npos) break;
      if (carry.empty()) {
        emit(chunk.substr(start, nl - start));
      } else {
        carry.append(chunk.substr(start, nl - start));
        emit(carry);
        carry.clear();
      }
      start = nl + 1;
    }
    carry.append(chunk.substr(start));
  }
  if (!carry.empty()) emit(carry);
}

bool has_gz_extension(const std::filesystem::path& path) { return path.extension() == ".gz"; }

struct GzCloser {
  void operator()(gzFile f) const { gzclose(f); }
};

void malformed(const IngestConfig& cfg, std::uint64_t line, std::string_view what) {
  if (cfg.strict) fail(ErrorKind::kData, "line " + std::to_string(line) + ": " + std::string(what));
}

ParseSummary parse_concepts_from(const std::function<void(const std::function<void(std::string_view, std::uint64_t)>&)>& lines,
                                 const IngestConfig& cfg, const std::function<void(const ConceptFragment&)>& sink) {
  ParseSummary summary;
  std::vector<std::string_view> fields;
  lines([&](std::string_view line, std::uint64_t number) {
    ++summary.rows;
    split_pipe(line, fields);
    if (fields.size() < 15 || fields[0].empty() || fields[14].empty()) {
      ++summary.short_rows;
      malformed(cfg, number, "concept row has fewer than 15 fields or an empty cui/term");
      return;
    }
    if (!cfg.keeps_language(fields[1])) {
      ++summary.filtered;
      return;
    }
    const auto& policy = cfg.preferred_policy;
    bool preferred = (!policy.require_term_status_p || fields[2] == "P") && (!policy.require_ispref_y || fields[6] == "Y");
    sink(ConceptFragment{fields[0], fields[1], fields[14], preferred});
    ++summary.emitted;
  });
  return summary;
}

ParseSummary parse_relations_from(const std::function<void(const std::function<void(std::string_view, std::uint64_t)>&)>& lines,
                                  const IngestConfig& cfg, const std::function<void(const RawTriple&)>& sink) {
  ParseSummary summary;
  std::vector<std::string_view> fields;
  std::string code;
  lines([&](std::string_view line, std::uint64_t number) {
    ++summary.rows;
    split_pipe(line, fields);
    if (fields.size() < 5 || fields[0].empty() || fields[4].empty()) {
      ++summary.short_rows;
      malformed(cfg, number, "relation row has fewer than 5 fields or an empty cui");
      return;
    }
    code.assign(fields[3]);
    auto it = cfg.relation_codes.find(code);
    if (it == cfg.relation_codes.end()) {
      ++summary.filtered;
      return;
    }
    RawTriple t{fields[4], it->second, fields[0]};
    if (cfg.flip_orientation) std::swap(t.head, t.tail);
    sink(t);
    ++summary.emitted;
  });
  return summary;
}

ParseSummary parse_types_from(const std::function<void(const std::function<void(std::string_view, std::uint64_t)>&)>& lines,
                              const std::unordered_map<std::string, std::string>& groups_map,
                              const std::function<void(std::string_view, std::string_view)>& sink) {
  ParseSummary summary;
  std::vector<std::string_view> fields;
  std::unordered_set<std::string> seen;
  std::string type;
  std::string key;
  lines([&](std::string_view line, std::uint64_t) {
    ++summary.rows;
    split_pipe(line, fields);
    if (fields.size() < 2 || fields[0].empty() || fields[1].empty()) {
      ++summary.short_rows;
      return;
    }
    type.assign(fields[1]);
    auto it = groups_map.find(type);
    if (it == groups_map.end()) {
      ++summary.filtered;
      return;
    }
    key.assign(fields[0]);
    key.push_back('|');
    key.append(it->second);
    if (!seen.insert(key).second) {
      ++summary.duplicates;
      return;
    }
    sink(fields[0], it->second);
    ++summary.emitted;
  });
  return summary;
}

using LineSource = std::function<void(const std::function<void(std::string_view, std::uint64_t)>&)>;

LineSource stream_source(std::istream& in) {
  return [&in](const std::function<void(std::string_view, std::uint64_t)>& fn) { for_each_line(in, fn); };
}

LineSource path_source(const std::filesystem::path& path) {
  return [path](const std::function<void(std::string_view, std::uint64_t)>& fn) { for_each_line(path, fn); };
}

// Group file: group(0) name(1) type(2) description(3).
std::unordered_map<std::string, std::string> parse_groups_from(const LineSource& lines) {
  std::unordered_map<std::string, std::string> out;
  std::vector<std::string_view> fields;
  lines([&](std::string_view line, std::uint64_t) {
    split_pipe(line, fields);
    if (fields.size() < 3 || fields[0].empty() || fields[2].empty()) return;
    out.emplace(std::string(fields[2]), std::string(fields[0]));
  });
  return out;
}

}  // namespace

void split_pipe(std::string_view line, std::vector<std::string_view>& fields) {
  fields.clear();
  std::size_t start = 0;
  for (;;) {
    std::size_t bar = line.find('|', start);
    if (bar == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return;
    }
    fields.push_back(line.substr(start, bar - start));
    start = bar + 1;
  }
}

std::vector<std::string_view> split_pipe(std::string_view line) {
  std::vector<std::string_view> fields;
  split_pipe(line, fields);
  return fields;
}

std::string join_pipe(const std::vector<std::string_view>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back('|');
    out.append(fields[i]);
  }
  return out;
}

void for_each_line(std::istream& in, const std::function<void(std::string_view, std::uint64_t)>& fn) {
  split_lines(
      [&](char* buf, std::size_t size) -> std::size_t {
        in.read(buf, static_cast<std::streamsize>(size));
        return static_cast<std::size_t>(in.gcount());
      },
      fn);
}

void for_each_line(const std::filesystem::path& path, const std::function<void(std::string_view, std::uint64_t)>& fn) {
  if (has_gz_extension(path)) {
    std::unique_ptr<gzFile_s, GzCloser> gz(gzopen(path.c_str(), "rb"));
    if (!gz) fail(ErrorKind::kIo, "cannot open " + path.string());
    gzbuffer(gz.get(), kChunk);
    split_lines(
        [&](char* buf, std::size_t size) -> std::size_t {
          int n = gzread(gz.get(), buf, static_cast<unsigned>(size));
          if (n < 0) fail(ErrorKind::kIo, "decompression failed for " + path.string());
          return static_cast<std::size_t>(n);
        },
        fn);
    return;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string());
  for_each_line(in, fn);
}

std::map<std::string, RelationType> default_relation_codes() {
  std::map<std::string, RelationType> out;
  for (RelationType r : kAllRelations) out.emplace(std::string(relation_release_code(r)), r);
  return out;
}

IngestConfig IngestConfig::with_defaults() {
  IngestConfig cfg;
  cfg.relation_codes = default_relation_codes();
  return cfg;
}

bool IngestConfig::keeps_language(std::string_view language) const {
  return languages.empty() || languages.contains(std::string(language));
}

bool IngestConfig::keeps_group(std::string_view group) const {
  return allowed_groups.empty() || allowed_groups.contains(std::string(group));
}

ParseSummary parse_concept_file(std::istream& in, const IngestConfig& cfg,
                                const std::function<void(const ConceptFragment&)>& sink) {
  return parse_concepts_from(stream_source(in), cfg, sink);
}

ParseSummary parse_concept_file(const std::filesystem::path& path, const IngestConfig& cfg,
                                const std::function<void(const ConceptFragment&)>& sink) {
  return parse_concepts_from(path_source(path), cfg, sink);
}

ParseSummary parse_relation_file(std::istream& in, const IngestConfig& cfg,
                                 const std::function<void(const RawTriple&)>& sink) {
  return parse_relations_from(stream_source(in), cfg, sink);
}

ParseSummary parse_relation_file(const std::filesystem::path& path, const IngestConfig& cfg,
                                 const std::function<void(const RawTriple&)>& sink) {
  return parse_relations_from(path_source(path), cfg, sink);
}

std::unordered_map<std::string, std::string> parse_group_map(std::istream& in) { return parse_groups_from(stream_source(in)); }

std::unordered_map<std::string, std::string> parse_group_map(const std::filesystem::path& path) {
  return parse_groups_from(path_source(path));
}

ParseSummary parse_semantic_types(std::istream& in, const std::unordered_map<std::string, std::string>& groups_map,
                                  const std::function<void(std::string_view, std::string_view)>& sink) {
  return parse_types_from(stream_source(in), groups_map, sink);
}

ParseSummary parse_semantic_types(const std::filesystem::path& path,
                                  const std::unordered_map<std::string, std::string>& groups_map,
                                  const std::function<void(std::string_view, std::string_view)>& sink) {
  return parse_types_from(path_source(path), groups_map, sink);
}

}  // namespace kgcorpus
