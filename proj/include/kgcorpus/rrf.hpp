#ifndef KGCORPUS_RRF_HPP
#define KGCORPUS_RRF_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kgcorpus/relation.hpp"

namespace kgcorpus {

// One pipe-delimited record. Fields view into the caller's line buffer and
// are only valid for the duration of the callback that receives the row.
struct RrfRow {
  std::uint64_t line_number = 0;
  std::vector<std::string_view> fields;
};

// Splits on every '|', keeping empty fields, so join_pipe(split_pipe(l)) == l.
// A release line's trailing pipe therefore yields a final empty field.
void split_pipe(std::string_view line, std::vector<std::string_view>& fields);
std::vector<std::string_view> split_pipe(std::string_view line);
std::string join_pipe(const std::vector<std::string_view>& fields);

// Streams the lines of a file without the newline (and without a trailing
// '\r'). Files ending in ".gz" are decompressed on the fly. Memory use is
// bounded by the longest line.
void for_each_line(const std::filesystem::path& path,
                   const std::function<void(std::string_view line, std::uint64_t line_number)>& fn);
void for_each_line(std::istream& in,
                   const std::function<void(std::string_view line, std::uint64_t line_number)>& fn);

struct PreferredTermPolicy {
  bool require_term_status_p = true;  // field 2 == "P"
  bool require_ispref_y = true;       // field 6 == "Y"
};

struct IngestConfig {
  std::set<std::string> languages;                       // empty: keep every language
  std::map<std::string, RelationType> relation_codes;    // release code -> relation
  std::unordered_map<std::string, std::string> type_to_group;
  std::set<std::string> allowed_groups;                  // empty: allow all
  PreferredTermPolicy preferred_policy;
  bool flip_orientation = false;  // false: head = second concept column
  bool strict = false;            // throw on the first malformed row

  static IngestConfig with_defaults();
  bool keeps_language(std::string_view language) const;
  bool keeps_group(std::string_view group) const;
};

// Default release relation codes: PAR CHD SY AQ QB RB RN.
std::map<std::string, RelationType> default_relation_codes();

struct ConceptFragment {
  std::string_view cui;
  std::string_view language;
  std::string_view term;
  bool preferred = false;
};

struct RawTriple {
  std::string_view head;
  RelationType relation = RelationType::kParent;
  std::string_view tail;
};

struct ParseSummary {
  std::uint64_t rows = 0;
  std::uint64_t emitted = 0;
  std::uint64_t short_rows = 0;   // fewer fields than the layout needs
  std::uint64_t filtered = 0;     // well-formed but excluded (language, unmapped code, unknown type)
  std::uint64_t duplicates = 0;   // exact repeats suppressed by the parser

  std::uint64_t dropped() const { return short_rows + filtered + duplicates; }
};

// Concept/term file: cui(0) language(1) term-status(2) string-type(4)
// ispref(6) ... term(14); at least 15 fields.
ParseSummary parse_concept_file(std::istream& in, const IngestConfig& cfg,
                                const std::function<void(const ConceptFragment&)>& sink);
ParseSummary parse_concept_file(const std::filesystem::path& path, const IngestConfig& cfg,
                                const std::function<void(const ConceptFragment&)>& sink);

// Relation file: cui1(0) rel(3) cui2(4). Emits head=cui2, tail=cui1 unless
// cfg.flip_orientation is set.
ParseSummary parse_relation_file(std::istream& in, const IngestConfig& cfg,
                                 const std::function<void(const RawTriple&)>& sink);
ParseSummary parse_relation_file(const std::filesystem::path& path, const IngestConfig& cfg,
                                 const std::function<void(const RawTriple&)>& sink);

// Group mapping file: group(0) group-name(1) type(2) type-name(3).
std::unordered_map<std::string, std::string> parse_group_map(std::istream& in);
std::unordered_map<std::string, std::string> parse_group_map(const std::filesystem::path& path);

// Semantic-type file: cui(0) type(1). Emits each (cui, group) once.
ParseSummary parse_semantic_types(std::istream& in, const std::unordered_map<std::string, std::string>& groups_map,
                                  const std::function<void(std::string_view cui, std::string_view group)>& sink);
ParseSummary parse_semantic_types(const std::filesystem::path& path,
                                  const std::unordered_map<std::string, std::string>& groups_map,
                                  const std::function<void(std::string_view cui, std::string_view group)>& sink);

}  // namespace kgcorpus

#endif  // KGCORPUS_RRF_HPP
