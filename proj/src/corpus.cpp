#include "kgcorpus/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "kgcorpus/digest.hpp"
#include "kgcorpus/error.hpp"
#include "kgcorpus/random.hpp"
#include "kgcorpus/rrf.hpp"
#include "kgcorpus/utf8.hpp"

namespace kgcorpus {

using nlohmann::json;
using nlohmann::ordered_json;

std::string shard_file_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "part-%05zu.jsonl", index);
  return buf;
}

std::string_view provenance_tag(TcProvenance p) {
  switch (p) {
    case TcProvenance::kPositive: return "pos";
    case TcProvenance::kNegativeEntities: return "nent";
    case TcProvenance::kNegativeRelation: return "nrel";
  }
  return "?";
}

std::optional<TcProvenance> provenance_from_id(std::string_view id) {
  if (id.substr(0, 3) != "tc-") return std::nullopt;
  id.remove_prefix(3);
  auto dash = id.find('-');
  if (dash == std::string_view::npos) return std::nullopt;
  id = id.substr(0, dash);
  for (TcProvenance p : {TcProvenance::kPositive, TcProvenance::kNegativeEntities, TcProvenance::kNegativeRelation}) {
    if (provenance_tag(p) == id) return p;
  }
  return std::nullopt;
}

std::string make_record_id(Task task, std::string_view tag, std::string_view key, std::uint64_t draw) {
  std::string material(task_name(task));
  material.push_back('\x1f');
  material.append(key);
  material.push_back('\x1f');
  material.append(std::to_string(draw));
  return std::string(task_name(task)) + "-" + std::string(tag) + "-" + sha256_hex(material).substr(0, 16);
}

ordered_json record_to_json(const TrainingRecord& record) {
  ordered_json j;
  j["id"] = record.id;
  j["task"] = task_name(record.task);
  j["text"] = record.text;
  j["spans"] = ordered_json::array();
  for (const CharSpan& s : record.spans) {
    j["spans"].push_back(ordered_json{{"role", span_role_name(s.role)},
                                      {"start", utf8::codepoints_before(record.text, s.start)},
                                      {"end", utf8::codepoints_before(record.text, s.end)}});
  }
  if (const bool* b = std::get_if<bool>(&record.labels)) {
    j["labels"] = *b;
  } else if (const auto* rels = std::get_if<std::vector<RelationType>>(&record.labels)) {
    j["labels"] = ordered_json::array();
    for (RelationType r : *rels) j["labels"].push_back(relation_code(r));
  } else {
    j["labels"] = nullptr;
  }
  return j;
}

namespace {

[[noreturn]] void invalid(const std::string& what) { fail(ErrorKind::kValidation, what); }

std::size_t span_offset(const json& v, const std::string& text, const std::string& id) {
  if (!v.is_number_unsigned()) invalid("record " + id + ": span offset is not a non-negative integer");
  auto b = utf8::byte_offset(text, v.get<std::size_t>());
  if (!b) invalid("record " + id + ": span offset out of bounds");
  return *b;
}

// Problems with a parsed record's spans and labels, empty if consistent.
std::string check_record(const TrainingRecord& r, const SpecialTokens& tokens) {
  std::vector<CharSpan> spans = r.spans;
  std::sort(spans.begin(), spans.end(), [](const CharSpan& a, const CharSpan& b) { return a.start < b.start; });
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (spans[i].start >= spans[i].end) return "empty span";
    if (spans[i].end > r.text.size()) return "span past end of text";
    if (i > 0 && spans[i - 1].end > spans[i].start) return "overlapping spans";
  }
  std::vector<RelationType> span_relations;
  std::array<int, 3> roles{};
  for (const CharSpan& s : r.spans) {
    ++roles[static_cast<int>(s.role)];
    if (s.role != SpanRole::kRelation) continue;
    auto rel = tokens.relation_of(std::string_view(r.text).substr(s.start, s.end - s.start));
    if (!rel) return "relation span does not slice to a relation token";
    span_relations.push_back(*rel);
  }
  switch (r.task) {
    case Task::kMlm:
      if (!r.spans.empty()) return "mlm record carries spans";
      if (!std::holds_alternative<std::monostate>(r.labels)) return "mlm record carries labels";
      break;
    case Task::kEp:
    case Task::kTc:
      if (roles != std::array<int, 3>{1, 1, 1}) return "expected exactly one head, tail and relation span";
      if (r.task == Task::kTc && !std::holds_alternative<bool>(r.labels)) return "tc record needs a boolean label";
      if (r.task == Task::kEp && !std::holds_alternative<std::monostate>(r.labels)) return "ep record carries labels";
      break;
    case Task::kLp: {
      if (roles[0] != 0 || roles[1] != 0) return "lp record has concept spans";
      const auto* labels = std::get_if<std::vector<RelationType>>(&r.labels);
      if (!labels) return "lp record needs relation labels";
      if (labels->size() != span_relations.size()) return "lp labels do not match relation spans";
      if (labels->size() < 2) return "lp record has fewer than two hops";
      for (std::size_t i = 0; i < labels->size(); ++i) {
        if ((*labels)[i] == RelationType::kSynonym) return "Synonym label in lp record";
        if ((*labels)[i] != span_relations[i]) return "lp label disagrees with its relation token";
      }
      break;
    }
  }
  return {};
}

std::string ratio(std::uint64_t part, std::uint64_t whole) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", whole == 0 ? 0.0 : static_cast<double>(part) / static_cast<double>(whole));
  return buf;
}

ordered_json tokens_to_json(const SpecialTokens& t) {
  ordered_json j;
  j["classification"] = t.classification;
  j["separator"] = t.separator;
  j["mask"] = t.mask;
  j["hidden_relation"] = t.hidden_relation;
  for (RelationType r : kAllRelations) j["relations"][relation_name(r)] = t.relation(r);
  return j;
}

SpecialTokens tokens_from_json(const json& j) {
  SpecialTokens t;
  t.classification = j.at("classification").get<std::string>();
  t.separator = j.at("separator").get<std::string>();
  t.mask = j.at("mask").get<std::string>();
  t.hidden_relation = j.at("hidden_relation").get<std::string>();
  for (RelationType r : kAllRelations) t.relations[relation_code(r)] = j.at("relations").at(relation_name(r)).get<std::string>();
  return t;
}

ordered_json per_task_json(const std::array<std::uint64_t, 4>& counts) {
  ordered_json j;
  for (Task t : kAllTasks) j[std::string(task_name(t))] = counts[task_index(t)];
  return j;
}

std::array<std::uint64_t, 4> per_task_from_json(const json& j) {
  std::array<std::uint64_t, 4> out{};
  for (Task t : kAllTasks) out[task_index(t)] = j.at(std::string(task_name(t))).get<std::uint64_t>();
  return out;
}

}  // namespace

TrainingRecord record_from_json(const json& j, const SpecialTokens& tokens) {
  (void)tokens;
  if (!j.is_object()) invalid("record is not an object");
  static const std::set<std::string> kFields = {"id", "task", "text", "spans", "labels"};
  std::set<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.insert(k);
  if (keys != kFields) invalid("record fields must be exactly id, task, text, spans, labels");

  TrainingRecord r;
  if (!j["id"].is_string() || j["id"].get<std::string>().empty()) invalid("record id must be a non-empty string");
  r.id = j["id"].get<std::string>();
  if (!j["task"].is_string()) invalid("record " + r.id + ": task must be a string");
  auto task = task_from_name(j["task"].get<std::string>());
  if (!task) invalid("record " + r.id + ": unknown task");
  r.task = *task;
  if (!j["text"].is_string()) invalid("record " + r.id + ": text must be a string");
  r.text = j["text"].get<std::string>();
  if (r.text.empty() || !utf8::valid(r.text)) invalid("record " + r.id + ": text must be non-empty UTF-8");
  if (!j["spans"].is_array()) invalid("record " + r.id + ": spans must be an array");
  for (const auto& s : j["spans"]) {
    if (!s.is_object() || s.size() != 3 || !s.contains("role") || !s.contains("start") || !s.contains("end")) {
      invalid("record " + r.id + ": span must have exactly role, start, end");
    }
    auto role = s["role"].is_string() ? span_role_from_name(s["role"].get<std::string>()) : std::nullopt;
    if (!role) invalid("record " + r.id + ": unknown span role");
    r.spans.push_back(CharSpan{*role, span_offset(s["start"], r.text, r.id), span_offset(s["end"], r.text, r.id)});
  }
  const json& labels = j["labels"];
  if (labels.is_boolean()) {
    r.labels = labels.get<bool>();
  } else if (labels.is_array()) {
    std::vector<RelationType> rels;
    for (const auto& code : labels) {
      auto rel = code.is_number_integer() ? relation_from_code(code.get<int>()) : std::nullopt;
      if (!rel) invalid("record " + r.id + ": bad relation code in labels");
      rels.push_back(*rel);
    }
    r.labels = std::move(rels);
  } else if (!labels.is_null()) {
    invalid("record " + r.id + ": labels must be null, a boolean or an array of relation codes");
  }
  return r;
}

ordered_json Manifest::to_json() const {
  ordered_json j;
  j["schema_version"] = schema_version;
  j["tool"] = "kgcorpus";
  j["tool_version"] = tool_version;
  j["seed"] = seed;
  j["language"] = language;
  j["counts"] = per_task_json(counts);
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  j["total_records"] = total;
  j["weights"] = {{"alpha_ep", weights.alpha_ep}, {"alpha_lp", weights.alpha_lp}, {"alpha_tc", weights.alpha_tc},
                  {"n_ep", weights.n_ep},         {"n_lp", weights.n_lp},         {"n_tc", weights.n_tc},
                  {"n_mlm", weights.n_mlm}};
  j["special_tokens"] = tokens_to_json(tokens);
  j["shards"] = ordered_json::array();
  for (const ShardInfo& s : shards) {
    j["shards"].push_back(ordered_json{{"file", s.file},
                                       {"records", s.records},
                                       {"per_task", per_task_json(s.per_task)},
                                       {"sha256", s.sha256},
                                       {"bytes", s.bytes}});
  }
  j["total_bytes"] = total_bytes;
  j["total_bytes_unit"] = "on-disk bytes of all shard files";
  j["details"] = details;
  return j;
}

Manifest Manifest::from_json(const json& j) {
  Manifest m;
  try {
    m.schema_version = j.at("schema_version").get<int>();
    m.tool_version = j.at("tool_version").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.language = j.at("language").get<std::string>();
    m.counts = per_task_from_json(j.at("counts"));
    const json& w = j.at("weights");
    m.weights.alpha_ep = w.at("alpha_ep").get<double>();
    m.weights.alpha_lp = w.at("alpha_lp").get<double>();
    m.weights.alpha_tc = w.at("alpha_tc").get<double>();
    m.weights.n_ep = w.at("n_ep").get<std::uint64_t>();
    m.weights.n_lp = w.at("n_lp").get<std::uint64_t>();
    m.weights.n_tc = w.at("n_tc").get<std::uint64_t>();
    m.weights.n_mlm = w.at("n_mlm").get<std::uint64_t>();
    m.tokens = tokens_from_json(j.at("special_tokens"));
    for (const json& s : j.at("shards")) {
      m.shards.push_back(ShardInfo{s.at("file").get<std::string>(), s.at("records").get<std::uint64_t>(),
                                   per_task_from_json(s.at("per_task")), s.at("sha256").get<std::string>(),
                                   s.at("bytes").get<std::uint64_t>()});
    }
    m.total_bytes = j.at("total_bytes").get<std::uint64_t>();
    if (j.contains("details")) m.details = j.at("details");
  } catch (const json::exception& e) {
    invalid(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

Manifest emit(std::span<const TrainingRecord> records, const std::filesystem::path& out_dir, std::size_t shards,
              std::uint64_t seed, const CorpusMetadata& metadata) {
  namespace fs = std::filesystem;
  if (shards == 0) fail(ErrorKind::kUsage, "shard count must be at least 1");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) fail(ErrorKind::kIo, "cannot create " + out_dir.string() + ": " + ec.message());

  // Invalidate whatever corpus was here before touching any shard.
  fs::remove(out_dir / kManifestFile, ec);
  if (ec) fail(ErrorKind::kIo, "cannot remove old manifest: " + ec.message());
  for (const auto& entry : fs::directory_iterator(out_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("part-", 0) == 0 && (name.ends_with(".jsonl") || name.ends_with(".jsonl.tmp"))) fs::remove(entry.path());
  }

  Manifest m;
  m.tool_version = KGCORPUS_VERSION;
  m.seed = seed;
  m.language = metadata.language;
  m.weights = metadata.weights;
  m.tokens = metadata.tokens;
  m.details = metadata.details;

  struct Writer {
    std::ofstream out;
    Sha256 digest;
    ShardInfo info;
    fs::path tmp;
  };
  std::vector<Writer> writers(shards);
  for (std::size_t i = 0; i < shards; ++i) {
    writers[i].info.file = shard_file_name(i);
    writers[i].tmp = out_dir / (writers[i].info.file + ".tmp");
    writers[i].out.open(writers[i].tmp, std::ios::binary | std::ios::trunc);
    if (!writers[i].out) fail(ErrorKind::kIo, "cannot write " + writers[i].tmp.string());
  }

  const std::uint64_t salt = mix64(seed ^ 0x5ead5eedULL);
  for (const TrainingRecord& r : records) {
    Writer& w = writers[mix64(hash_string(r.id) ^ salt) % shards];
    std::string line = record_to_json(r).dump();
    line.push_back('\n');
    w.out.write(line.data(), static_cast<std::streamsize>(line.size()));
    w.digest.update(line);
    ++w.info.records;
    ++w.info.per_task[task_index(r.task)];
    w.info.bytes += line.size();
    ++m.counts[task_index(r.task)];
  }

  for (Writer& w : writers) {
    w.out.flush();
    w.out.close();
    if (!w.out) fail(ErrorKind::kIo, "write failed for " + w.tmp.string());
    fs::rename(w.tmp, out_dir / w.info.file, ec);
    if (ec) fail(ErrorKind::kIo, "cannot rename " + w.tmp.string() + ": " + ec.message());
    w.info.sha256 = w.digest.hex_digest();
    m.total_bytes += w.info.bytes;
    m.shards.push_back(std::move(w.info));
  }

  const fs::path tmp = out_dir / (std::string(kManifestFile) + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << m.to_json().dump(2) << '\n';
    out.flush();
    if (!out) fail(ErrorKind::kIo, "cannot write manifest");
  }
  fs::rename(tmp, out_dir / kManifestFile, ec);
  if (ec) fail(ErrorKind::kIo, "cannot publish manifest: " + ec.message());
  return m;
}

Manifest read_manifest(const std::filesystem::path& corpus_dir) {
  const auto path = corpus_dir / kManifestFile;
  std::ifstream in(path, std::ios::binary);
  if (!in) invalid("invalid corpus: no manifest at " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) invalid("invalid corpus: manifest is not valid JSON");
  return Manifest::from_json(j);
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string ValidationReport::to_text() const {
  std::ostringstream out;
  for (const auto& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << ": " << c.detail;
    out << '\n';
  }
  out << (ok() ? "corpus valid" : "corpus INVALID") << '\n';
  return out.str();
}

ValidationReport validate(const std::filesystem::path& corpus_dir, const KnowledgeGraph* graph) {
  namespace fs = std::filesystem;
  const Manifest m = read_manifest(corpus_dir);
  ValidationReport report;
  auto check = [&](std::string name, bool passed, std::string detail) {
    report.checks.push_back(ValidationCheck{std::move(name), passed, std::move(detail)});
  };

  check("schema_version", m.schema_version == kManifestSchemaVersion,
        "manifest schema " + std::to_string(m.schema_version));

  // Digests and sizes.
  std::string shard_problem;
  std::uint64_t bytes_on_disk = 0;
  for (const ShardInfo& s : m.shards) {
    const fs::path p = corpus_dir / s.file;
    std::error_code ec;
    if (!fs::exists(p, ec)) {
      shard_problem = s.file + " is missing";
      break;
    }
    const auto size = fs::file_size(p, ec);
    bytes_on_disk += size;
    if (size != s.bytes) {
      shard_problem = s.file + " size " + std::to_string(size) + " != " + std::to_string(s.bytes);
      break;
    }
    if (sha256_file(p) != s.sha256) {
      shard_problem = s.file + " digest mismatch";
      break;
    }
  }
  check("shard_digests", shard_problem.empty(), shard_problem);
  std::uint64_t declared_bytes = 0;
  for (const ShardInfo& s : m.shards) declared_bytes += s.bytes;
  check("total_bytes", declared_bytes == m.total_bytes && (!shard_problem.empty() || bytes_on_disk == m.total_bytes),
        std::to_string(m.total_bytes) + " bytes declared");

  // Record-level checks.
  std::string schema_problem;
  std::string span_problem;
  std::string count_problem;
  std::unordered_set<std::string> ids;
  std::uint64_t duplicate_ids = 0;
  std::array<std::uint64_t, 4> totals{};
  std::array<std::uint64_t, 3> provenance{};
  std::uint64_t provenance_label_mismatch = 0;
  std::vector<TrainingRecord> graph_checked;

  for (const ShardInfo& s : m.shards) {
    const fs::path p = corpus_dir / s.file;
    if (!fs::exists(p)) continue;
    std::array<std::uint64_t, 4> per_task{};
    for_each_line(p, [&](std::string_view line, std::uint64_t number) {
      TrainingRecord r;
      try {
        json j = json::parse(line);
        r = record_from_json(j, m.tokens);
      } catch (const std::exception& e) {
        if (schema_problem.empty()) schema_problem = s.file + ":" + std::to_string(number) + ": " + e.what();
        return;
      }
      ++per_task[task_index(r.task)];
      if (!ids.insert(r.id).second) ++duplicate_ids;
      std::string problem = check_record(r, m.tokens);
      if (!problem.empty() && span_problem.empty()) span_problem = "record " + r.id + ": " + problem;
      if (r.task == Task::kTc) {
        auto p = provenance_from_id(r.id);
        const bool* label = std::get_if<bool>(&r.labels);
        if (!p || !label) {
          ++provenance_label_mismatch;
        } else {
          ++provenance[static_cast<int>(*p)];
          if (*label != (*p == TcProvenance::kPositive)) ++provenance_label_mismatch;
        }
      }
      if (graph && problem.empty() && r.task != Task::kMlm) graph_checked.push_back(std::move(r));
    });
    if (per_task != s.per_task && count_problem.empty()) count_problem = s.file + " per-task counts differ from manifest";
    for (std::size_t t = 0; t < 4; ++t) totals[t] += per_task[t];
  }
  check("record_schema", schema_problem.empty(), schema_problem);
  check("record_ids", duplicate_ids == 0, std::to_string(duplicate_ids) + " duplicate ids");
  if (count_problem.empty() && totals != m.counts) count_problem = "record totals differ from manifest counts";
  check("task_counts", count_problem.empty(), count_problem);
  check("span_consistency", span_problem.empty(), span_problem);

  // Composition of the triple classification stream.
  {
    const std::uint64_t n = m.counts[task_index(Task::kTc)];
    const double half = static_cast<double>(n) / 2, quarter = static_cast<double>(n) / 4;
    const bool ok = provenance_label_mismatch == 0 && std::abs(static_cast<double>(provenance[0]) - half) <= 1 &&
                    std::abs(static_cast<double>(provenance[1]) - quarter) <= 1 &&
                    std::abs(static_cast<double>(provenance[2]) - quarter) <= 1;
    std::string detail = "observed positive=" + ratio(provenance[0], n) + " negative-entities=" + ratio(provenance[1], n) +
                         " negative-relation=" + ratio(provenance[2], n) + " over " + std::to_string(n) +
                         " records (expected 0.500/0.250/0.250)";
    if (provenance_label_mismatch) detail += "; " + std::to_string(provenance_label_mismatch) + " label/provenance mismatches";
    check("tc_composition", ok, detail);
  }

  // Weights must follow from the declared counts.
  {
    std::map<Task, std::uint64_t> active;
    for (Task t : kGraphTasks) {
      if (m.counts[task_index(t)] > 0) active[t] = m.counts[task_index(t)];
    }
    std::string problem;
    TaskWeights expected = active.empty() ? TaskWeights{} : compute_weights(active);
    for (Task t : kGraphTasks) {
      if (std::abs(expected.alpha(t) - m.weights.alpha(t)) > 1e-12) problem = "alpha_" + std::string(task_name(t)) + " differs";
      if (m.weights.count(t) != m.counts[task_index(t)]) problem = "n_" + std::string(task_name(t)) + " differs from counts";
    }
    if (m.weights.n_mlm != m.counts[task_index(Task::kMlm)]) problem = "n_mlm differs from counts";
    check("task_weights", problem.empty(), problem);
  }

  if (graph) {
    // Terms may be shared between concepts, so each surface form maps to all
    // concepts carrying it and a hop passes if any pairing is an edge.
    std::unordered_map<std::string, std::vector<ConceptId>> by_term;
    for (std::size_t i = 0; i < graph->concept_count(); ++i) {
      for (const Term& t : graph->concepts()[i].terms) {
        if (t.language == m.language) by_term[t.text].push_back(ConceptId{static_cast<std::uint32_t>(i)});
      }
    }
    auto ids_of = [&](std::string_view text) -> const std::vector<ConceptId>* {
      auto it = by_term.find(std::string(text));
      return it == by_term.end() ? nullptr : &it->second;
    };
    auto hop = [&](const std::vector<ConceptId>& from, RelationType r, const std::vector<ConceptId>& to) {
      std::vector<ConceptId> reached;
      for (ConceptId b : to) {
        for (ConceptId a : from) {
          if (graph->contains(Triple{a, r, b})) {
            reached.push_back(b);
            break;
          }
        }
      }
      return reached;
    };
    std::string problem;
    std::uint64_t checked = 0;
    std::uint64_t unresolved = 0;
    std::uint64_t truncated = 0;
    if (m.details.contains("rendering") && m.details["rendering"].contains("truncated_records")) {
      truncated = m.details["rendering"]["truncated_records"].get<std::uint64_t>();
    }
    for (const TrainingRecord& r : graph_checked) {
      if (r.task == Task::kTc && !std::get<bool>(r.labels)) continue;
      std::vector<CharSpan> rel_spans;
      for (const CharSpan& s : r.spans) {
        if (s.role == SpanRole::kRelation) rel_spans.push_back(s);
      }
      std::sort(rel_spans.begin(), rel_spans.end(), [](const CharSpan& a, const CharSpan& b) { return a.start < b.start; });
      // Concept strings sit between relation spans, separated by single spaces.
      std::vector<std::string_view> segments;
      std::size_t cursor = 0;
      for (const CharSpan& s : rel_spans) {
        segments.push_back(std::string_view(r.text).substr(cursor, s.start > cursor ? s.start - cursor - 1 : 0));
        cursor = s.end + 1;
      }
      segments.push_back(cursor <= r.text.size() ? std::string_view(r.text).substr(cursor) : std::string_view());
      // Truncated terms no longer match the graph; the manifest says how many to expect.
      if (!std::all_of(segments.begin(), segments.end(), [&](std::string_view sv) { return ids_of(sv) != nullptr; })) {
        ++unresolved;
        continue;
      }
      std::vector<ConceptId> frontier = *ids_of(segments[0]);
      for (std::size_t i = 0; i < rel_spans.size() && !frontier.empty(); ++i) {
        auto rel = m.tokens.relation_of(std::string_view(r.text).substr(rel_spans[i].start, rel_spans[i].end - rel_spans[i].start));
        frontier = rel ? hop(frontier, *rel, *ids_of(segments[i + 1])) : std::vector<ConceptId>{};
      }
      if (frontier.empty()) {
        problem = "record " + r.id + " is not supported by the graph";
        break;
      }
      ++checked;
    }
    if (problem.empty() && unresolved > truncated) {
      problem = std::to_string(unresolved) + " records name terms absent from the graph, but only " +
                std::to_string(truncated) + " were truncated";
    }
    check("graph_soundness", problem.empty(),
          problem.empty() ? std::to_string(checked) + " records checked against the graph, " + std::to_string(unresolved) +
                                " truncated records skipped"
                          : problem);
  }
  return report;
}

}  // namespace kgcorpus
