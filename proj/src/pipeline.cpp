#include "kgcorpus/pipeline.hpp"

#include <string>

#include "kgcorpus/error.hpp"
#include "kgcorpus/freetext.hpp"
#include "kgcorpus/objective.hpp"
#include "kgcorpus/random.hpp"

namespace kgcorpus {
namespace {

constexpr std::uint64_t kTermStream = 0x7e12;
constexpr std::uint64_t kInterleaveStream = 0x1a7e;

std::string triple_key(const KnowledgeGraph& kg, const Triple& t) {
  return kg.concept_at(t.head).cui + "|" + std::string(relation_release_code(t.relation)) + "|" + kg.concept_at(t.tail).cui;
}

nlohmann::ordered_json report_json(const Report& r) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.counts) j[k] = v;
  return j;
}

nlohmann::ordered_json targets_json(const std::vector<StratumTarget>& targets) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& t : targets) j[t.group] = t.count;
  return j;
}

TrainingRecord triple_record(const KnowledgeGraph& kg, Task task, std::string_view tag, const Triple& triple,
                             const std::string& key, std::uint64_t slot, const BuildConfig& cfg, Report& report) {
  Rng rng(derive_seed(cfg.seed, {kTermStream, task_index(task), slot}));
  auto [head, tail] = realize_terms(kg, triple, cfg.language, rng, report);
  if (fit_to_budget(head, tail, cfg.max_sequence_units)) report.add(std::string(task_name(task)) + ".truncated");
  Rendered r = render_triple(head, triple.relation, tail, cfg.tokens);
  return TrainingRecord{make_record_id(task, tag, key, slot), task, std::move(r.text), std::move(r.spans), {}};
}

}  // namespace

void BuildConfig::validate() const {
  if (language.empty()) fail(ErrorKind::kUsage, "language must not be empty");
  if (shards == 0) fail(ErrorKind::kUsage, "shard count must be at least 1");
  if (max_hops < 2) fail(ErrorKind::kUsage, "max hops must be at least 2");
  if (!(mlm_probability >= 0 && mlm_probability <= 1)) fail(ErrorKind::kUsage, "mlm probability must be in [0, 1]");
  if (max_sequence_units < 4) fail(ErrorKind::kUsage, "sequence length must allow at least 4 units");
  if (interleave_batch_size == 0) fail(ErrorKind::kUsage, "interleave batch size must be at least 1");
  if (disabled.contains(Task::kMlm)) fail(ErrorKind::kUsage, "the masked-language stream cannot be disabled; omit --freetext");
  tokens.validate();
  const std::pair<Task, std::uint64_t> graph_sizes[] = {{Task::kTc, sizes.tc}, {Task::kEp, sizes.ep}, {Task::kLp, sizes.lp}};
  for (const auto& [task, n] : graph_sizes) {
    if (enabled(task) && n == 0) {
      fail(ErrorKind::kUsage, "task " + std::string(task_name(task)) + " has size 0; disable it with --disable-task " +
                                  std::string(task_name(task)));
    }
  }
}

std::vector<TrainingRecord> render_tc(const KnowledgeGraph& kg, const std::vector<TcExample>& examples,
                                      const BuildConfig& cfg, Report& report) {
  std::vector<TrainingRecord> out;
  out.reserve(examples.size());
  for (const TcExample& e : examples) {
    const std::string key = triple_key(kg, e.triple) + "<" + triple_key(kg, e.source);
    TrainingRecord r = triple_record(kg, Task::kTc, provenance_tag(e.provenance), e.triple, key, e.slot, cfg, report);
    r.labels = e.label;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<TrainingRecord> render_ep(const KnowledgeGraph& kg, const std::vector<EpExample>& examples,
                                      const BuildConfig& cfg, Report& report) {
  std::vector<TrainingRecord> out;
  out.reserve(examples.size());
  for (const EpExample& e : examples) {
    out.push_back(triple_record(kg, Task::kEp, "edge", e.triple, triple_key(kg, e.triple), e.slot, cfg, report));
  }
  return out;
}

std::vector<TrainingRecord> render_lp(const KnowledgeGraph& kg, const std::vector<Path>& paths, const BuildConfig& cfg,
                                      Report& report) {
  std::vector<TrainingRecord> out;
  out.reserve(paths.size());
  for (const Path& p : paths) {
    RenderedPath r = render_path(realize_path_terms(kg, p, cfg.language), p.relations, cfg.tokens);
    // Paths are not cut: a partial path would break the hop structure.
    if (whitespace_units(r.text).size() + 2 > cfg.max_sequence_units) report.add("lp.over_budget");
    std::string key = kg.concept_at(p.concepts[0]).cui;
    for (std::size_t i = 0; i < p.relations.size(); ++i) {
      key += "|" + std::string(relation_release_code(p.relations[i])) + "|" + kg.concept_at(p.concepts[i + 1]).cui;
    }
    out.push_back(TrainingRecord{make_record_id(Task::kLp, "path", key, p.slot), Task::kLp, std::move(r.text),
                                 std::move(r.spans), std::move(r.labels)});
  }
  return out;
}

BuildResult build_corpus(const KnowledgeGraph& kg, const Report& ingest_report, const BuildConfig& cfg) {
  cfg.validate();
  if (!kg.frozen()) fail(ErrorKind::kUsage, "graph must be frozen before building a corpus");
  const KnowledgeGraph graph = restrict_to_language(kg, cfg.language);
  if (graph.concept_count() == 0) fail(ErrorKind::kData, "no concept has a term in language " + cfg.language);
  if (auto clashes = find_token_collisions(graph, cfg.tokens, cfg.language, 5); !clashes.empty()) {
    std::string what = "terms contain special tokens, choose different tokens:";
    for (const auto& c : clashes) what += "\n  " + c;
    fail(ErrorKind::kData, what);
  }

  BuildResult result;
  Report& report = result.report;
  TaskSizes sizes{cfg.enabled(Task::kTc) ? cfg.sizes.tc : 0, cfg.enabled(Task::kEp) ? cfg.sizes.ep : 0,
                  cfg.enabled(Task::kLp) ? cfg.sizes.lp : 0};
  SamplingIndex index(graph, cfg.group_equality);
  SamplePlan plan = plan_strata(index, sizes, cfg.seed, cfg.max_attempts);
  SamplerOptions options;
  options.max_hops = cfg.max_hops;

  std::vector<TrainingRecord> records;
  auto append = [&](std::vector<TrainingRecord>&& part) {
    records.insert(records.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  };
  append(render_tc(graph, sample_tc(index, plan, report, options), cfg, report));
  append(render_ep(graph, sample_ep(index, plan, report, options), cfg, report));
  append(render_lp(graph, sample_paths(index, plan, report, options), cfg, report));

  std::uint64_t n_mlm = 0;
  if (!cfg.freetext.empty()) {
    auto docs = ingest_freetext(cfg.freetext, cfg.language, report, cfg.strict_freetext);
    for (std::uint64_t i = 0; i < docs.size(); ++i) {
      records.push_back(TrainingRecord{make_record_id(Task::kMlm, "doc", docs[i].id, i), Task::kMlm,
                                       std::move(docs[i].text), {}, {}});
    }
    n_mlm = docs.size();
  }

  std::map<Task, std::uint64_t> active;
  if (sizes.tc) active[Task::kTc] = sizes.tc;
  if (sizes.ep) active[Task::kEp] = sizes.ep;
  if (sizes.lp) active[Task::kLp] = sizes.lp;
  CorpusMetadata meta;
  meta.language = cfg.language;
  meta.weights = compute_weights(active, n_mlm);
  meta.tokens = cfg.tokens;

  auto& d = meta.details;
  d["graph"] = {{"concepts", graph.concept_count()}, {"edges", graph.edge_count()}};
  d["plan"] = {{"tc", targets_json(plan.tc_targets)},
               {"ep", targets_json(plan.ep_targets)},
               {"lp", targets_json(plan.lp_targets)}};
  d["sampling"] = {{"max_hops", cfg.max_hops},
                   {"group_equality", cfg.group_equality == GroupEquality::kCanonical ? "canonical" : "intersection"},
                   {"max_attempts", plan.max_attempts},
                   {"block_size", options.block_size},
                   {"stratum_failure_limit", options.stratum_failure_limit}};
  d["disabled_tasks"] = nlohmann::ordered_json::array();
  for (Task t : cfg.disabled) d["disabled_tasks"].push_back(task_name(t));
  d["tc_composition"] = {{"positive", report.get("tc.positive")},
                         {"negative-entities", report.get("tc.negative-entities")},
                         {"negative-relation", report.get("tc.negative-relation")}};
  d["masking"] = {{"mlm_probability", cfg.mlm_probability},
                  {"mlm_unit", "whitespace-delimited word"},
                  {"mlm_replacement", {{"mask", 0.8}, {"random", 0.1}, {"keep", 0.1}}},
                  {"ep", "every subword of the tail span"},
                  {"lp_positions", cfg.lp_mask_all ? "all" : "one"},
                  {"lp_replacement", cfg.tokens.hidden_relation}};
  d["rendering"] = {{"max_sequence_units", cfg.max_sequence_units},
                    {"unit", "whitespace-delimited word"},
                    {"truncated_records", report.get("tc.truncated") + report.get("ep.truncated")}};
  d["loss"] = loss_contract_json(meta.weights);
  d["interleave"] = {{"seed", derive_seed(cfg.seed, {kInterleaveStream})}, {"batch_size", cfg.interleave_batch_size}};
  d["harness_defaults"] = {{"mlm_probability", 0.15}, {"sequence_length", 256}, {"batch_size", 32}};
  d["ingest_report"] = report_json(ingest_report);
  d["build_report"] = report_json(report);

  result.manifest = emit(records, cfg.out_dir, cfg.shards, cfg.seed, meta);
  return result;
}

}  // namespace kgcorpus
