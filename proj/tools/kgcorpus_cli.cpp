// Command-line front end: ingest, build, stats, synth, validate.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kgcorpus/corpus.hpp"
#include "kgcorpus/error.hpp"
#include "kgcorpus/graph_builder.hpp"
#include "kgcorpus/graph_cache.hpp"
#include "kgcorpus/pipeline.hpp"
#include "kgcorpus/synthetic.hpp"

namespace fs = std::filesystem;
using namespace kgcorpus;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// Flat "key = value" file. Repeated keys give repeated flags; '#' starts a comment line.
std::vector<std::pair<std::string, std::string>> read_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot read config " + path.string());
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(ErrorKind::kUsage, path.string() + ":" + std::to_string(number) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    for (char& c : key) {
      if (c == '_') c = '-';
    }
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    out.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return out;
}

// Splices config-file entries into argv as flags, skipping any key that the
// command line already sets, so explicit flags win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::optional<fs::path> config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (!config) return args;
  std::set<std::string> given;
  for (const std::string& a : args) {
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
  }
  for (const auto& [key, value] : read_config(*config)) {
    if (given.contains(key)) continue;
    if (value == "true") {
      args.push_back("--" + key);
    } else if (value != "false") {
      args.push_back("--" + key + "=" + value);
    }
  }
  return args;
}

struct GraphSource {
  std::string graph;
  std::string release_dir;
  std::vector<std::string> languages;
  std::vector<std::string> allowed_groups;
  std::vector<std::string> relation_codes;
  bool flip_orientation = false;
  bool strict = false;

  void add_to(CLI::App* app, bool with_cache) {
    if (with_cache) app->add_option("--graph", graph, "Graph cache written by `ingest`");
    app->add_option("--release-dir", release_dir, "Directory with MRCONSO.RRF, MRREL.RRF, MRSTY.RRF, SemGroups.txt");
    app->add_option("--ingest-lang", languages, "Keep only these term languages during ingest (repeatable)");
    app->add_option("--allowed-group", allowed_groups, "Keep only these semantic groups (repeatable)");
    app->add_option("--relation-code", relation_codes, "CODE=Relation mapping replacing the defaults (repeatable)");
    app->add_flag("--flip-orientation", flip_orientation, "Read head from the first concept column");
    app->add_flag("--strict", strict, "Abort on the first malformed row");
  }

  IngestConfig ingest_config() const {
    IngestConfig cfg = IngestConfig::with_defaults();
    cfg.languages.insert(languages.begin(), languages.end());
    cfg.allowed_groups.insert(allowed_groups.begin(), allowed_groups.end());
    if (!relation_codes.empty()) {
      cfg.relation_codes.clear();
      for (const std::string& m : relation_codes) {
        const auto eq = m.find('=');
        auto rel = eq == std::string::npos ? std::nullopt : relation_from_name(m.substr(eq + 1));
        if (!rel) fail(ErrorKind::kUsage, "bad --relation-code '" + m + "', expected CODE=Relation");
        cfg.relation_codes[m.substr(0, eq)] = *rel;
      }
    }
    cfg.flip_orientation = flip_orientation;
    cfg.strict = strict;
    return cfg;
  }

  LoadedGraph load() const {
    if (!graph.empty() && !release_dir.empty()) fail(ErrorKind::kUsage, "give either --graph or --release-dir, not both");
    if (!graph.empty()) return load_graph_cache(graph);
    if (release_dir.empty()) fail(ErrorKind::kUsage, "a graph source is required: --graph or --release-dir");
    auto result = ingest_release(ReleaseFiles::in_directory(release_dir), ingest_config());
    return LoadedGraph{std::move(result.graph), std::move(result.report)};
  }
};

int run(int argc, char** argv) {
  CLI::App app{"Compiles a biomedical knowledge graph into multi-task pre-training corpora", "kgcorpus"};
  app.set_version_flag("--version", std::string(KGCORPUS_VERSION));
  app.require_subcommand(1);

  // ingest
  GraphSource ingest_src;
  std::string ingest_out;
  std::string ingest_report_path;
  auto* ingest = app.add_subcommand("ingest", "Parse release files into a frozen graph cache");
  ingest_src.add_to(ingest, false);
  ingest->add_option("--out", ingest_out, "Graph cache path")->required();
  ingest->add_option("--report", ingest_report_path, "Also write the ingest report here");

  // build
  GraphSource build_src;
  BuildConfig build_cfg;
  std::vector<std::string> disabled;
  std::vector<std::string> freetext;
  std::vector<std::string> rel_tokens;
  std::string equality = "canonical";
  std::string lp_mask = "all";
  auto* build = app.add_subcommand("build", "Sample, render and emit a corpus");
  build_src.add_to(build, true);
  build->add_option("--lang", build_cfg.language, "Term language of the corpus")->capture_default_str();
  build->add_option("--seed", build_cfg.seed, "Master seed")->capture_default_str();
  build->add_option("--tc-size", build_cfg.sizes.tc, "Triple classification records")->capture_default_str();
  build->add_option("--ep-size", build_cfg.sizes.ep, "Entity prediction records")->capture_default_str();
  build->add_option("--lp-size", build_cfg.sizes.lp, "Link prediction paths")->capture_default_str();
  build->add_option("--max-hops", build_cfg.max_hops, "Longest path")->capture_default_str();
  build->add_option("--mlm-prob", build_cfg.mlm_probability, "Masking probability recorded for consumers")->capture_default_str();
  build->add_option("--lp-mask", lp_mask, "Relation positions masked per path")->check(CLI::IsMember({"all", "one"}));
  build->add_option("--freetext", freetext, "Free-text file or directory for the mlm stream (repeatable)");
  build->add_option("--out-dir", build_cfg.out_dir, "Output directory")->capture_default_str();
  build->add_option("--shards", build_cfg.shards, "Number of shard files")->capture_default_str();
  build->add_option("--disable-task", disabled, "Drop a graph task from the mix (repeatable)")
      ->check(CLI::IsMember({"tc", "ep", "lp"}));
  build->add_option("--max-seq-len", build_cfg.max_sequence_units, "Word budget per triple sequence")->capture_default_str();
  build->add_option("--group-equality", equality, "How negative strategies compare groups")
      ->check(CLI::IsMember({"canonical", "intersection"}));
  build->add_option("--max-attempts", build_cfg.max_attempts, "Draws per slot before a stratum counts a failure");
  build->add_option("--batch-size", build_cfg.interleave_batch_size, "Interleave batch size recorded in the manifest");
  build->add_option("--mask-token", build_cfg.tokens.mask);
  build->add_option("--hidden-relation-token", build_cfg.tokens.hidden_relation);
  build->add_option("--cls-token", build_cfg.tokens.classification);
  build->add_option("--sep-token", build_cfg.tokens.separator);
  build->add_option("--relation-token", rel_tokens, "Relation=TOKEN override (repeatable)");
  build->add_flag("--strict-freetext", build_cfg.strict_freetext, "Abort on undecodable free-text files");

  // stats
  GraphSource stats_src;
  std::vector<std::string> stats_langs;
  bool stats_json = false;
  auto* stats = app.add_subcommand("stats", "Print terms, concepts and relations per language");
  stats_src.add_to(stats, true);
  stats->add_option("--lang", stats_langs, "Languages to report (default: all)");
  stats->add_flag("--json", stats_json, "Machine-readable output");

  // synth
  SyntheticKgSpec spec;
  std::string synth_out;
  std::string synth_langs;
  std::uint64_t edges_per_relation = 100;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic release with known tallies");
  synth->add_option("--out-dir", synth_out, "Directory for the release files")->required();
  synth->add_option("--concepts", spec.concept_count)->capture_default_str();
  synth->add_option("--edges-per-relation", edges_per_relation)->capture_default_str();
  synth->add_option("--languages", synth_langs, "Comma-separated, first is primary (default ENG)");
  synth->add_option("--min-terms", spec.min_terms)->capture_default_str();
  synth->add_option("--max-terms", spec.max_terms)->capture_default_str();
  synth->add_option("--secondary-language-rate", spec.secondary_language_rate)->capture_default_str();
  synth->add_option("--multi-group-rate", spec.multi_group_rate)->capture_default_str();
  synth->add_option("--unmapped-rows", spec.unmapped_relation_rows)->capture_default_str();
  synth->add_option("--duplicate-rows", spec.duplicate_relation_rows)->capture_default_str();
  synth->add_option("--seed", spec.seed)->capture_default_str();

  // validate
  GraphSource validate_src;
  std::string corpus_dir;
  auto* validate_cmd = app.add_subcommand("validate", "Re-check an emitted corpus");
  validate_cmd->add_option("corpus", corpus_dir, "Corpus directory")->required();
  validate_src.add_to(validate_cmd, true);

  std::vector<std::string> args(argv + 1, argv + argc);
  args = expand_config(std::move(args));
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*ingest) {
    if (ingest_src.release_dir.empty()) fail(ErrorKind::kUsage, "ingest needs --release-dir");
    auto result = ingest_release(ReleaseFiles::in_directory(ingest_src.release_dir), ingest_src.ingest_config());
    save_graph_cache(ingest_out, result.graph, result.report);
    const std::string text = result.report.to_text();
    std::cout << text;
    if (!ingest_report_path.empty()) {
      std::ofstream out(ingest_report_path);
      out << text;
      if (!out) fail(ErrorKind::kIo, "cannot write " + ingest_report_path);
    }
    return kExitOk;
  }

  if (*build) {
    for (const std::string& t : disabled) build_cfg.disabled.insert(*task_from_name(t));
    for (const std::string& f : freetext) build_cfg.freetext.emplace_back(f);
    build_cfg.group_equality = equality == "canonical" ? GroupEquality::kCanonical : GroupEquality::kIntersection;
    build_cfg.lp_mask_all = lp_mask == "all";
    for (const std::string& m : rel_tokens) {
      const auto eq = m.find('=');
      auto rel = eq == std::string::npos ? std::nullopt : relation_from_name(m.substr(0, eq));
      if (!rel) fail(ErrorKind::kUsage, "bad --relation-token '" + m + "', expected Relation=TOKEN");
      build_cfg.tokens.relations[relation_code(*rel)] = m.substr(eq + 1);
    }
    build_cfg.validate();
    auto loaded = build_src.load();
    auto result = build_corpus(loaded.graph, loaded.report, build_cfg);
    std::cout << "wrote " << build_cfg.out_dir.string() << "\n";
    for (Task t : kAllTasks) std::cout << task_name(t) << " = " << result.manifest.counts[task_index(t)] << "\n";
    std::cout << "alpha_ep = " << result.manifest.weights.alpha_ep << "\nalpha_lp = " << result.manifest.weights.alpha_lp
              << "\nalpha_tc = " << result.manifest.weights.alpha_tc << "\n"
              << result.report.to_text();
    return kExitOk;
  }

  if (*stats) {
    auto loaded = stats_src.load();
    if (stats_langs.empty()) stats_langs = loaded.graph.languages();
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    if (!stats_json) std::cout << "language\tterms\tcuis\trelations\n";
    for (const std::string& lang : stats_langs) {
      const GraphStatistics s = graph_statistics(loaded.graph, lang);
      if (stats_json) {
        j[lang] = {{"terms", s.terms}, {"cuis", s.cuis}, {"relations", s.relations}};
      } else {
        std::cout << lang << '\t' << s.terms << '\t' << s.cuis << '\t' << s.relations << '\n';
      }
    }
    if (stats_json) std::cout << j.dump(2) << '\n';
    return kExitOk;
  }

  if (*synth) {
    if (!synth_langs.empty()) {
      spec.languages.clear();
      std::stringstream ss(synth_langs);
      for (std::string lang; std::getline(ss, lang, ',');) spec.languages.push_back(trim(lang));
    }
    spec.edges_per_relation.fill(edges_per_relation);
    const GroundTruth truth = generate_synthetic_kg(spec, synth_out);
    std::ofstream out(fs::path(synth_out) / "tallies.json");
    out << truth.to_json().dump(2) << '\n';
    if (!out) fail(ErrorKind::kIo, "cannot write tallies.json");
    std::cout << truth.to_json().dump(2) << '\n';
    return kExitOk;
  }

  if (*validate_cmd) {
    std::optional<LoadedGraph> loaded;
    if (!validate_src.graph.empty() || !validate_src.release_dir.empty()) loaded = validate_src.load();
    const ValidationReport report = validate(corpus_dir, loaded ? &loaded->graph : nullptr);
    std::cout << report.to_text();
    return report.ok() ? kExitOk : kExitValidation;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "kgcorpus: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::kUsage: return kExitUsage;
      case ErrorKind::kData:
      case ErrorKind::kValidation: return kExitValidation;
      case ErrorKind::kIo: return kExitIo;
    }
  } catch (const fs::filesystem_error& e) {
    std::cerr << "kgcorpus: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "kgcorpus: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}
