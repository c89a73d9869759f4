#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>

#include "kgcorpus/error.hpp"
#include "kgcorpus/pipeline.hpp"
#include "test_support.hpp"

using namespace kgcorpus;

namespace {

SyntheticKgSpec small_spec() {
  SyntheticKgSpec s;
  s.concept_count = 400;
  s.edges_per_relation = {150, 150, 80, 40, 40, 120, 120};
  s.languages = {"ENG", "FRE"};
  s.seed = 17;
  return s;
}

const KnowledgeGraph& shared_graph() {
  static kgtest::TempDir dir;
  static KnowledgeGraph kg = kgtest::synthetic_graph(small_spec(), dir.path());
  return kg;
}

BuildConfig small_config(const std::filesystem::path& out) {
  BuildConfig c;
  c.sizes = {400, 200, 200};
  c.out_dir = out;
  c.seed = 9;
  return c;
}

std::vector<std::string> corpus_lines(const std::filesystem::path& dir) {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.path().extension() != ".jsonl") continue;
    std::ifstream in(e.path());
    for (std::string l; std::getline(in, l);) out.push_back(l);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Pipeline, BuildsAValidCorpus) {
  kgtest::TempDir out, text;
  kgtest::write_file(text / "note.txt", "a short clinical note");
  BuildConfig cfg = small_config(out.path());
  cfg.freetext = {text.path()};
  cfg.shards = 3;
  BuildResult r = build_corpus(shared_graph(), Report{}, cfg);
  EXPECT_EQ(r.manifest.counts, (std::array<std::uint64_t, 4>{1, 200, 200, 400}));
  EXPECT_EQ(r.manifest.shards.size(), 3u);
  EXPECT_EQ(r.report.get("tc.positive"), 200u);
  EXPECT_EQ(r.report.get("tc.negative-entities"), 100u);
  EXPECT_EQ(r.report.get("tc.negative-relation"), 100u);
  EXPECT_EQ(r.manifest.details["masking"]["lp_positions"], "all");
  auto report = validate(out.path(), &shared_graph());
  EXPECT_TRUE(report.ok()) << report.to_text();
}

TEST(Pipeline, FrenchBuildUsesFrenchTerms) {
  kgtest::TempDir out;
  BuildConfig cfg = small_config(out.path());
  cfg.language = "FRE";
  build_corpus(shared_graph(), Report{}, cfg);
  Manifest m = read_manifest(out.path());
  EXPECT_EQ(m.language, "FRE");
  auto report = validate(out.path(), &shared_graph());
  EXPECT_TRUE(report.ok()) << report.to_text();
}

TEST(Pipeline, SameSeedSameBytes) {
  kgtest::TempDir a, b;
  BuildConfig ca = small_config(a.path()), cb = small_config(b.path());
  ca.shards = cb.shards = 2;
  build_corpus(shared_graph(), Report{}, ca);
  build_corpus(shared_graph(), Report{}, cb);
  for (const char* f : {"manifest.json", "part-00000.jsonl", "part-00001.jsonl"}) {
    EXPECT_EQ(kgtest::read_file(a / f), kgtest::read_file(b / f)) << f;
  }
}

TEST(Pipeline, DifferentSeedDifferentCorpus) {
  kgtest::TempDir a, b;
  BuildConfig ca = small_config(a.path()), cb = small_config(b.path());
  cb.seed = 10;
  build_corpus(shared_graph(), Report{}, ca);
  build_corpus(shared_graph(), Report{}, cb);
  EXPECT_NE(corpus_lines(a.path()), corpus_lines(b.path()));
}

TEST(Pipeline, ShardCountDoesNotChangeTheRecordMultiset) {
  kgtest::TempDir a, b;
  BuildConfig ca = small_config(a.path()), cb = small_config(b.path());
  ca.shards = 1;
  cb.shards = 7;
  build_corpus(shared_graph(), Report{}, ca);
  build_corpus(shared_graph(), Report{}, cb);
  EXPECT_EQ(corpus_lines(a.path()), corpus_lines(b.path()));
}

TEST(Pipeline, DisabledTaskIsAbsentAndWeightsRenormalize) {
  kgtest::TempDir out;
  BuildConfig cfg = small_config(out.path());
  cfg.disabled = {Task::kTc};
  cfg.sizes.tc = 0;
  BuildResult r = build_corpus(shared_graph(), Report{}, cfg);
  EXPECT_EQ(r.manifest.counts[task_index(Task::kTc)], 0u);
  EXPECT_DOUBLE_EQ(r.manifest.weights.alpha_tc, 0.0);
  EXPECT_DOUBLE_EQ(r.manifest.weights.alpha_ep + r.manifest.weights.alpha_lp, 1.0);
  // Equal sizes give equal weights.
  EXPECT_DOUBLE_EQ(r.manifest.weights.alpha_ep, 0.5);
  EXPECT_EQ(r.manifest.details["disabled_tasks"], nlohmann::json::array({"tc"}));
  EXPECT_TRUE(validate(out.path()).ok());
}

TEST(Pipeline, EnabledTaskWithSizeZeroIsAUsageError) {
  kgtest::TempDir out;
  BuildConfig cfg = small_config(out.path());
  cfg.sizes.lp = 0;
  try {
    build_corpus(shared_graph(), Report{}, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUsage);
    EXPECT_NE(std::string(e.what()).find("--disable-task lp"), std::string::npos);
  }
}

TEST(Pipeline, UnknownLanguageIsADataError) {
  kgtest::TempDir out;
  BuildConfig cfg = small_config(out.path());
  cfg.language = "JPN";
  try {
    build_corpus(shared_graph(), Report{}, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
  }
}

TEST(Pipeline, OneMaskPositionOptionIsRecorded) {
  kgtest::TempDir out;
  BuildConfig cfg = small_config(out.path());
  cfg.lp_mask_all = false;
  BuildResult r = build_corpus(shared_graph(), Report{}, cfg);
  EXPECT_EQ(r.manifest.details["masking"]["lp_positions"], "one");
}
