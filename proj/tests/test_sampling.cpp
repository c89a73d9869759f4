#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "kgcorpus/error.hpp"
#include "kgcorpus/sampling.hpp"
#include "test_support.hpp"

using namespace kgcorpus;
using kgtest::make_concept;

namespace {

using Weights = std::vector<std::pair<std::string, std::uint64_t>>;
using Targets = std::vector<StratumTarget>;

// Shared synthetic graph: 1000 concepts, 100 edges per relation.
const KnowledgeGraph& synthetic() {
  static kgtest::TempDir dir;
  static KnowledgeGraph g = [] {
    SyntheticKgSpec spec;
    spec.seed = 21;
    return kgtest::synthetic_graph(spec, dir.path());
  }();
  return g;
}

KnowledgeGraph small_graph(const std::vector<std::pair<std::string, std::string>>& concepts,
                           const std::vector<std::tuple<std::string, RelationType, std::string>>& edges) {
  KnowledgeGraph kg;
  for (const auto& [cui, group] : concepts) kg.insert_concept(make_concept(cui, {group}, {"term " + cui}));
  for (const auto& [h, r, t] : edges) kg.insert_triple(h, r, t);
  kg.freeze();
  return kg;
}

std::string triple_text(const KnowledgeGraph& kg, const Triple& t) {
  return kg.concept_at(t.head).cui + " " + std::string(relation_name(t.relation)) + " " + kg.concept_at(t.tail).cui;
}

}  // namespace

TEST(LargestRemainder, MatchesExactRationalOracle) {
  // Expected values from tests/oracles/largest_remainder.py.
  EXPECT_EQ(largest_remainder({{"ANAT", 210}, {"CHEM", 207}, {"DISO", 283}}, 100000),
            (Targets{{"ANAT", 30000}, {"CHEM", 29571}, {"DISO", 40429}}));
  EXPECT_EQ(largest_remainder({{"C", 1}, {"A", 1}, {"B", 1}}, 100), (Targets{{"A", 34}, {"B", 33}, {"C", 33}}));
  EXPECT_EQ(largest_remainder({{"A", 1}, {"B", 1}, {"C", 1}}, 2), (Targets{{"A", 1}, {"B", 1}, {"C", 0}}));
  EXPECT_EQ(largest_remainder({{"A", 5}, {"B", 0}, {"C", 3}}, 7), (Targets{{"A", 4}, {"C", 3}}));
  EXPECT_EQ(largest_remainder({{"X", 1}, {"Y", 2}}, 0), (Targets{{"X", 0}, {"Y", 0}}));
  EXPECT_TRUE(largest_remainder({}, 10).empty());
}

TEST(LargestRemainder, AlwaysSumsToSize) {
  Rng rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    Weights w;
    const auto k = 1 + rng.uniform_index(12);
    for (std::uint64_t i = 0; i < k; ++i) w.emplace_back("G" + std::to_string(i), 1 + rng.uniform_index(1000000));
    const std::uint64_t size = rng.uniform_index(10000000);
    std::uint64_t sum = 0;
    for (const auto& t : largest_remainder(w, size)) sum += t.count;
    ASSERT_EQ(sum, size);
  }
}

TEST(Planning, TargetsFollowEdgeShares) {
  SamplingIndex index(synthetic());
  SamplePlan plan = plan_strata(index, TaskSizes{1000, 500, 300}, 1);
  Weights all, non_synonym;
  for (std::size_t s = 0; s < index.strata().size(); ++s) {
    all.emplace_back(index.strata()[s], index.pool(SamplingIndex::Pool::kAll, s).size());
    non_synonym.emplace_back(index.strata()[s], index.pool(SamplingIndex::Pool::kNonSynonym, s).size());
  }
  EXPECT_EQ(plan.tc_targets, largest_remainder(all, 1000));
  EXPECT_EQ(plan.ep_targets, largest_remainder(all, 500));
  EXPECT_EQ(plan.lp_targets, largest_remainder(non_synonym, 300));
  EXPECT_EQ(index.pool_total(SamplingIndex::Pool::kAll), synthetic().edge_count());
}

class TcSizes : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(TcSizes, CompositionIsHalfPositiveQuarterPerStrategy) {
  const std::uint64_t n = GetParam();
  const KnowledgeGraph& kg = synthetic();
  SamplingIndex index(kg);
  Report report;
  auto examples = sample_tc(index, plan_strata(index, TaskSizes{n, 0, 0}, 9), report);
  ASSERT_EQ(examples.size(), n);
  std::map<TcProvenance, std::uint64_t> counts;
  for (const TcExample& e : examples) {
    counts[e.provenance]++;
    // Membership oracle: labels agree with the graph.
    ASSERT_EQ(kg.contains(e.triple), e.label) << triple_text(kg, e.triple);
    ASSERT_FALSE(e.triple.is_self_loop());
    switch (e.provenance) {
      case TcProvenance::kPositive:
        EXPECT_EQ(e.triple, e.source);
        break;
      case TcProvenance::kNegativeEntities:
        EXPECT_EQ(e.triple.relation, e.source.relation);
        EXPECT_EQ(kg.concept_at(e.triple.head).canonical_group(), kg.concept_at(e.source.head).canonical_group());
        EXPECT_EQ(kg.concept_at(e.triple.tail).canonical_group(), kg.concept_at(e.source.tail).canonical_group());
        EXPECT_FALSE(index.same_group(e.source.head, e.source.tail));
        break;
      case TcProvenance::kNegativeRelation:
        EXPECT_EQ(e.triple.head, e.source.head);
        EXPECT_EQ(e.triple.tail, e.source.tail);
        EXPECT_NE(e.triple.relation, e.source.relation);
        EXPECT_TRUE(index.same_group(e.source.head, e.source.tail));
        break;
    }
  }
  EXPECT_EQ(counts[TcProvenance::kPositive], (n + 1) / 2);
  EXPECT_EQ(counts[TcProvenance::kNegativeEntities], (n + 2) / 4);
  EXPECT_EQ(counts[TcProvenance::kNegativeRelation], n / 4);
  EXPECT_EQ(report.get("tc.strategy_fallbacks"), 0u);
}

INSTANTIATE_TEST_SUITE_P(Sizes, TcSizes, ::testing::Values(1, 2, 3, 5, 7, 100, 1001, 4099));

TEST(TripleClassification, ImpossibleCorruptionIsReported) {
  // Every relation already links a1 to b1: no entity swap or relation swap is false.
  std::vector<std::tuple<std::string, RelationType, std::string>> edges;
  for (RelationType r : kAllRelations) edges.emplace_back("A1", r, "B1");
  auto kg = small_graph({{"A1", "ANAT"}, {"B1", "DISO"}}, edges);
  SamplingIndex index(kg);
  Report report;
  try {
    sample_tc(index, plan_strata(index, TaskSizes{8, 0, 0}, 1), report);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
    EXPECT_NE(std::string(e.what()).find("negative"), std::string::npos);
  }
}

TEST(TripleClassification, FallsBackToTheOtherStrategyAndCountsIt) {
  // Cross-group corruptions all exist, but same-group edges leave room for relation swaps.
  auto kg = small_graph({{"A1", "ANAT"}, {"A2", "ANAT"}, {"B1", "DISO"}},
                        {{"A1", RelationType::kParent, "B1"}, {"A2", RelationType::kParent, "B1"},
                         {"A1", RelationType::kChild, "A2"}});
  SamplingIndex index(kg);
  Report report;
  auto examples = sample_tc(index, plan_strata(index, TaskSizes{40, 0, 0}, 3), report);
  ASSERT_EQ(examples.size(), 40u);
  EXPECT_EQ(report.get("tc.strategy_fallbacks"), 10u);
  for (const auto& e : examples) ASSERT_EQ(kg.contains(e.triple), e.label);
  EXPECT_EQ(report.get("tc.negative-relation"), 20u);
}

TEST(TripleClassification, DeterministicAndShardable) {
  SamplingIndex index(synthetic());
  SamplePlan plan = plan_strata(index, TaskSizes{5000, 0, 0}, 77);
  SamplerOptions opt;
  opt.block_size = 256;
  Report r1, r2;
  auto a = sample_tc(index, plan, r1, opt);
  auto b = sample_tc(index, plan, r2, opt);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(a[i].triple, b[i].triple);

  for (std::uint64_t count : {2u, 3u, 7u}) {
    std::vector<TcExample> merged;
    for (std::uint64_t k = 0; k < count; ++k) {
      Report r;
      auto part = sample_tc(index, plan, r, opt, Shard{k, count});
      merged.insert(merged.end(), part.begin(), part.end());
    }
    std::sort(merged.begin(), merged.end(), [](const auto& x, const auto& y) { return x.slot < y.slot; });
    ASSERT_EQ(merged.size(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      ASSERT_EQ(merged[i].slot, a[i].slot);
      ASSERT_EQ(merged[i].triple, a[i].triple);
      ASSERT_EQ(merged[i].provenance, a[i].provenance);
    }
  }

  Report r3;
  auto c = sample_tc(index, plan_strata(index, TaskSizes{5000, 0, 0}, 78), r3, opt);
  int differ = 0;
  for (std::size_t i = 0; i < a.size(); ++i) differ += !(a[i].triple == c[i].triple);
  EXPECT_GT(differ, 2500);
}

TEST(TripleClassification, RealisedStrataMatchPlan) {
  const KnowledgeGraph& kg = synthetic();
  SamplingIndex index(kg);
  SamplePlan plan = plan_strata(index, TaskSizes{20000, 0, 0}, 5);
  Report report;
  std::map<std::string, std::uint64_t> realised;
  for (const auto& e : sample_tc(index, plan, report)) realised[kg.concept_at(e.source.head).canonical_group()]++;
  for (const auto& t : plan.tc_targets) EXPECT_EQ(realised[t.group], t.count) << t.group;
}

TEST(EntityPrediction, DrawsWithoutReplacementWithinStratum) {
  const KnowledgeGraph& kg = synthetic();
  SamplingIndex index(kg);
  // Half the edges: no stratum is exhausted.
  const std::uint64_t n = kg.edge_count() / 2;
  Report report;
  auto examples = sample_ep(index, plan_strata(index, TaskSizes{0, n, 0}, 4), report);
  ASSERT_EQ(examples.size(), n);
  std::set<Triple> seen;
  for (const auto& e : examples) {
    ASSERT_TRUE(kg.contains(e.triple));
    ASSERT_TRUE(seen.insert(e.triple).second) << triple_text(kg, e.triple);
  }
  EXPECT_EQ(report.get("ep.repeated_draws"), 0u);
}

TEST(EntityPrediction, CoversEveryEdgeBeforeRepeating) {
  const KnowledgeGraph& kg = synthetic();
  SamplingIndex index(kg);
  const std::uint64_t n = kg.edge_count() * 2;
  Report report;
  auto examples = sample_ep(index, plan_strata(index, TaskSizes{0, n, 0}, 4), report);
  std::map<Triple, int> hits;
  for (const auto& e : examples) hits[e.triple]++;
  // Targets are proportional to pool sizes, so twice the edges means each edge exactly twice.
  EXPECT_EQ(hits.size(), kg.edge_count());
  for (const auto& [t, k] : hits) ASSERT_EQ(k, 2) << triple_text(kg, t);
  EXPECT_EQ(report.get("ep.repeated_draws"), kg.edge_count());
}

TEST(Paths, ChainGraphYieldsTheOnlyPath) {
  auto kg = small_graph({{"A", "DISO"}, {"B", "DISO"}, {"C", "DISO"}},
                        {{"A", RelationType::kParent, "B"}, {"B", RelationType::kParent, "C"}});
  SamplingIndex index(kg);
  Report report;
  auto paths = sample_paths(index, plan_strata(index, TaskSizes{0, 0, 50}, 2), report);
  ASSERT_EQ(paths.size(), 50u);
  for (const Path& p : paths) {
    ASSERT_EQ(p.hops(), 2u);
    EXPECT_EQ(kg.concept_at(p.concepts[0]).cui, "A");
    EXPECT_EQ(kg.concept_at(p.concepts[1]).cui, "B");
    EXPECT_EQ(kg.concept_at(p.concepts[2]).cui, "C");
  }
}

TEST(Paths, SynonymOnlyGraphHasNoPaths) {
  auto kg = small_graph({{"A", "DISO"}, {"B", "DISO"}, {"C", "DISO"}},
                        {{"A", RelationType::kSynonym, "B"}, {"B", RelationType::kSynonym, "C"}});
  SamplingIndex index(kg);
  Report report;
  EXPECT_THROW(sample_paths(index, plan_strata(index, TaskSizes{0, 0, 5}, 2), report), Error);
}

TEST(Paths, SoundBoundedAndSynonymFree) {
  const KnowledgeGraph& kg = synthetic();
  SamplingIndex index(kg);
  SamplerOptions opt;
  opt.max_hops = 5;
  Report report;
  auto paths = sample_paths(index, plan_strata(index, TaskSizes{0, 0, 3000}, 8), report, opt);
  ASSERT_EQ(paths.size(), 3000u);
  for (const Path& p : paths) {
    ASSERT_GE(p.hops(), 2u);
    ASSERT_LE(p.hops(), 5u);
    ASSERT_EQ(p.concepts.size(), p.hops() + 1);
    for (std::size_t i = 0; i < p.hops(); ++i) {
      ASSERT_NE(p.relations[i], RelationType::kSynonym);
      ASSERT_TRUE(kg.contains(Triple{p.concepts[i], p.relations[i], p.concepts[i + 1]}));
    }
  }
}

TEST(Paths, LengthsAreUniformWhenWalksNeverDeadEnd) {
  // A directed ring never dead-ends, so realised lengths follow the drawn targets.
  std::vector<std::pair<std::string, std::string>> concepts;
  std::vector<std::tuple<std::string, RelationType, std::string>> edges;
  for (int i = 0; i < 10; ++i) {
    concepts.emplace_back("C" + std::to_string(i), "DISO");
    edges.emplace_back("C" + std::to_string(i), RelationType::kBroader, "C" + std::to_string((i + 1) % 10));
  }
  auto kg = small_graph(concepts, edges);
  SamplingIndex index(kg);
  Report report;
  std::map<std::size_t, int> lengths;
  for (const Path& p : sample_paths(index, plan_strata(index, TaskSizes{0, 0, 30000}, 6), report)) lengths[p.hops()]++;
  ASSERT_EQ(lengths.size(), 3u);
  for (const auto& [h, c] : lengths) EXPECT_NEAR(c / 30000.0, 1.0 / 3, 0.015) << h;
}

TEST(Sampling, IntersectionEqualityUsesAnySharedGroup) {
  KnowledgeGraph kg;
  kg.insert_concept(make_concept("A", {"ANAT", "DISO"}, {"a"}));
  kg.insert_concept(make_concept("B", {"DISO"}, {"b"}));
  kg.freeze();
  EXPECT_FALSE(SamplingIndex(kg, GroupEquality::kCanonical).same_group(ConceptId{0}, ConceptId{1}));
  EXPECT_TRUE(SamplingIndex(kg, GroupEquality::kIntersection).same_group(ConceptId{0}, ConceptId{1}));
}

TEST(Sampling, RequiresFrozenGraph) {
  KnowledgeGraph kg;
  kg.insert_concept(make_concept("A", {"DISO"}, {"a"}));
  EXPECT_THROW(SamplingIndex{kg}, Error);
}
