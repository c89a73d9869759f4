#include "kgcorpus/sampling.hpp"

#include <algorithm>
#include <unordered_set>

#include "kgcorpus/error.hpp"
#include "kgcorpus/random.hpp"

namespace kgcorpus {
namespace {

constexpr std::size_t pool_slot(SamplingIndex::Pool p) { return static_cast<std::size_t>(p); }

// Maps a slot number onto the stratum whose target range contains it.
class SlotLayout {
 public:
  SlotLayout(const SamplingIndex& index, const std::vector<StratumTarget>& targets) {
    std::uint64_t end = 0;
    for (const StratumTarget& t : targets) {
      if (t.count == 0) continue;
      const auto& strata = index.strata();
      auto it = std::lower_bound(strata.begin(), strata.end(), t.group);
      if (it == strata.end() || *it != t.group) fail(ErrorKind::kUsage, "plan names unknown stratum " + t.group);
      end += t.count;
      ends_.push_back(end);
      strata_.push_back(static_cast<std::size_t>(it - strata.begin()));
    }
  }

  std::uint64_t total() const { return ends_.empty() ? 0 : ends_.back(); }

  std::size_t stratum_of(std::uint64_t slot) const {
    auto it = std::upper_bound(ends_.begin(), ends_.end(), slot);
    return strata_[static_cast<std::size_t>(it - ends_.begin())];
  }

  // Slot offset within its stratum's range.
  std::uint64_t offset_in_stratum(std::uint64_t slot) const {
    auto k = static_cast<std::size_t>(std::upper_bound(ends_.begin(), ends_.end(), slot) - ends_.begin());
    return slot - (k == 0 ? 0 : ends_[k - 1]);
  }

 private:
  std::vector<std::uint64_t> ends_;
  std::vector<std::size_t> strata_;
};

template <typename Fn>
void for_each_block(std::uint64_t total, const SamplerOptions& options, Shard shard, Fn&& fn) {
  if (shard.count == 0 || shard.index >= shard.count) fail(ErrorKind::kUsage, "invalid shard");
  if (options.block_size == 0) fail(ErrorKind::kUsage, "block size must be positive");
  const std::uint64_t blocks = (total + options.block_size - 1) / options.block_size;
  for (std::uint64_t b = shard.index; b < blocks; b += shard.count) {
    const std::uint64_t begin = b * options.block_size;
    fn(b, begin, std::min(total, begin + options.block_size));
  }
}

// Per-block bookkeeping of strata that keep failing, and reallocation of
// their slots to other strata in proportion to pool size.
class BlockAllocator {
 public:
  BlockAllocator(std::vector<std::uint64_t> weights, std::uint32_t failure_limit, std::string prefix, Report& report)
      : weights_(std::move(weights)),
        failures_(weights_.size(), 0),
        exhausted_(weights_.size(), false),
        limit_(failure_limit == 0 ? 1 : failure_limit),
        prefix_(std::move(prefix)),
        report_(report) {}

  // Runs `attempt(stratum)` on the slot's own stratum, then on other strata
  // until one succeeds. Returns false once every stratum is exhausted.
  template <typename Attempt>
  bool resolve(std::size_t stratum, Rng& rng, Attempt&& attempt) {
    if (usable(stratum)) {
      if (attempt(stratum)) return true;
      record_failure(stratum);
    }
    bool counted = false;
    for (;;) {
      std::uint64_t total = 0;
      for (std::size_t s = 0; s < weights_.size(); ++s) total += usable(s) ? weights_[s] : 0;
      if (total == 0) return false;
      std::uint64_t pick = rng.uniform_index(total);
      std::size_t s = 0;
      for (;; ++s) {
        if (!usable(s)) continue;
        if (pick < weights_[s]) break;
        pick -= weights_[s];
      }
      if (!counted) {
        report_.add(prefix_ + ".reallocated_slots");
        counted = true;
      }
      if (attempt(s)) return true;
      record_failure(s);
    }
  }

 private:
  bool usable(std::size_t s) const { return weights_[s] > 0 && !exhausted_[s]; }

  void record_failure(std::size_t s) {
    report_.add(prefix_ + ".failed_slots");
    if (++failures_[s] >= limit_) {
      exhausted_[s] = true;
      report_.add(prefix_ + ".stratum_exhaustions");
    }
  }

  std::vector<std::uint64_t> weights_;
  std::vector<std::uint32_t> failures_;
  std::vector<bool> exhausted_;
  std::uint32_t limit_;
  std::string prefix_;
  Report& report_;
};

std::vector<std::uint64_t> pool_sizes(const SamplingIndex& index, SamplingIndex::Pool kind) {
  std::vector<std::uint64_t> out;
  for (std::size_t s = 0; s < index.strata().size(); ++s) out.push_back(index.pool(kind, s).size());
  return out;
}

TcProvenance provenance_of_slot(std::uint64_t slot) {
  switch (slot % 4) {
    case 1: return TcProvenance::kNegativeEntities;
    case 3: return TcProvenance::kNegativeRelation;
    default: return TcProvenance::kPositive;
  }
}

}  // namespace

std::string_view provenance_name(TcProvenance p) {
  switch (p) {
    case TcProvenance::kPositive: return "positive";
    case TcProvenance::kNegativeEntities: return "negative-entities";
    case TcProvenance::kNegativeRelation: return "negative-relation";
  }
  return "?";
}

SamplingIndex::SamplingIndex(const KnowledgeGraph& kg, GroupEquality equality) : kg_(&kg), equality_(equality) {
  if (!kg.frozen()) fail(ErrorKind::kUsage, "sampling requires a frozen graph");

  std::vector<std::string> all;
  for (const Concept& c : kg.concepts()) all.push_back(c.canonical_group());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  for (const std::string& g : all) canonical_members_.emplace_back(g, std::vector<ConceptId>{});
  for (std::size_t i = 0; i < kg.concept_count(); ++i) {
    const std::string& g = kg.concepts()[i].canonical_group();
    auto it = std::lower_bound(canonical_members_.begin(), canonical_members_.end(), g,
                               [](const auto& entry, const std::string& key) { return entry.first < key; });
    it->second.push_back(ConceptId{static_cast<std::uint32_t>(i)});
  }

  for (const Triple& t : kg.edges()) {
    if (!t.is_self_loop()) strata_.push_back(kg.concept_at(t.head).canonical_group());
  }
  std::sort(strata_.begin(), strata_.end());
  strata_.erase(std::unique(strata_.begin(), strata_.end()), strata_.end());
  for (auto& p : pools_) p.resize(strata_.size());

  steps_.resize(kg.concept_count());
  const auto edges = kg.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Triple& t = edges[e];
    if (t.is_self_loop()) continue;
    const auto idx = static_cast<std::uint32_t>(e);
    const std::string& g = kg.concept_at(t.head).canonical_group();
    const auto s = static_cast<std::size_t>(std::lower_bound(strata_.begin(), strata_.end(), g) - strata_.begin());
    pools_[pool_slot(Pool::kAll)][s].push_back(idx);
    pools_[pool_slot(same_group(t.head, t.tail) ? Pool::kSameGroup : Pool::kCrossGroup)][s].push_back(idx);
    if (t.relation != RelationType::kSynonym) {
      pools_[pool_slot(Pool::kNonSynonym)][s].push_back(idx);
      steps_[t.head.value].push_back(idx);
    }
  }
}

std::span<const std::uint32_t> SamplingIndex::pool(Pool kind, std::size_t stratum) const {
  return pools_[pool_slot(kind)][stratum];
}

std::uint64_t SamplingIndex::pool_total(Pool kind) const {
  std::uint64_t n = 0;
  for (const auto& p : pools_[pool_slot(kind)]) n += p.size();
  return n;
}

std::span<const ConceptId> SamplingIndex::canonical_members(std::string_view group) const {
  auto it = std::lower_bound(canonical_members_.begin(), canonical_members_.end(), group,
                             [](const auto& entry, std::string_view key) { return entry.first < key; });
  if (it == canonical_members_.end() || it->first != group) return {};
  return it->second;
}

bool SamplingIndex::same_group(ConceptId a, ConceptId b) const {
  const Concept& ca = kg_->concept_at(a);
  const Concept& cb = kg_->concept_at(b);
  if (equality_ == GroupEquality::kCanonical) return ca.canonical_group() == cb.canonical_group();
  auto i = ca.groups.begin();
  auto j = cb.groups.begin();
  while (i != ca.groups.end() && j != cb.groups.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

std::vector<StratumTarget> largest_remainder(const std::vector<std::pair<std::string, std::uint64_t>>& weights,
                                             std::uint64_t size) {
  std::vector<std::pair<std::string, std::uint64_t>> sorted;
  for (const auto& w : weights) {
    if (w.second > 0) sorted.push_back(w);
  }
  std::sort(sorted.begin(), sorted.end());
  unsigned __int128 total = 0;
  for (const auto& w : sorted) total += w.second;

  std::vector<StratumTarget> out;
  if (total == 0) return out;
  std::vector<std::pair<unsigned __int128, std::size_t>> remainders;
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    unsigned __int128 scaled = static_cast<unsigned __int128>(size) * sorted[i].second;
    auto floor = static_cast<std::uint64_t>(scaled / total);
    out.push_back(StratumTarget{sorted[i].first, floor});
    assigned += floor;
    remainders.emplace_back(scaled % total, i);
  }
  // Largest remainder first; stable sort keeps lexicographic order on ties.
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::uint64_t k = 0; assigned < size; ++k, ++assigned) ++out[remainders[k].second].count;
  return out;
}

const std::vector<StratumTarget>& SamplePlan::targets(Task task) const {
  switch (task) {
    case Task::kTc: return tc_targets;
    case Task::kEp: return ep_targets;
    case Task::kLp: return lp_targets;
    case Task::kMlm: break;
  }
  fail(ErrorKind::kUsage, "masked-language documents are not sampled from the graph");
}

SamplePlan plan_strata(const SamplingIndex& index, const TaskSizes& sizes, std::uint64_t seed,
                       std::uint32_t max_attempts) {
  if (index.graph().concept_count() == 0) fail(ErrorKind::kData, "cannot plan strata on an empty graph");
  auto shares = [&](SamplingIndex::Pool kind) {
    std::vector<std::pair<std::string, std::uint64_t>> w;
    for (std::size_t s = 0; s < index.strata().size(); ++s) w.emplace_back(index.strata()[s], index.pool(kind, s).size());
    return w;
  };
  SamplePlan plan;
  plan.sizes = sizes;
  plan.seed = seed;
  plan.max_attempts = max_attempts == 0 ? 1 : max_attempts;
  auto all = shares(SamplingIndex::Pool::kAll);
  plan.tc_targets = largest_remainder(all, sizes.tc);
  plan.ep_targets = largest_remainder(all, sizes.ep);
  plan.lp_targets = largest_remainder(shares(SamplingIndex::Pool::kNonSynonym), sizes.lp);
  return plan;
}

std::vector<TcExample> sample_tc(const SamplingIndex& index, const SamplePlan& plan, Report& report,
                                 const SamplerOptions& options, Shard shard) {
  using Pool = SamplingIndex::Pool;
  std::vector<TcExample> out;
  if (plan.sizes.tc == 0) return out;
  SlotLayout layout(index, plan.tc_targets);
  if (layout.total() != plan.sizes.tc) fail(ErrorKind::kData, "triple classification plan has no stratum to draw from");

  const KnowledgeGraph& kg = index.graph();
  const auto edges = kg.edges();
  const auto cross = pool_sizes(index, Pool::kCrossGroup);
  const auto same = pool_sizes(index, Pool::kSameGroup);
  std::unordered_set<Triple, TripleHash> seen_true;
  std::unordered_set<Triple, TripleHash> seen_false;

  for_each_block(plan.sizes.tc, options, shard, [&](std::uint64_t block, std::uint64_t begin, std::uint64_t end) {
    Rng rng(derive_seed(plan.seed, {task_index(Task::kTc), block}));
    BlockAllocator by_entities(cross, options.stratum_failure_limit, "tc.negative_entities", report);
    BlockAllocator by_relation(same, options.stratum_failure_limit, "tc.negative_relation", report);
    TcExample current;

    auto negative_entities = [&](std::size_t s) {
      auto pool = index.pool(Pool::kCrossGroup, s);
      if (pool.empty()) return false;
      for (std::uint32_t a = 0; a < plan.max_attempts; ++a) {
        const Triple& src = edges[pool[rng.uniform_index(pool.size())]];
        auto heads = index.canonical_members(kg.concept_at(src.head).canonical_group());
        auto tails = index.canonical_members(kg.concept_at(src.tail).canonical_group());
        Triple neg{heads[rng.uniform_index(heads.size())], src.relation, tails[rng.uniform_index(tails.size())]};
        if (neg.is_self_loop() || kg.contains(neg)) continue;
        current = TcExample{neg, false, TcProvenance::kNegativeEntities, src, current.slot};
        return true;
      }
      return false;
    };
    auto negative_relation = [&](std::size_t s) {
      auto pool = index.pool(Pool::kSameGroup, s);
      if (pool.empty()) return false;
      std::vector<RelationType> options_left;
      for (std::uint32_t a = 0; a < plan.max_attempts; ++a) {
        const Triple& src = edges[pool[rng.uniform_index(pool.size())]];
        options_left.clear();
        for (RelationType r : kAllRelations) {
          if (r != src.relation && !kg.contains(Triple{src.head, r, src.tail})) options_left.push_back(r);
        }
        if (options_left.empty()) continue;
        Triple neg{src.head, options_left[rng.uniform_index(options_left.size())], src.tail};
        current = TcExample{neg, false, TcProvenance::kNegativeRelation, src, current.slot};
        return true;
      }
      return false;
    };

    for (std::uint64_t slot = begin; slot < end; ++slot) {
      const std::size_t s = layout.stratum_of(slot);
      current.slot = slot;
      switch (provenance_of_slot(slot)) {
        case TcProvenance::kPositive: {
          auto pool = index.pool(Pool::kAll, s);
          const Triple& t = edges[pool[rng.uniform_index(pool.size())]];
          current = TcExample{t, true, TcProvenance::kPositive, t, slot};
          break;
        }
        case TcProvenance::kNegativeEntities:
          if (!by_entities.resolve(s, rng, negative_entities)) {
            report.add("tc.strategy_fallbacks");
            if (!by_relation.resolve(s, rng, negative_relation)) {
              fail(ErrorKind::kData, "cannot generate any negative triple: every corruption exists in the graph");
            }
          }
          break;
        case TcProvenance::kNegativeRelation:
          if (!by_relation.resolve(s, rng, negative_relation)) {
            report.add("tc.strategy_fallbacks");
            if (!by_entities.resolve(s, rng, negative_entities)) {
              fail(ErrorKind::kData, "cannot generate any negative triple: every corruption exists in the graph");
            }
          }
          break;
      }
      auto& seen = current.label ? seen_true : seen_false;
      if (!seen.insert(current.triple).second) report.add("tc.duplicates");
      report.add("tc." + std::string(provenance_name(current.provenance)));
      out.push_back(current);
    }
  });
  return out;
}

std::vector<EpExample> sample_ep(const SamplingIndex& index, const SamplePlan& plan, Report& report,
                                 const SamplerOptions& options, Shard shard) {
  std::vector<EpExample> out;
  if (plan.sizes.ep == 0) return out;
  SlotLayout layout(index, plan.ep_targets);
  if (layout.total() != plan.sizes.ep) fail(ErrorKind::kData, "entity prediction plan has no stratum to draw from");
  const auto edges = index.graph().edges();

  for_each_block(plan.sizes.ep, options, shard, [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t slot = begin; slot < end; ++slot) {
      const std::size_t s = layout.stratum_of(slot);
      auto pool = index.pool(SamplingIndex::Pool::kAll, s);
      const std::uint64_t offset = layout.offset_in_stratum(slot);
      const std::uint64_t cycle = offset / pool.size();
      // Each pass over a stratum is a fresh keyed permutation of its pool.
      KeyedPermutation perm(pool.size(), derive_seed(plan.seed, {task_index(Task::kEp), s, cycle}));
      if (cycle > 0) report.add("ep.repeated_draws");
      out.push_back(EpExample{edges[pool[perm(offset % pool.size())]], slot});
    }
  });
  return out;
}

std::vector<Path> sample_paths(const SamplingIndex& index, const SamplePlan& plan, Report& report,
                               const SamplerOptions& options, Shard shard) {
  using Pool = SamplingIndex::Pool;
  std::vector<Path> out;
  if (plan.sizes.lp == 0) return out;
  if (options.max_hops < 2) fail(ErrorKind::kUsage, "max_hops must be at least 2");

  const auto edges = index.graph().edges();
  bool any_two_hop = false;
  for (std::size_t s = 0; s < index.strata().size() && !any_two_hop; ++s) {
    for (std::uint32_t e : index.pool(Pool::kNonSynonym, s)) {
      if (!index.path_steps(edges[e].tail).empty()) {
        any_two_hop = true;
        break;
      }
    }
  }
  if (!any_two_hop) fail(ErrorKind::kData, "graph has no path of two non-Synonym hops");

  SlotLayout layout(index, plan.lp_targets);
  if (layout.total() != plan.sizes.lp) fail(ErrorKind::kData, "link prediction plan has no stratum to draw from");
  const auto weights = pool_sizes(index, Pool::kNonSynonym);

  for_each_block(plan.sizes.lp, options, shard, [&](std::uint64_t block, std::uint64_t begin, std::uint64_t end) {
    Rng rng(derive_seed(plan.seed, {task_index(Task::kLp), block}));
    BlockAllocator allocator(weights, options.stratum_failure_limit, "lp", report);
    Path current;

    auto walk = [&](std::size_t s) {
      auto pool = index.pool(Pool::kNonSynonym, s);
      if (pool.empty()) return false;
      for (std::uint32_t a = 0; a < plan.max_attempts; ++a) {
        const Triple& start = edges[pool[rng.uniform_index(pool.size())]];
        const std::uint64_t target = 2 + rng.uniform_index(options.max_hops - 1);
        current.concepts.assign({start.head, start.tail});
        current.relations.assign({start.relation});
        while (current.hops() < target) {
          auto steps = index.path_steps(current.concepts.back());
          if (steps.empty()) break;
          const Triple& next = edges[steps[rng.uniform_index(steps.size())]];
          current.relations.push_back(next.relation);
          current.concepts.push_back(next.tail);
        }
        if (current.hops() >= 2) {
          if (current.hops() < target) report.add("lp.dead_end_short_paths");
          return true;
        }
        report.add("lp.dead_end_redraws");
      }
      return false;
    };

    for (std::uint64_t slot = begin; slot < end; ++slot) {
      if (!allocator.resolve(layout.stratum_of(slot), rng, walk)) {
        fail(ErrorKind::kData, "could not find a two-hop non-Synonym path within the attempt budget");
      }
      current.slot = slot;
      out.push_back(current);
    }
  });
  return out;
}

}  // namespace kgcorpus
