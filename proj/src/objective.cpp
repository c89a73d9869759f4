#include "kgcorpus/objective.hpp"

#include <cmath>
#include <string>

#include "kgcorpus/error.hpp"
#include "kgcorpus/random.hpp"

namespace kgcorpus {

double TaskWeights::alpha(Task task) const {
  switch (task) {
    case Task::kMlm: return 1.0;
    case Task::kEp: return alpha_ep;
    case Task::kLp: return alpha_lp;
    case Task::kTc: return alpha_tc;
  }
  return 0;
}

std::uint64_t TaskWeights::count(Task task) const {
  switch (task) {
    case Task::kMlm: return n_mlm;
    case Task::kEp: return n_ep;
    case Task::kLp: return n_lp;
    case Task::kTc: return n_tc;
  }
  return 0;
}

TaskWeights compute_weights(const std::map<Task, std::uint64_t>& graph_task_counts, std::uint64_t n_mlm) {
  TaskWeights w;
  w.n_mlm = n_mlm;
  std::uint64_t total = 0;
  for (const auto& [task, n] : graph_task_counts) {
    if (task == Task::kMlm) fail(ErrorKind::kUsage, "the masked-language task has a fixed weight of 1");
    if (n == 0) {
      fail(ErrorKind::kUsage, "task " + std::string(task_name(task)) +
                                  " has no documents; disable it explicitly instead of passing a zero count");
    }
    total += n;
  }
  const std::size_t k = graph_task_counts.size();
  for (const auto& [task, n] : graph_task_counts) {
    const double alpha = k == 1 ? 1.0
                                : static_cast<double>(total - n) /
                                      (static_cast<double>(k - 1) * static_cast<double>(total));
    switch (task) {
      case Task::kEp: w.alpha_ep = alpha; w.n_ep = n; break;
      case Task::kLp: w.alpha_lp = alpha; w.n_lp = n; break;
      case Task::kTc: w.alpha_tc = alpha; w.n_tc = n; break;
      case Task::kMlm: break;
    }
  }
  return w;
}

TaskWeights compute_weights(std::uint64_t n_ep, std::uint64_t n_lp, std::uint64_t n_tc) {
  return compute_weights({{Task::kEp, n_ep}, {Task::kLp, n_lp}, {Task::kTc, n_tc}});
}

double assemble_loss(const TaskLosses& losses, const TaskWeights& weights) {
  double total = 0;
  for (Task task : kAllTasks) {
    const auto& loss = losses[task_index(task)];
    if (!loss) continue;
    if (std::isnan(*loss) || *loss < 0) {
      fail(ErrorKind::kUsage, "loss for task " + std::string(task_name(task)) + " must be a non-negative number");
    }
    total += weights.alpha(task) * *loss;
  }
  return total;
}

nlohmann::ordered_json loss_contract_json(const TaskWeights& weights) {
  nlohmann::ordered_json j;
  j["assembly"] = "L = L_mlm + alpha_ep * L_ep + alpha_lp * L_lp + alpha_tc * L_tc";
  j["absent_task_contribution"] = 0;
  j["tasks"]["mlm"] = {{"loss", "cross_entropy"}, {"coefficient", 1.0},
                       {"targets", "vocabulary ids at masked positions; other positions ignored"}};
  j["tasks"]["ep"] = {{"loss", "cross_entropy"}, {"coefficient", weights.alpha_ep},
                      {"targets", "vocabulary ids of every subword overlapping the tail span; other positions ignored"}};
  j["tasks"]["lp"] = {{"loss", "cross_entropy"}, {"coefficient", weights.alpha_lp},
                      {"targets", "six-way relation code at each hidden-relation position; other positions ignored"}};
  j["tasks"]["tc"] = {{"loss", "cross_entropy"}, {"coefficient", weights.alpha_tc},
                      {"targets", "binary truth label on the classification token"}};
  j["ignore_index"] = -100;
  return j;
}

std::span<const RecordRef> InterleavePlan::batch(std::uint64_t i) const {
  if (i >= batch_count()) fail(ErrorKind::kUsage, "batch index out of range");
  const std::uint64_t begin = i * batch_size;
  const std::uint64_t end = std::min<std::uint64_t>(order.size(), begin + batch_size);
  return std::span<const RecordRef>(order).subspan(begin, end - begin);
}

InterleavePlan plan_interleave(const std::array<std::uint64_t, 4>& corpus_sizes, std::uint64_t batch_size,
                               std::uint64_t seed, std::uint64_t epoch) {
  if (batch_size == 0) fail(ErrorKind::kUsage, "batch size must be at least 1");
  InterleavePlan plan;
  plan.batch_size = batch_size;
  plan.seed = seed;
  std::uint64_t total = 0;
  for (std::uint64_t n : corpus_sizes) total += n;
  plan.order.reserve(total);
  for (Task task : kAllTasks) {
    for (std::uint64_t i = 0; i < corpus_sizes[task_index(task)]; ++i) plan.order.push_back(RecordRef{task, i});
  }
  Rng rng(derive_seed(seed, {0x1a7e, epoch}));
  for (std::uint64_t i = plan.order.size(); i > 1; --i) std::swap(plan.order[i - 1], plan.order[rng.uniform_index(i)]);
  return plan;
}

}  // namespace kgcorpus
