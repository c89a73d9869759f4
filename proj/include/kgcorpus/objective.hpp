#ifndef KGCORPUS_OBJECTIVE_HPP
#define KGCORPUS_OBJECTIVE_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "kgcorpus/task.hpp"

namespace kgcorpus {

// Coefficients of the graph-task losses in
//   L = L_mlm + alpha_ep * L_ep + alpha_lp * L_lp + alpha_tc * L_tc.
// Active coefficients sum to 1, so the masked-language loss weighs as much
// as all graph tasks together. Disabled tasks have coefficient 0 and count 0.
struct TaskWeights {
  double alpha_ep = 0;
  double alpha_lp = 0;
  double alpha_tc = 0;
  std::uint64_t n_ep = 0;
  std::uint64_t n_lp = 0;
  std::uint64_t n_tc = 0;
  std::uint64_t n_mlm = 0;

  double alpha(Task task) const;
  std::uint64_t count(Task task) const;
  bool active(Task task) const { return task == Task::kMlm || count(task) > 0; }
};

// alpha_i = (sum of the other counts) / ((k - 1) * sum of all k counts) over
// the k enabled graph tasks; with k = 3 this is (S - n_i) / (2 S). A single
// enabled task gets weight 1. Every listed count must be positive: disable a
// task by leaving it out. Throws ErrorKind::kUsage otherwise.
TaskWeights compute_weights(const std::map<Task, std::uint64_t>& graph_task_counts, std::uint64_t n_mlm = 0);
TaskWeights compute_weights(std::uint64_t n_ep, std::uint64_t n_lp, std::uint64_t n_tc);

// Mean loss per task for one step; nullopt marks a task absent from the batch.
using TaskLosses = std::array<std::optional<double>, 4>;  // indexed by task_index()

// Weighted sum; absent tasks contribute 0. Throws on negative or NaN input.
double assemble_loss(const TaskLosses& losses, const TaskWeights& weights);

// Loss kinds, label conventions and assembly rule, as written to manifests.
nlohmann::ordered_json loss_contract_json(const TaskWeights& weights);

struct RecordRef {
  Task task = Task::kMlm;
  std::uint64_t index = 0;  // position within the task's corpus

  friend bool operator==(const RecordRef&, const RecordRef&) = default;
  friend auto operator<=>(const RecordRef&, const RecordRef&) = default;
};

// One epoch: every record of every task exactly once, uniformly shuffled.
struct InterleavePlan {
  std::vector<RecordRef> order;
  std::uint64_t batch_size = 1;
  std::uint64_t seed = 0;

  std::uint64_t batch_count() const { return (order.size() + batch_size - 1) / batch_size; }
  std::span<const RecordRef> batch(std::uint64_t i) const;
};

InterleavePlan plan_interleave(const std::array<std::uint64_t, 4>& corpus_sizes, std::uint64_t batch_size,
                               std::uint64_t seed, std::uint64_t epoch = 0);

}  // namespace kgcorpus

#endif  // KGCORPUS_OBJECTIVE_HPP
