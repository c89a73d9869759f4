#ifndef KGCORPUS_TASK_HPP
#define KGCORPUS_TASK_HPP

#include <array>
#include <optional>
#include <string_view>

namespace kgcorpus {

// The four pre-training objectives. Order is the manifest/report order.
enum class Task { kMlm, kEp, kLp, kTc };

inline constexpr std::array<Task, 4> kAllTasks = {Task::kMlm, Task::kEp, Task::kLp, Task::kTc};
inline constexpr std::array<Task, 3> kGraphTasks = {Task::kEp, Task::kLp, Task::kTc};

constexpr std::string_view task_name(Task t) {
  switch (t) {
    case Task::kMlm: return "mlm";
    case Task::kEp: return "ep";
    case Task::kLp: return "lp";
    case Task::kTc: return "tc";
  }
  return "?";
}

constexpr std::optional<Task> task_from_name(std::string_view name) {
  for (Task t : kAllTasks) {
    if (task_name(t) == name) return t;
  }
  return std::nullopt;
}

constexpr std::size_t task_index(Task t) { return static_cast<std::size_t>(t); }

}  // namespace kgcorpus

#endif  // KGCORPUS_TASK_HPP
