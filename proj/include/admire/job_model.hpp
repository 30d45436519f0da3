#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace admire {

enum class TaskKind { preprocessing, data_distribution, clustering, association_rules, classification, evaluation };

std::string_view task_kind_name(TaskKind k) noexcept;
// Throws unknown-kind.
TaskKind parse_task_kind(std::string_view s);
const std::vector<TaskKind>& all_task_kinds();

using ParamValue = std::variant<bool, std::int64_t, double, std::string>;
using Params = std::map<std::string, ParamValue>;

// Typed accessors; throw invalid-argument when present with the wrong type.
std::optional<std::int64_t> param_int(const Params& p, const std::string& key);
std::optional<double> param_double(const Params& p, const std::string& key);
std::optional<std::string> param_string(const Params& p, const std::string& key);

// Algorithm id that asks the knowledge map to pick an implementation.
inline constexpr std::string_view kAutoAlgorithm = "auto";

struct TaskSpec {
  std::string id;
  TaskKind kind = TaskKind::preprocessing;
  std::string algorithm;
  Params params;
  std::vector<std::string> inputs;
  std::vector<std::string> depends_on;
  std::vector<std::string> required_capabilities;

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

struct JobSpec {
  std::string name;
  std::vector<TaskSpec> tasks;
  std::uint64_t seed = 0;

  const TaskSpec* find(std::string_view id) const noexcept;

  friend bool operator==(const JobSpec&, const JobSpec&) = default;
};

// What validation needs to know about published resources.
class RepositoryView {
 public:
  virtual ~RepositoryView() = default;
  virtual std::optional<TaskKind> algorithm_kind(std::string_view id) const = 0;
  virtual bool has_dataset(std::string_view id) const = 0;
};

enum class ViolationKind {
  empty_task_id,
  duplicate_task_id,
  dangling_dependency,
  unknown_algorithm,
  unknown_dataset,
  undeclared_input_dependency,
  kind_mismatch,
  cycle,
};

std::string_view violation_kind_name(ViolationKind k) noexcept;

struct Violation {
  ViolationKind kind;
  std::string task;
  // Offending reference (dependency, algorithm, dataset) or, for cycles, the
  // members of the cycle.
  std::vector<std::string> subjects;

  std::string describe() const;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool contains(ViolationKind k) const noexcept;
};

ValidationReport validate_job(const JobSpec& job, const RepositoryView& repos);

struct ExecutionSchema {
  JobSpec job;
  std::vector<std::vector<std::string>> stages;
  std::vector<std::string> topological_order;

  std::size_t stage_of(std::string_view task) const;

  friend bool operator==(const ExecutionSchema&, const ExecutionSchema&) = default;
};

// Stages are the level sets of longest-path depth from the sources; ids are
// sorted inside each stage. Throws cycle-detected, unknown-task.
ExecutionSchema build_schema(const JobSpec& job);

// True iff neither task reaches the other. Throws unknown-task.
bool detect_independent(const ExecutionSchema& schema, std::string_view t1, std::string_view t2);

using Ticks = std::uint64_t;

// Heaviest source-to-sink path. Throws missing-duration.
Ticks critical_path_length(const ExecutionSchema& schema, const std::map<std::string, Ticks>& durations);

}  // namespace admire
