#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "admire/grid.hpp"
#include "admire/job_model.hpp"
#include "admire/repositories.hpp"

namespace admire::orchestration {

using grid::NodeId;
using grid::Tick;

enum class Phase { allocated, dispatched, completed, failed };
std::string_view phase_name(Phase p) noexcept;

struct ExecutionEvent {
  Tick tick = 0;
  std::string task;
  Phase phase = Phase::allocated;
  NodeId node;
  std::string detail;

  friend bool operator==(const ExecutionEvent&, const ExecutionEvent&) = default;
};

enum class TaskStatus { completed, failed, skipped };
std::string_view status_name(TaskStatus s) noexcept;

// Interval a task occupied one capacity slot on its node.
struct Residency {
  std::string task;
  NodeId node;
  Tick start = 0;
  Tick end = 0;

  friend bool operator==(const Residency&, const Residency&) = default;
};

struct KnowledgeRef {
  std::string job;
  std::string task;

  friend bool operator==(const KnowledgeRef&, const KnowledgeRef&) = default;
};

using Allocation = std::map<std::string, NodeId>;

struct JobResult {
  std::string job;
  std::uint64_t seed = 0;
  std::size_t partitions = 0;
  std::map<std::string, TaskStatus> status;
  Allocation allocation;
  std::vector<KnowledgeRef> knowledge;
  std::vector<ExecutionEvent> events;
  std::vector<Residency> residency;
  Tick start_tick = 0;
  Tick makespan = 0;

  bool ok() const;

  friend bool operator==(const JobResult&, const JobResult&) = default;
};

struct ExecutionConfig {
  std::uint64_t seed = 0;
  // Sites a raw dataset is split into when a task reads it.
  std::size_t partitions = 4;
  // Node the task manager runs on; empty means the smallest node id.
  NodeId origin;
  // Hop budget for resource discovery; unset means the node count.
  std::optional<std::uint16_t> discovery_ttl;
  std::function<void(const ExecutionEvent&)> on_event;
};

NodeId resolve_origin(const grid::SimGrid& grid, const ExecutionConfig& config);

// Registers every published node present in the topology as a resource
// entity, and every dataset as a data entity on its owner (datasets owned by
// "local" or by an unknown node land on `origin`) and on each node listing it
// in datasets_hosted.
void populate_grid(grid::SimGrid& grid, const Repository& repo, const NodeId& origin);

// Maps every task to a node found by grid discovery whose capabilities cover
// the task's requirements. Within a stage nodes are filled up to capacity
// first; ties go to the node with fewer assigned tasks, then the smaller id.
// Throws no-matching-node.
Allocation allocate(const Repository& repo, const ExecutionSchema& schema, grid::SimGrid& grid,
                    const ExecutionConfig& config = {});

struct WorkResult {
  Tick duration = 1;
  // Appended to the task's completed event.
  std::string detail;
};

// Work for one task on its node. Throwing fails the task.
using TaskWork = std::function<WorkResult(const TaskSpec& task, const NodeId& node)>;
// Runs before a task is dispatched; throwing fails the task.
using DispatchHook = std::function<void(const TaskSpec& task, const NodeId& node)>;

// Stage-ordered list scheduling over the grid: every runnable task of a
// stage is submitted at the same tick and the stage ends when all replies
// are in. Tasks downstream of a failure are skipped.
JobResult run_schedule(const ExecutionSchema& schema, const Allocation& allocation, grid::SimGrid& grid,
                       const ExecutionConfig& config, const TaskWork& work, const DispatchHook& before_dispatch = {});

// Full pipeline: allocate, then per task distribute partitions, preprocess
// locally, mine locally, merge in the knowledge map and emit knowledge.
JobResult execute_job(Repository& repo, const ExecutionSchema& schema, grid::SimGrid& grid,
                      const ExecutionConfig& config);

std::vector<ExecutionEvent> monitor(const JobResult& result);

nlohmann::json job_result_json(const JobResult& r);
nlohmann::json event_json(const ExecutionEvent& e);
// One compact JSON object per line.
std::string events_jsonl(const JobResult& r);

}  // namespace admire::orchestration
