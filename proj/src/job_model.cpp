#include "admire/job_model.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "admire/error.hpp"

namespace admire {

std::string_view task_kind_name(TaskKind k) noexcept {
  switch (k) {
    case TaskKind::preprocessing: return "preprocessing";
    case TaskKind::data_distribution: return "data_distribution";
    case TaskKind::clustering: return "clustering";
    case TaskKind::association_rules: return "association_rules";
    case TaskKind::classification: return "classification";
    case TaskKind::evaluation: return "evaluation";
  }
  return "?";
}

const std::vector<TaskKind>& all_task_kinds() {
  static const std::vector<TaskKind> kinds = {TaskKind::preprocessing,     TaskKind::data_distribution,
                                              TaskKind::clustering,        TaskKind::association_rules,
                                              TaskKind::classification,    TaskKind::evaluation};
  return kinds;
}

TaskKind parse_task_kind(std::string_view s) {
  for (auto k : all_task_kinds()) {
    if (task_kind_name(k) == s) return k;
  }
  throw Error(Errc::unknown_kind, "'" + std::string(s) + "'");
}

std::optional<std::int64_t> param_int(const Params& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) return std::nullopt;
  if (auto* i = std::get_if<std::int64_t>(&it->second)) return *i;
  throw Error(Errc::invalid_argument, "parameter '" + key + "' must be an integer");
}

std::optional<double> param_double(const Params& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) return std::nullopt;
  if (auto* d = std::get_if<double>(&it->second)) return *d;
  if (auto* i = std::get_if<std::int64_t>(&it->second)) return static_cast<double>(*i);
  throw Error(Errc::invalid_argument, "parameter '" + key + "' must be a number");
}

std::optional<std::string> param_string(const Params& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) return std::nullopt;
  if (auto* s = std::get_if<std::string>(&it->second)) return *s;
  throw Error(Errc::invalid_argument, "parameter '" + key + "' must be a string");
}

const TaskSpec* JobSpec::find(std::string_view id) const noexcept {
  for (const auto& t : tasks) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

std::string_view violation_kind_name(ViolationKind k) noexcept {
  switch (k) {
    case ViolationKind::empty_task_id: return "empty-task-id";
    case ViolationKind::duplicate_task_id: return "duplicate-task-id";
    case ViolationKind::dangling_dependency: return "dangling-dependency";
    case ViolationKind::unknown_algorithm: return "unknown-algorithm";
    case ViolationKind::unknown_dataset: return "unknown-dataset";
    case ViolationKind::undeclared_input_dependency: return "undeclared-input-dependency";
    case ViolationKind::kind_mismatch: return "kind-mismatch";
    case ViolationKind::cycle: return "cycle";
  }
  return "?";
}

std::string Violation::describe() const {
  std::string out(violation_kind_name(kind));
  if (kind == ViolationKind::cycle) {
    out += "{";
    for (std::size_t i = 0; i < subjects.size(); ++i) {
      if (i) out += ",";
      out += subjects[i];
    }
    return out + "}";
  }
  out += "(" + task;
  for (const auto& s : subjects) out += (kind == ViolationKind::dangling_dependency ? "->" : ", ") + s;
  return out + ")";
}

bool ValidationReport::contains(ViolationKind k) const noexcept {
  return std::any_of(violations.begin(), violations.end(), [k](const Violation& v) { return v.kind == k; });
}

namespace {

using Adjacency = std::map<std::string, std::vector<std::string>>;

// Edges dep -> task for dependencies that name a task in the job.
Adjacency successors(const JobSpec& job) {
  Adjacency succ;
  for (const auto& t : job.tasks) succ[t.id];
  for (const auto& t : job.tasks) {
    for (const auto& d : t.depends_on) {
      auto it = succ.find(d);
      if (it != succ.end()) it->second.push_back(t.id);
    }
  }
  for (auto& [_, v] : succ) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return succ;
}

// Tarjan's SCC; returns components that contain a cycle, members sorted.
std::vector<std::vector<std::string>> cyclic_components(const Adjacency& succ) {
  std::map<std::string, int> index;
  std::map<std::string, int> low;
  std::set<std::string> on_stack;
  std::vector<std::string> stack;
  std::vector<std::vector<std::string>> out;
  int counter = 0;

  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    for (const auto& w : succ.at(v)) {
      if (!index.count(w)) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack.count(w)) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::string> comp;
      std::string w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        comp.push_back(w);
      } while (w != v);
      const auto& self = succ.at(v);
      const bool self_loop = std::find(self.begin(), self.end(), v) != self.end();
      if (comp.size() > 1 || self_loop) {
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
    }
  };
  for (const auto& [v, _] : succ) {
    if (!index.count(v)) visit(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ValidationReport validate_job(const JobSpec& job, const RepositoryView& repos) {
  ValidationReport report;
  auto add = [&](ViolationKind k, const std::string& task, std::vector<std::string> subjects = {}) {
    report.violations.push_back({k, task, std::move(subjects)});
  };

  std::set<std::string> ids;
  for (const auto& t : job.tasks) {
    if (t.id.empty()) {
      add(ViolationKind::empty_task_id, t.id);
    } else if (!ids.insert(t.id).second) {
      add(ViolationKind::duplicate_task_id, t.id);
    }
  }

  std::vector<const TaskSpec*> ordered;
  for (const auto& t : job.tasks) ordered.push_back(&t);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const TaskSpec* a, const TaskSpec* b) { return a->id < b->id; });

  for (const auto* t : ordered) {
    for (const auto& d : t->depends_on) {
      if (!ids.count(d)) add(ViolationKind::dangling_dependency, t->id, {d});
    }
    if (t->algorithm != kAutoAlgorithm) {
      const auto kind = repos.algorithm_kind(t->algorithm);
      if (!kind) {
        add(ViolationKind::unknown_algorithm, t->id, {t->algorithm});
      } else if (*kind != t->kind) {
        add(ViolationKind::kind_mismatch, t->id,
            {t->algorithm, std::string(task_kind_name(t->kind)), std::string(task_kind_name(*kind))});
      }
    }
    for (const auto& in : t->inputs) {
      if (ids.count(in)) {
        if (std::find(t->depends_on.begin(), t->depends_on.end(), in) == t->depends_on.end()) {
          add(ViolationKind::undeclared_input_dependency, t->id, {in});
        }
      } else if (!repos.has_dataset(in)) {
        add(ViolationKind::unknown_dataset, t->id, {in});
      }
    }
  }

  for (auto& comp : cyclic_components(successors(job))) {
    const auto first = comp.front();
    add(ViolationKind::cycle, first, std::move(comp));
  }
  return report;
}

std::size_t ExecutionSchema::stage_of(std::string_view task) const {
  for (std::size_t s = 0; s < stages.size(); ++s) {
    if (std::find(stages[s].begin(), stages[s].end(), task) != stages[s].end()) return s;
  }
  throw Error(Errc::unknown_task, std::string(task));
}

ExecutionSchema build_schema(const JobSpec& job) {
  std::map<std::string, const TaskSpec*> by_id;
  for (const auto& t : job.tasks) {
    if (!by_id.emplace(t.id, &t).second) throw Error(Errc::invalid_job, "duplicate task id '" + t.id + "'");
  }
  std::map<std::string, std::size_t> indegree;
  for (const auto& [id, t] : by_id) {
    std::set<std::string> deps(t->depends_on.begin(), t->depends_on.end());
    for (const auto& d : deps) {
      if (!by_id.count(d)) throw Error(Errc::unknown_task, "'" + id + "' depends on unknown task '" + d + "'");
    }
    indegree[id] = deps.size();
  }
  const auto succ = successors(job);

  // Kahn over a sorted frontier; depth = longest path from any source.
  std::map<std::string, std::size_t> depth;
  std::set<std::string> ready;
  for (const auto& [id, deg] : indegree) {
    if (deg == 0) {
      ready.insert(id);
      depth[id] = 0;
    }
  }
  std::size_t processed = 0;
  while (!ready.empty()) {
    const std::string v = *ready.begin();
    ready.erase(ready.begin());
    ++processed;
    for (const auto& w : succ.at(v)) {
      depth[w] = std::max(depth[w], depth[v] + 1);
      if (--indegree[w] == 0) ready.insert(w);
    }
  }
  if (processed != by_id.size()) {
    std::string members;
    for (const auto& [id, deg] : indegree) {
      if (deg > 0) members += (members.empty() ? "" : ",") + id;
    }
    throw Error(Errc::cycle_detected, "cycle among {" + members + "}");
  }

  ExecutionSchema schema;
  schema.job = job;
  for (const auto& [id, d] : depth) {
    if (schema.stages.size() <= d) schema.stages.resize(d + 1);
    schema.stages[d].push_back(id);  // map order keeps each stage sorted
  }
  for (const auto& stage : schema.stages) {
    schema.topological_order.insert(schema.topological_order.end(), stage.begin(), stage.end());
  }
  return schema;
}

namespace {

bool reaches(const Adjacency& succ, const std::string& from, const std::string& to) {
  std::set<std::string> seen{from};
  std::deque<std::string> queue{from};
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    for (const auto& w : succ.at(v)) {
      if (w == to) return true;
      if (seen.insert(w).second) queue.push_back(w);
    }
  }
  return false;
}

}  // namespace

bool detect_independent(const ExecutionSchema& schema, std::string_view t1, std::string_view t2) {
  for (auto t : {t1, t2}) {
    if (!schema.job.find(t)) throw Error(Errc::unknown_task, std::string(t));
  }
  if (t1 == t2) return false;
  const auto succ = successors(schema.job);
  const std::string a(t1), b(t2);
  return !reaches(succ, a, b) && !reaches(succ, b, a);
}

Ticks critical_path_length(const ExecutionSchema& schema, const std::map<std::string, Ticks>& durations) {
  std::map<std::string, Ticks> finish;
  Ticks best = 0;
  for (const auto& id : schema.topological_order) {
    auto it = durations.find(id);
    if (it == durations.end()) throw Error(Errc::missing_duration, id);
    Ticks start = 0;
    for (const auto& d : schema.job.find(id)->depends_on) start = std::max(start, finish.at(d));
    finish[id] = start + it->second;
    best = std::max(best, finish[id]);
  }
  return best;
}

}  // namespace admire
