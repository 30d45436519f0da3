#include "admire/orchestrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "admire/error.hpp"
#include "admire/knowledge_map.hpp"
#include "admire/local_mining.hpp"
#include "admire/preprocessing.hpp"
#include "admire/results_eval.hpp"
#include "admire/rng.hpp"

namespace admire::orchestration {

using Json = nlohmann::json;

std::string_view phase_name(Phase p) noexcept {
  switch (p) {
    case Phase::allocated: return "allocated";
    case Phase::dispatched: return "dispatched";
    case Phase::completed: return "completed";
    case Phase::failed: return "failed";
  }
  return "?";
}

std::string_view status_name(TaskStatus s) noexcept {
  switch (s) {
    case TaskStatus::completed: return "completed";
    case TaskStatus::failed: return "failed";
    case TaskStatus::skipped: return "skipped";
  }
  return "?";
}

bool JobResult::ok() const {
  return std::all_of(status.begin(), status.end(), [](const auto& kv) { return kv.second == TaskStatus::completed; });
}

NodeId resolve_origin(const grid::SimGrid& grid, const ExecutionConfig& config) {
  const auto& nodes = grid.topology().nodes();
  if (config.origin.empty()) {
    if (nodes.empty()) throw Error(Errc::unknown_node, "grid has no nodes");
    return *nodes.begin();
  }
  if (!nodes.count(config.origin)) throw Error(Errc::unknown_node, config.origin);
  return config.origin;
}

namespace {

std::uint16_t discovery_ttl(const grid::SimGrid& grid, const ExecutionConfig& config) {
  if (config.discovery_ttl) return *config.discovery_ttl;
  const auto n = grid.topology().nodes().size();
  return static_cast<std::uint16_t>(std::min<std::size_t>(n, std::numeric_limits<std::uint16_t>::max()));
}

std::string dataset_entity_id(const std::string& dataset, const NodeId& node) { return "dataset:" + dataset + "@" + node; }

}  // namespace

void populate_grid(grid::SimGrid& grid, const Repository& repo, const NodeId& origin) {
  const auto& topo = grid.topology();
  for (const auto& n : repo.nodes()) {
    if (!topo.contains(n.id)) continue;
    grid.register_entity({"node:" + n.id, grid::EntityKind::resource, n, n.id});
  }
  for (const auto& d : repo.datasets()) {
    std::set<NodeId> homes;
    homes.insert(topo.contains(d.owner_node) ? d.owner_node : origin);
    for (const auto& n : repo.nodes()) {
      if (topo.contains(n.id) && n.datasets_hosted.count(d.id)) homes.insert(n.id);
    }
    for (const auto& home : homes) {
      grid.register_entity(
          {dataset_entity_id(d.id, home), grid::EntityKind::data, grid::DatasetRef{d.id, d.row_count}, home});
    }
  }
}

Allocation allocate(const Repository& repo, const ExecutionSchema& schema, grid::SimGrid& grid,
                    const ExecutionConfig& config) {
  (void)repo;
  const auto origin = resolve_origin(grid, config);
  const auto ttl = discovery_ttl(grid, config);

  std::map<std::set<std::string>, std::vector<NodeId>> candidates;
  auto candidates_for = [&](const TaskSpec& t) -> const std::vector<NodeId>& {
    std::set<std::string> required(t.required_capabilities.begin(), t.required_capabilities.end());
    auto it = candidates.find(required);
    if (it != candidates.end()) return it->second;
    std::set<NodeId> found;
    for (const auto& e : grid.discover(origin, {grid::EntityKind::resource, required, std::nullopt}, ttl)) {
      const auto& n = std::get<NodeDescriptor>(e.payload);
      if (n.id == e.home_node) found.insert(n.id);
    }
    return candidates.emplace(required, std::vector<NodeId>(found.begin(), found.end())).first->second;
  };

  Allocation out;
  std::map<NodeId, std::size_t> assigned;
  for (const auto& stage : schema.stages) {
    std::map<NodeId, std::size_t> stage_load;
    for (const auto& id : stage) {
      const auto* t = schema.job.find(id);
      if (!t) throw Error(Errc::unknown_task, id);
      const auto& nodes = candidates_for(*t);
      if (nodes.empty()) {
        std::string caps;
        for (const auto& c : t->required_capabilities) caps += (caps.empty() ? "" : ",") + c;
        throw Error(Errc::no_matching_node, "task '" + id + "' requires {" + caps + "}");
      }
      auto key = [&](const NodeId& n) {
        const bool full = stage_load[n] >= grid.capacity(n);
        return std::tuple(full, assigned[n], n);
      };
      const auto best = *std::min_element(nodes.begin(), nodes.end(),
                                          [&](const NodeId& a, const NodeId& b) { return key(a) < key(b); });
      out[id] = best;
      ++stage_load[best];
      ++assigned[best];
    }
  }
  return out;
}

JobResult run_schedule(const ExecutionSchema& schema, const Allocation& allocation, grid::SimGrid& grid,
                       const ExecutionConfig& config, const TaskWork& work, const DispatchHook& before_dispatch) {
  const auto origin = resolve_origin(grid, config);
  JobResult r;
  r.job = schema.job.name;
  r.seed = config.seed;
  r.partitions = config.partitions;
  r.allocation = allocation;
  r.start_tick = grid.now();

  auto emit = [&](ExecutionEvent e) {
    if (config.on_event) config.on_event(e);
    r.events.push_back(std::move(e));
  };
  auto node_of = [&](const std::string& id) -> const NodeId& {
    auto it = allocation.find(id);
    if (it == allocation.end()) throw Error(Errc::unknown_task, "no allocation for task '" + id + "'");
    return it->second;
  };

  for (const auto& id : schema.topological_order) emit({r.start_tick, id, Phase::allocated, node_of(id), {}});

  std::map<std::string, std::string> details;
  grid.set_executor([&](const NodeId& node, const grid::Bytes& payload) {
    const std::string id(payload.begin(), payload.end());
    const auto* spec = schema.job.find(id);
    grid::ExecOutcome out;
    try {
      if (!spec) throw Error(Errc::unknown_task, id);
      auto w = work(*spec, node);
      out.duration = w.duration;
      details[id] = std::move(w.detail);
    } catch (const std::exception& e) {
      out.failed = true;
      out.error = e.what();
      out.duration = 1;
    }
    r.residency.push_back({id, node, grid.now(), grid.now() + out.duration});
    return out;
  });

  Tick last = r.start_tick;
  for (const auto& stage : schema.stages) {
    // Staging (data movement) for the whole stage happens first so that every
    // runnable task of the stage is dispatched at the same tick.
    std::vector<std::string> ready;
    for (const auto& id : stage) {
      const auto& spec = *schema.job.find(id);
      const auto& node = node_of(id);
      auto blocked = [&](const std::vector<std::string>& refs) {
        return std::any_of(refs.begin(), refs.end(), [&](const std::string& d) {
          auto it = r.status.find(d);
          return it != r.status.end() && it->second != TaskStatus::completed;
        });
      };
      if (blocked(spec.depends_on) || blocked(spec.inputs)) {
        r.status[id] = TaskStatus::skipped;
        continue;
      }
      try {
        if (before_dispatch) before_dispatch(spec, node);
        ready.push_back(id);
      } catch (const std::exception& e) {
        r.status[id] = TaskStatus::failed;
        emit({grid.now(), id, Phase::failed, node, e.what()});
      }
    }

    std::vector<std::pair<std::string, grid::CorrelationId>> running;
    for (const auto& id : ready) {
      running.emplace_back(id, grid.submit_task(origin, node_of(id), grid::Bytes(id.begin(), id.end())));
      emit({grid.now(), id, Phase::dispatched, node_of(id), {}});
    }

    std::vector<ExecutionEvent> finished;
    for (const auto& [id, corr] : running) {
      auto reply = grid.await_reply(corr);
      last = std::max(last, reply.arrived_at);
      if (reply.failed) {
        r.status[id] = TaskStatus::failed;
        finished.push_back(
            {reply.arrived_at, id, Phase::failed, node_of(id), std::string(reply.payload.begin(), reply.payload.end())});
      } else {
        r.status[id] = TaskStatus::completed;
        finished.push_back({reply.arrived_at, id, Phase::completed, node_of(id), details[id]});
      }
    }
    std::sort(finished.begin(), finished.end(), [](const ExecutionEvent& a, const ExecutionEvent& b) {
      return std::tie(a.tick, a.task) < std::tie(b.tick, b.task);
    });
    for (auto& e : finished) emit(std::move(e));
  }
  grid.set_executor({});
  r.makespan = last - r.start_tick;
  return r;
}

// ---- mining pipeline --------------------------------------------------------

namespace {

struct DataOutput {
  std::vector<Table> partitions;
  // The unpartitioned rows, kept while they are unchanged from the source.
  std::optional<Table> whole;
};

struct ModelOutput {
  GlobalModel model;
  std::vector<Table> data;
  std::vector<std::string> features;
  std::optional<std::string> label;
};

const std::vector<std::string> kPreprocessingOps{"clean_drop", "clean_impute", "minmax", "sample", "zscore"};

Table project(const Table& t, const std::vector<std::string>& columns) {
  std::vector<std::size_t> idx;
  Schema schema;
  for (const auto& c : columns) {
    idx.push_back(t.column_index(c));
    schema.push_back(t.schema()[idx.back()]);
  }
  std::vector<Row> rows;
  rows.reserve(t.row_count());
  for (const auto& row : t.rows()) {
    Row out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(row[i]);
    rows.push_back(std::move(out));
  }
  return Table(std::move(schema), std::move(rows));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << v;
  return os.str();
}

class Pipeline {
 public:
  Pipeline(Repository& repo, const ExecutionSchema& schema, const ExecutionConfig& config)
      : repo_(repo), schema_(schema), config_(config) {}

  WorkResult run(const TaskSpec& t) {
    switch (t.kind) {
      case TaskKind::data_distribution: return distribute(t);
      case TaskKind::preprocessing: return preprocess(t);
      case TaskKind::clustering: return cluster(t);
      case TaskKind::association_rules: return rules(t);
      case TaskKind::classification: return classify(t);
      case TaskKind::evaluation: return evaluate(t);
    }
    throw Error(Errc::unknown_kind, t.id);
  }

  const std::vector<KnowledgeRef>& knowledge() const { return knowledge_; }

 private:
  std::size_t partition_count(const TaskSpec& t) const {
    const auto k = param_int(t.params, "partitions").value_or(static_cast<std::int64_t>(config_.partitions));
    if (k < 1) throw Error(Errc::invalid_k, "task '" + t.id + "': partitions must be at least 1");
    return static_cast<std::size_t>(k);
  }

  const Table& dataset_table(const std::string& id) {
    auto it = tables_.find(id);
    if (it != tables_.end()) return it->second;
    const auto d = repo_.dataset(id);
    if (!d) throw Error(Errc::unknown_dataset, id);
    return tables_.emplace(id, load_table(d->uri)).first->second;
  }

  // First input that is a dataset or a data-producing task.
  DataOutput data_input(const TaskSpec& t) {
    for (const auto& in : t.inputs) {
      if (auto it = data_.find(in); it != data_.end()) return it->second;
      if (repo_.has_dataset(in)) {
        const auto& table = dataset_table(in);
        DataOutput out;
        out.partitions = horizontal_partition(table, partition_count(t), derive_seed(config_.seed, "partition:" + t.id));
        out.whole = table;
        return out;
      }
    }
    for (const auto& in : t.inputs) {
      if (auto it = models_.find(in); it != models_.end()) return DataOutput{it->second.data, std::nullopt};
    }
    throw Error(Errc::invalid_argument, "task '" + t.id + "' has no data input");
  }

  std::string resolve_algorithm(const TaskSpec& t, const Table& sample, std::optional<std::string> label = {}) {
    if (t.algorithm != kAutoAlgorithm) return t.algorithm;
    const auto summary = knowledge::summarize(sample, std::move(label));
    if (repo_.query_by_kind(t.kind).empty()) {
      knowledge::check_compatibility(t.kind, summary);
      return std::string(knowledge::builtin_algorithm(t.kind));
    }
    return knowledge::select_strategy(t.kind, summary, repo_).id;
  }

  static std::string named(const TaskSpec& t) {
    return t.algorithm == kAutoAlgorithm ? std::string(knowledge::builtin_algorithm(t.kind)) : t.algorithm;
  }

  static Table apply_op(const std::string& op, const Table& t, const TaskSpec& spec, std::uint64_t seed) {
    auto columns = [&] {
      auto listed = param_string(spec.params, "columns");
      return listed ? split_list(*listed) : preprocessing::numeric_columns(t);
    };
    if (op == "clean_drop") return preprocessing::clean_missing(t, preprocessing::MissingPolicy::drop_row);
    if (op == "clean_impute") return preprocessing::clean_missing(t, preprocessing::MissingPolicy::impute);
    if (op == "zscore") return preprocessing::zscore(t, columns());
    if (op == "minmax") return preprocessing::minmax(t, columns());
    if (op == "sample") {
      const auto f = param_double(spec.params, "fraction");
      if (!f) throw Error(Errc::invalid_fraction, "task '" + spec.id + "': sample needs a fraction");
      return preprocessing::sample(t, *f, seed);
    }
    throw Error(Errc::invalid_argument, "task '" + spec.id + "': unknown preprocessing op '" + op + "'");
  }

  // Optional local cleaning that mining tasks may request with `clean`.
  std::vector<Table> cleaned(const TaskSpec& t, std::vector<Table> parts) const {
    const auto clean = param_string(t.params, "clean");
    if (!clean) return parts;
    for (auto& p : parts) p = apply_op("clean_" + *clean, p, t, 0);
    return parts;
  }

  WorkResult distribute(const TaskSpec& t) {
    auto in = data_input(t);
    const auto all = concatenate(in.partitions);
    DataOutput out;
    out.partitions = horizontal_partition(all, partition_count(t), derive_seed(config_.seed, "partition:" + t.id));
    out.whole = in.whole;
    const auto rows = all.row_count();
    data_[t.id] = std::move(out);
    return {1, "algorithm=" + named(t) + " partitions=" + std::to_string(partition_count(t)) +
                   " rows=" + std::to_string(rows)};
  }

  WorkResult preprocess(const TaskSpec& t) {
    auto in = data_input(t);
    std::string op;
    if (auto p = param_string(t.params, "op")) {
      op = *p;
    } else {
      op = resolve_algorithm(t, in.partitions.front());
    }
    if (std::find(kPreprocessingOps.begin(), kPreprocessingOps.end(), op) == kPreprocessingOps.end()) {
      throw Error(Errc::invalid_argument, "task '" + t.id + "': unknown preprocessing op '" + op + "'");
    }
    DataOutput out;
    for (std::size_t i = 0; i < in.partitions.size(); ++i) {
      out.partitions.push_back(
          apply_op(op, in.partitions[i], t, derive_seed(config_.seed, t.id + "#" + std::to_string(i))));
    }
    data_[t.id] = std::move(out);
    return {1, "algorithm=" + (param_string(t.params, "op") ? named(t) : op) + " op=" + op};
  }

  void emit(const TaskSpec& t, GlobalModel model, std::map<std::string, double> metrics) {
    knowledge::emit_knowledge(repo_, schema_.job.name, t.id, std::move(model), std::move(metrics));
    knowledge_.push_back({schema_.job.name, t.id});
  }

  WorkResult cluster(const TaskSpec& t) {
    auto in = data_input(t);
    auto parts = cleaned(t, std::move(in.partitions));
    const auto listed = param_string(t.params, "columns");
    const auto features = listed ? split_list(*listed) : preprocessing::numeric_columns(parts.front());
    for (auto& p : parts) p = project(p, features);
    const auto algorithm = resolve_algorithm(t, parts.front());

    const auto k = param_int(t.params, "k").value_or(2);
    if (k < 1) throw Error(Errc::bad_k, "task '" + t.id + "': k must be at least 1");
    const auto max_iter = param_int(t.params, "max_iter").value_or(20);
    const auto tol = param_double(t.params, "tol").value_or(1e-6);

    // Seeding from the unpartitioned rows keeps the result independent of the
    // partition count.
    std::vector<Table> seed_source;
    if (in.whole && !param_string(t.params, "clean")) {
      seed_source.push_back(project(*in.whole, features));
    } else {
      seed_source = parts;
    }
    const auto init = knowledge::first_distinct_rows(seed_source, static_cast<std::size_t>(k));
    auto run = knowledge::distributed_kmeans(parts, static_cast<std::size_t>(k), init,
                                             static_cast<std::size_t>(std::max<std::int64_t>(max_iter, 0)), tol);
    std::uint64_t rows = 0;
    for (const auto& p : parts) rows += p.row_count();
    const auto sse = run.model.total_sse;
    emit(t, run.model,
         {{"iterations", static_cast<double>(run.iterations)},
          {"k", static_cast<double>(k)},
          {"rows", static_cast<double>(rows)},
          {"sse", sse}});
    models_[t.id] = {std::move(run.model), parts, features, std::nullopt};
    return {std::max<Tick>(1, run.iterations),
            "algorithm=" + algorithm + " iterations=" + std::to_string(run.iterations) + " sse=" + fmt(sse)};
  }

  WorkResult rules(const TaskSpec& t) {
    auto in = data_input(t);
    auto parts = cleaned(t, std::move(in.partitions));
    const auto algorithm = resolve_algorithm(t, parts.front());
    const auto minsup = param_double(t.params, "minsup").value_or(0.1);
    const auto minconf = param_double(t.params, "minconf").value_or(0.6);
    std::vector<std::vector<Transaction>> tx;
    for (const auto& p : parts) tx.push_back(mining::transactions_from_table(p));
    auto run = knowledge::drive_apriori(tx, minsup, minconf);
    const auto& m = run.model;
    std::map<std::string, double> metrics{{"itemsets", static_cast<double>(m.itemsets.size())},
                                          {"levels", static_cast<double>(run.levels)},
                                          {"rules", static_cast<double>(m.rules.size())},
                                          {"transactions", static_cast<double>(m.transaction_count)}};
    const auto detail = "algorithm=" + algorithm + " itemsets=" + std::to_string(m.itemsets.size()) +
                        " rules=" + std::to_string(m.rules.size());
    emit(t, m, std::move(metrics));
    models_[t.id] = {std::move(run.model), parts, {}, std::nullopt};
    return {std::max<Tick>(1, run.levels), detail};
  }

  WorkResult classify(const TaskSpec& t) {
    const auto label = param_string(t.params, "label");
    if (!label) throw Error(Errc::missing_label, "task '" + t.id + "' needs a label parameter");
    auto in = data_input(t);
    auto parts = cleaned(t, std::move(in.partitions));
    const auto algorithm = resolve_algorithm(t, parts.front(), *label);
    ClassifierModel model{knowledge::distributed_bayes(parts, *label)};

    std::vector<std::string> predicted, truth;
    for (const auto& p : parts) {
      const auto li = p.column_index(*label);
      for (const auto& row : p.rows()) {
        const auto* y = std::get_if<std::string>(&row[li]);
        if (!y) continue;
        predicted.push_back(mining::bayes_predict(model.counts, p.schema(), row).label);
        truth.push_back(*y);
      }
    }
    const auto acc = truth.empty() ? 0.0 : eval::accuracy(predicted, truth);
    emit(t, model,
         {{"classes", static_cast<double>(model.counts.class_counts.size())},
          {"rows", static_cast<double>(model.counts.total())},
          {"training_accuracy", acc}});
    models_[t.id] = {std::move(model), parts, {}, label};
    return {1, "algorithm=" + algorithm + " training_accuracy=" + fmt(acc)};
  }

  WorkResult evaluate(const TaskSpec& t) {
    const ModelOutput* source = nullptr;
    for (const auto& in : t.inputs) {
      if (auto it = models_.find(in); it != models_.end()) {
        source = &it->second;
        break;
      }
    }
    if (!source) throw Error(Errc::invalid_argument, "task '" + t.id + "' has no model input");

    std::optional<Table> data;
    for (const auto& in : t.inputs) {
      if (data_.count(in) || repo_.has_dataset(in)) {
        data = concatenate(data_input(t).partitions);
        break;
      }
    }
    if (!data) data = concatenate(source->data);

    std::map<std::string, double> metrics{{"rows", static_cast<double>(data->row_count())}};
    std::string detail = "algorithm=" + named(t);
    if (const auto* c = std::get_if<ClusteringModel>(&source->model)) {
      const auto projected = project(*data, source->features);
      const auto sse = eval::clustering_sse(*c, projected);
      metrics["sse"] = sse;
      detail += " sse=" + fmt(sse);
    } else if (const auto* r = std::get_if<RulesModel>(&source->model)) {
      double conf = 0.0;
      for (const auto& rule : r->rules) conf += rule.confidence;
      metrics["rules"] = static_cast<double>(r->rules.size());
      metrics["mean_confidence"] = r->rules.empty() ? 0.0 : conf / static_cast<double>(r->rules.size());
      detail += " rules=" + std::to_string(r->rules.size());
    } else {
      const auto& b = std::get<ClassifierModel>(source->model).counts;
      const auto label = param_string(t.params, "label").value_or(b.label_column);
      const auto li = data->find_column(label);
      std::vector<std::string> predicted, truth;
      for (const auto& row : data->rows()) {
        auto p = mining::bayes_predict(b, data->schema(), row).label;
        metrics["predicted:" + p] += 1.0;
        if (li) {
          if (const auto* y = std::get_if<std::string>(&row[*li])) {
            predicted.push_back(std::move(p));
            truth.push_back(*y);
          }
        }
      }
      if (!truth.empty()) {
        const auto acc = eval::accuracy(predicted, truth);
        metrics["accuracy"] = acc;
        detail += " accuracy=" + fmt(acc);
      }
    }
    emit(t, source->model, std::move(metrics));
    return {1, detail};
  }

  Repository& repo_;
  const ExecutionSchema& schema_;
  const ExecutionConfig& config_;
  std::map<std::string, Table> tables_;
  std::map<std::string, DataOutput> data_;
  std::map<std::string, ModelOutput> models_;
  std::vector<KnowledgeRef> knowledge_;
};

}  // namespace

JobResult execute_job(Repository& repo, const ExecutionSchema& schema, grid::SimGrid& grid,
                      const ExecutionConfig& config) {
  const auto origin = resolve_origin(grid, config);
  const auto ttl = discovery_ttl(grid, config);
  const auto allocation = allocate(repo, schema, grid, config);
  Pipeline pipeline(repo, schema, config);

  // Inputs are replicated to the executing node before dispatch, from the
  // nearest node that has them.
  auto stage_in = [&](const TaskSpec& t, const NodeId& node) {
    for (const auto& in : t.inputs) {
      if (!repo.has_dataset(in) || grid.hosts(node, in)) continue;
      auto found = grid.discover(origin, {grid::EntityKind::data, {}, in}, ttl);
      std::optional<std::pair<Tick, NodeId>> best;
      for (const auto& e : found) {
        const auto latency = grid.route_latency(e.home_node, node);
        if (!latency) continue;
        std::pair<Tick, NodeId> key{*latency, e.home_node};
        if (!best || key < *best) best = key;
      }
      if (!best) throw Error(Errc::unknown_dataset, "dataset '" + in + "' is not reachable from " + node);
      grid.transfer_dataset(in, best->second, node);
    }
  };

  auto result = run_schedule(
      schema, allocation, grid, config, [&](const TaskSpec& t, const NodeId&) { return pipeline.run(t); }, stage_in);
  result.knowledge = pipeline.knowledge();
  return result;
}

std::vector<ExecutionEvent> monitor(const JobResult& result) { return result.events; }

Json event_json(const ExecutionEvent& e) {
  return Json{{"tick", e.tick},
              {"task", e.task},
              {"phase", std::string(phase_name(e.phase))},
              {"node", e.node},
              {"detail", e.detail}};
}

Json job_result_json(const JobResult& r) {
  Json tasks = Json::object();
  for (const auto& [id, s] : r.status) tasks[id] = std::string(status_name(s));
  Json knowledge = Json::array();
  for (const auto& k : r.knowledge) knowledge.push_back({{"job", k.job}, {"task", k.task}});
  Json residency = Json::array();
  for (const auto& x : r.residency) {
    residency.push_back({{"task", x.task}, {"node", x.node}, {"start", x.start}, {"end", x.end}});
  }
  return Json{{"job", r.job},
              {"status", r.ok() ? "ok" : "partial-failure"},
              {"seed", r.seed},
              {"partitions", r.partitions},
              {"start_tick", r.start_tick},
              {"makespan", r.makespan},
              {"allocation", r.allocation},
              {"tasks", tasks},
              {"knowledge", knowledge},
              {"residency", residency}};
}

std::string events_jsonl(const JobResult& r) {
  std::string out;
  for (const auto& e : r.events) out += event_json(e).dump() + "\n";
  return out;
}

}  // namespace admire::orchestration
