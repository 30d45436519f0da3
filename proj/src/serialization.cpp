#include "admire/serialization.hpp"

#include "admire/error.hpp"

namespace admire {

void to_json(Json& j, const ParamValue& v) {
  std::visit([&](const auto& x) { j = x; }, v);
}

void from_json(const Json& j, ParamValue& v) {
  if (j.is_boolean()) {
    v = j.get<bool>();
  } else if (j.is_number_integer()) {
    v = j.get<std::int64_t>();
  } else if (j.is_number_float()) {
    v = j.get<double>();
  } else if (j.is_string()) {
    v = j.get<std::string>();
  } else {
    throw Error(Errc::invalid_job, "parameter values must be scalars");
  }
}

void to_json(Json& j, const Column& c) { j = Json{{"name", c.name}, {"type", column_type_name(c.type)}}; }

void from_json(const Json& j, Column& c) {
  j.at("name").get_to(c.name);
  const auto type = parse_column_type(j.at("type").get<std::string>());
  if (!type) throw Error(Errc::parse_error, "bad column type");
  c.type = *type;
}

void to_json(Json& j, const TaskSpec& t) {
  j = Json{{"id", t.id},
           {"kind", task_kind_name(t.kind)},
           {"algorithm", t.algorithm},
           {"params", Json::object()},
           {"inputs", t.inputs},
           {"depends_on", t.depends_on},
           {"required_capabilities", t.required_capabilities}};
  for (const auto& [k, v] : t.params) to_json(j["params"][k], v);
}

void from_json(const Json& j, TaskSpec& t) {
  j.at("id").get_to(t.id);
  t.kind = parse_task_kind(j.at("kind").get<std::string>());
  t.algorithm = j.value("algorithm", std::string(kAutoAlgorithm));
  t.params.clear();
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw Error(Errc::invalid_job, "task '" + t.id + "': params must be an object");
    for (const auto& [k, v] : j["params"].items()) from_json(v, t.params[k]);
  }
  t.inputs = j.value("inputs", std::vector<std::string>{});
  t.depends_on = j.value("depends_on", std::vector<std::string>{});
  t.required_capabilities = j.value("required_capabilities", std::vector<std::string>{});
}

void to_json(Json& j, const JobSpec& job) {
  j = Json{{"name", job.name}, {"seed", job.seed}, {"tasks", job.tasks}};
}

void from_json(const Json& j, JobSpec& job) {
  j.at("name").get_to(job.name);
  job.seed = j.value("seed", std::uint64_t{0});
  job.tasks = j.at("tasks").get<std::vector<TaskSpec>>();
}

void to_json(Json& j, const ExecutionSchema& s) {
  j = Json{{"job", s.job}, {"stages", s.stages}, {"topological_order", s.topological_order}};
}

void from_json(const Json& j, ExecutionSchema& s) {
  j.at("job").get_to(s.job);
  j.at("stages").get_to(s.stages);
  j.at("topological_order").get_to(s.topological_order);
}

void to_json(Json& j, const DatasetDescriptor& d) {
  j = Json{{"id", d.id},         {"uri", d.uri},
           {"row_count", d.row_count}, {"columns", d.columns},
           {"owner_node", d.owner_node}, {"published_at", d.published_at}};
}

void from_json(const Json& j, DatasetDescriptor& d) {
  j.at("id").get_to(d.id);
  j.at("uri").get_to(d.uri);
  j.at("row_count").get_to(d.row_count);
  j.at("columns").get_to(d.columns);
  j.at("owner_node").get_to(d.owner_node);
  j.at("published_at").get_to(d.published_at);
}

void to_json(Json& j, const ParamSpec& p) {
  j = Json{{"name", p.name}, {"type", p.type}, {"default", nullptr}};
  if (p.default_value) to_json(j["default"], *p.default_value);
}

void from_json(const Json& j, ParamSpec& p) {
  j.at("name").get_to(p.name);
  j.at("type").get_to(p.type);
  p.default_value.reset();
  if (j.contains("default") && !j["default"].is_null()) from_json(j["default"], p.default_value.emplace());
}

void to_json(Json& j, const AlgorithmDescriptor& a) {
  j = Json{{"id", a.id},
           {"kind", task_kind_name(a.kind)},
           {"param_schema", a.param_schema},
           {"description", a.description}};
}

void from_json(const Json& j, AlgorithmDescriptor& a) {
  j.at("id").get_to(a.id);
  a.kind = parse_task_kind(j.at("kind").get<std::string>());
  j.at("param_schema").get_to(a.param_schema);
  j.at("description").get_to(a.description);
}

void to_json(Json& j, const NodeDescriptor& n) {
  j = Json{{"id", n.id},
           {"capabilities", n.capabilities},
           {"capacity", n.capacity},
           {"datasets_hosted", n.datasets_hosted}};
}

void from_json(const Json& j, NodeDescriptor& n) {
  j.at("id").get_to(n.id);
  j.at("capabilities").get_to(n.capabilities);
  j.at("capacity").get_to(n.capacity);
  j.at("datasets_hosted").get_to(n.datasets_hosted);
}

namespace {

Json clustering_json(const ClusteringModel& m) {
  return Json{{"variant", "clustering"}, {"centroids", m.centroids}, {"total_sse", m.total_sse}, {"counts", m.counts}};
}

Json rules_json(const RulesModel& m) {
  Json itemsets = Json::array();
  for (const auto& f : m.itemsets) {
    itemsets.push_back(Json{{"items", f.items}, {"count", f.count}, {"support", f.support}});
  }
  Json rules = Json::array();
  for (const auto& r : m.rules) {
    rules.push_back(Json{{"antecedent", r.antecedent},
                         {"consequent", r.consequent},
                         {"support", r.support},
                         {"confidence", r.confidence}});
  }
  return Json{{"variant", "rules"}, {"transaction_count", m.transaction_count}, {"itemsets", itemsets}, {"rules", rules}};
}

Json classifier_json(const ClassifierModel& m) {
  const auto& b = m.counts;
  Json categorical = Json::array();
  for (const auto& [key, n] : b.categorical) {
    const auto& [cls, col, cat] = key;
    categorical.push_back(Json{{"class", cls}, {"column", col}, {"category", cat}, {"count", n}});
  }
  Json numeric = Json::array();
  for (const auto& [key, mo] : b.numeric) {
    numeric.push_back(Json{{"class", key.first},
                           {"column", key.second},
                           {"sum", mo.sum},
                           {"sum_of_squares", mo.sum_of_squares},
                           {"count", mo.count}});
  }
  return Json{{"variant", "classifier"}, {"label_column", b.label_column}, {"features", b.features},
              {"class_counts", b.class_counts}, {"categorical", categorical}, {"numeric", numeric}};
}

}  // namespace

void to_json(Json& j, const GlobalModel& m) {
  j = std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ClusteringModel>) {
          return clustering_json(x);
        } else if constexpr (std::is_same_v<T, RulesModel>) {
          return rules_json(x);
        } else {
          return classifier_json(x);
        }
      },
      m);
}

void from_json(const Json& j, GlobalModel& m) {
  const auto variant = j.at("variant").get<std::string>();
  if (variant == "clustering") {
    ClusteringModel c;
    j.at("centroids").get_to(c.centroids);
    j.at("total_sse").get_to(c.total_sse);
    j.at("counts").get_to(c.counts);
    m = std::move(c);
  } else if (variant == "rules") {
    RulesModel r;
    j.at("transaction_count").get_to(r.transaction_count);
    for (const auto& f : j.at("itemsets")) {
      r.itemsets.push_back({f.at("items").get<Itemset>(), f.at("count").get<std::uint64_t>(), f.at("support").get<double>()});
    }
    for (const auto& x : j.at("rules")) {
      r.rules.push_back({x.at("antecedent").get<Itemset>(), x.at("consequent").get<Itemset>(),
                         x.at("support").get<double>(), x.at("confidence").get<double>()});
    }
    m = std::move(r);
  } else if (variant == "classifier") {
    BayesCounts b;
    j.at("label_column").get_to(b.label_column);
    j.at("features").get_to(b.features);
    j.at("class_counts").get_to(b.class_counts);
    for (const auto& x : j.at("categorical")) {
      b.categorical[{x.at("class").get<std::string>(), x.at("column").get<std::string>(),
                     x.at("category").get<std::string>()}] = x.at("count").get<std::uint64_t>();
    }
    for (const auto& x : j.at("numeric")) {
      b.numeric[{x.at("class").get<std::string>(), x.at("column").get<std::string>()}] =
          NumericMoments{x.at("sum").get<double>(), x.at("sum_of_squares").get<double>(), x.at("count").get<std::uint64_t>()};
    }
    m = ClassifierModel{std::move(b)};
  } else {
    throw Error(Errc::parse_error, "unknown model variant '" + variant + "'");
  }
}

void to_json(Json& j, const KnowledgeEntry& e) {
  Json model;
  to_json(model, e.model);
  j = Json{{"job", e.job}, {"task", e.task}, {"model", model}, {"metrics", e.metrics}, {"created_at", e.created_at}};
}

void from_json(const Json& j, KnowledgeEntry& e) {
  j.at("job").get_to(e.job);
  j.at("task").get_to(e.task);
  from_json(j.at("model"), e.model);
  j.at("metrics").get_to(e.metrics);
  j.at("created_at").get_to(e.created_at);
}

JobSpec parse_job(const Json& j) {
  try {
    if (!j.is_object()) throw Error(Errc::invalid_job, "job document must be an object");
    return j.get<JobSpec>();
  } catch (const Json::exception& e) {
    throw Error(Errc::invalid_job, e.what());
  }
}

JobSpec parse_job_text(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(Errc::invalid_job, e.what());
  }
  return parse_job(j);
}

std::string dump_document(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace admire
