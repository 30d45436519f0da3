// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failing criteria (capped at 1).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "admire/error.hpp"
#include "admire/grid.hpp"
#include "admire/knowledge_map.hpp"
#include "admire/local_mining.hpp"
#include "admire/orchestrator.hpp"
#include "admire/preprocessing.hpp"
#include "admire/table.hpp"
#include "cli_runner.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace admire;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::size_t checks = 0;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---- 1: distributed naive Bayes -------------------------------------------

Outcome bayes_equality() {
  Outcome o;
  const auto t0 = Clock::now();
  Rng rng(1001);
  const auto table = gen::categorical_table(rng, 200, 3, 2);
  const auto central = mining::bayes_fit(table, "label");

  // Independent tally of the centralized statistics.
  std::map<std::string, std::uint64_t> classes;
  std::map<std::tuple<std::string, std::string, std::string>, std::uint64_t> cells;
  for (const auto& row : table.rows()) {
    const auto& cls = std::get<std::string>(row.back());
    ++classes[cls];
    for (std::size_t c = 0; c + 1 < row.size(); ++c) {
      ++cells[{cls, table.schema()[c].name, std::get<std::string>(row[c])}];
    }
  }
  o.expect(central.class_counts == classes, "centralized class counts differ from tally");
  o.expect(central.categorical == cells, "centralized category counts differ from tally");

  for (std::size_t k : {1, 2, 4, 8}) {
    const auto parts = horizontal_partition(table, k, 77 + k);
    const auto merged = knowledge::distributed_bayes(parts, "label");
    o.expect(merged == central, "k=" + std::to_string(k) + ": merged counts differ from centralized");
  }
  const auto elapsed = seconds_since(t0);
  o.expect(elapsed < 1.0, "runtime " + std::to_string(elapsed) + " s");
  if (o.pass) o.detail = "k in {1,2,4,8} exact; " + std::to_string(elapsed) + " s";
  return o;
}

// ---- 2: distributed Apriori -------------------------------------------------

Outcome apriori_equality() {
  Outcome o;
  const auto t0 = Clock::now();
  Rng rng(1002);
  const auto tx = gen::transactions(rng, 100, 8, 0.45);
  std::vector<oracle::Items> plain(tx.begin(), tx.end());
  const double n = static_cast<double>(tx.size());

  for (double minsup : {0.1, 0.2, 0.3, 0.5}) {
    for (double minconf : {0.6, 0.8}) {
      const auto tag = "minsup=" + std::to_string(minsup) + " minconf=" + std::to_string(minconf);
      const std::vector<std::vector<Transaction>> single{tx};
      const auto reference = knowledge::drive_apriori(single, minsup, minconf).model;

      const auto frequent = oracle::frequent_itemsets(plain, minsup);
      const auto rules = oracle::rules(frequent, minconf);
      o.expect(reference.itemsets.size() == frequent.size(), tag + ": itemset count differs from brute force");
      for (const auto& f : reference.itemsets) {
        auto it = frequent.find(f.items);
        o.expect(it != frequent.end() && it->second == f.count && f.support == static_cast<double>(it->second) / n,
                 tag + ": itemset differs from brute force");
      }
      o.expect(reference.rules.size() == rules.size(), tag + ": rule count differs from brute force");
      for (std::size_t i = 0; i < std::min(rules.size(), reference.rules.size()); ++i) {
        const auto& a = reference.rules[i];
        const auto& b = rules[i];
        o.expect(a.antecedent == b.antecedent && a.consequent == b.consequent &&
                     a.support == static_cast<double>(b.z_count) / n &&
                     a.confidence == static_cast<double>(b.z_count) / static_cast<double>(b.x_count),
                 tag + ": rule differs from brute force");
      }

      for (std::size_t k : {1, 2, 4}) {
        const auto run = knowledge::drive_apriori(gen::split(tx, k), minsup, minconf).model;
        o.expect(run == reference, tag + " k=" + std::to_string(k) + ": differs from single site");
      }
    }
  }
  const auto elapsed = seconds_since(t0);
  o.expect(elapsed < 5.0, "runtime " + std::to_string(elapsed) + " s");
  if (o.pass) o.detail = "8 threshold pairs x {1,2,4} sites; " + std::to_string(elapsed) + " s";
  return o;
}

// ---- 3: distributed k-means trajectory ------------------------------------

Outcome kmeans_trajectory() {
  Outcome o;
  Rng rng(1003);
  const auto table = gen::gaussian_mixture(rng, 100, {{0, 0}, {6, 6}, {-5, 7}});
  std::vector<oracle::Point> points;
  for (const auto& row : table.rows()) points.push_back({std::get<double>(row[0]), std::get<double>(row[1])});
  const auto parts = horizontal_partition(table, 4, 1003);
  double worst = 0.0;

  for (std::size_t k : {2, 3}) {
    const std::vector<Table> whole{table};
    const auto init = knowledge::first_distinct_rows(whole, k);
    // tol = 0 never triggers early stop, so both runs do all 20 iterations.
    const auto dist = knowledge::distributed_kmeans(parts, k, init, 20, 0.0);
    const auto ref = oracle::lloyd(points, init, 20, 0.0);
    const auto tag = "k=" + std::to_string(k);
    o.expect(dist.trajectory.size() == 20 && ref.trajectory.size() == 20, tag + ": expected 20 iterations");
    for (std::size_t it = 0; it < std::min(dist.trajectory.size(), ref.trajectory.size()); ++it) {
      for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t d = 0; d < 2; ++d) {
          const auto diff = std::abs(dist.trajectory[it][c][d] - ref.trajectory[it][c][d]);
          worst = std::max(worst, diff);
          o.expect(diff <= 1e-9, tag + ": iteration " + std::to_string(it) + " centroid off by " + std::to_string(diff));
        }
      }
    }
    const auto sse_diff = std::abs(dist.model.total_sse - ref.sse);
    o.expect(sse_diff <= 1e-9, tag + ": final sse off by " + std::to_string(sse_diff));
  }
  if (o.pass) {
    std::ostringstream s;
    s << "k in {2,3}, 4 sites, 20 iterations; max coordinate diff " << worst;
    o.detail = s.str();
  }
  return o;
}

// ---- 4: downward closure ----------------------------------------------------

Outcome downward_closure() {
  Outcome o;
  Rng rng(1004);
  std::size_t itemsets = 0, rules = 0;
  for (int db = 0; db < 100; ++db) {
    const auto tx = gen::transactions(rng, 10 + rng.below(90), 3 + rng.below(8), 0.2 + 0.5 * rng.uniform01());
    const double minsup = 0.05 + 0.4 * rng.uniform01();
    const double minconf = rng.uniform01();
    const auto model = knowledge::drive_apriori(gen::split(tx, 1 + rng.below(4)), minsup, minconf).model;
    std::map<Itemset, double> support;
    for (const auto& f : model.itemsets) support[f.items] = f.support;
    const auto tag = "database " + std::to_string(db);
    for (const auto& f : model.itemsets) {
      ++itemsets;
      const auto m = f.items.size();
      for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << m); ++mask) {
        Itemset sub;
        for (std::size_t b = 0; b < m; ++b) {
          if ((mask >> b) & 1) sub.push_back(f.items[b]);
        }
        o.expect(support.count(sub) > 0, tag + ": a subset of a frequent itemset is missing");
      }
    }
    for (const auto& r : model.rules) {
      ++rules;
      auto it = support.find(r.antecedent);
      o.expect(it != support.end() && r.support <= it->second, tag + ": rule support exceeds antecedent support");
      o.expect(r.confidence >= 0.0 && r.confidence <= 1.0, tag + ": confidence outside [0,1]");
    }
  }
  if (o.pass) o.detail = "100 databases, " + std::to_string(itemsets) + " itemsets, " + std::to_string(rules) + " rules";
  return o;
}

// ---- 5: scheduler -----------------------------------------------------------

orchestration::JobResult run_unit_job(const JobSpec& job, const grid::Topology& topo,
                                      const std::map<std::string, std::uint32_t>& capacity,
                                      const std::map<std::string, grid::Tick>& durations) {
  Repository repo;
  for (const auto& n : topo.nodes()) repo.publish_node({n, {"cpu"}, capacity.at(n), {}});
  grid::SimGrid g(topo);
  for (const auto& [n, c] : capacity) g.set_capacity(n, c);
  orchestration::populate_grid(g, repo, *topo.nodes().begin());
  const auto schema = build_schema(job);
  const auto alloc = orchestration::allocate(repo, schema, g);
  return orchestration::run_schedule(schema, alloc, g, {}, [&](const TaskSpec& t, const grid::NodeId&) {
    return orchestration::WorkResult{durations.at(t.id), {}};
  });
}

Outcome scheduler() {
  Outcome o;
  JobSpec diamond;
  diamond.name = "diamond";
  auto task = [](std::string id, std::vector<std::string> deps) {
    TaskSpec t;
    t.id = std::move(id);
    t.algorithm = "auto";
    t.depends_on = std::move(deps);
    return t;
  };
  diamond.tasks = {task("a", {}), task("b", {"a"}), task("c", {"a"}), task("d", {"b", "c"})};
  const std::map<std::string, grid::Tick> unit{{"a", 1}, {"b", 1}, {"c", 1}, {"d", 1}};

  const auto two = run_unit_job(diamond, grid::Topology::complete({"n1", "n2"}, 0), {{"n1", 1}, {"n2", 1}}, unit);
  o.expect(two.makespan == 3, "diamond on 2 nodes: makespan " + std::to_string(two.makespan));
  const auto one = run_unit_job(diamond, grid::Topology::complete({"n1"}, 0), {{"n1", 1}}, unit);
  o.expect(one.makespan == 4, "diamond on 1 node: makespan " + std::to_string(one.makespan));

  Rng rng(1005);
  std::size_t audited_events = 0;
  for (int c = 0; c < 200; ++c) {
    const auto job = gen::random_dag(rng, 1 + rng.below(15), 0.25, "audit");
    const auto topo = gen::connected_topology(rng, 1 + rng.below(6), rng.below(5), 3);
    std::map<std::string, std::uint32_t> capacity;
    for (const auto& n : topo.nodes()) capacity[n] = static_cast<std::uint32_t>(1 + rng.below(3));
    std::map<std::string, grid::Tick> durations;
    for (const auto& t : job.tasks) durations[t.id] = 1 + rng.below(4);
    const auto r = run_unit_job(job, topo, capacity, durations);
    const auto tag = "pair " + std::to_string(c);

    std::map<std::string, grid::Tick> dispatched, completed;
    for (const auto& e : r.events) {
      ++audited_events;
      if (e.phase == orchestration::Phase::dispatched) dispatched[e.task] = e.tick;
      if (e.phase == orchestration::Phase::completed) completed[e.task] = e.tick;
    }
    for (const auto& t : job.tasks) {
      o.expect(dispatched.count(t.id) && completed.count(t.id), tag + ": task " + t.id + " did not complete");
      for (const auto& p : t.depends_on) {
        o.expect(completed.count(p) && dispatched[t.id] >= completed[p],
                 tag + ": " + t.id + " dispatched before " + p + " completed");
      }
    }
    std::map<std::string, std::vector<std::pair<grid::Tick, grid::Tick>>> stays;
    for (const auto& s : r.residency) stays[s.node].push_back({s.start, s.end});
    for (const auto& [node, list] : stays) {
      for (const auto& [start, _] : list) {
        std::uint32_t resident = 0;
        for (const auto& [s, e] : list) resident += s <= start && start < e;
        o.expect(resident <= capacity.at(node), tag + ": capacity exceeded on " + node);
      }
    }
  }
  if (o.pass) o.detail = "diamond 3/4 ticks; 200 pairs audited, " + std::to_string(audited_events) + " events";
  return o;
}

// ---- 6: discovery -----------------------------------------------------------

Outcome discovery() {
  Outcome o;
  Rng rng(1006);
  std::size_t queries = 0;
  for (int c = 0; c < 50; ++c) {
    const auto n = 1 + rng.below(12);
    const auto topo = gen::connected_topology(rng, n, rng.below(2 * n), 4);
    oracle::Graph graph;
    for (const auto& v : topo.nodes()) graph[v];
    for (const auto& e : topo.edges()) {
      graph[e.a].push_back(e.b);
      graph[e.b].push_back(e.a);
    }
    grid::SimGrid g(topo);
    for (const auto& v : topo.nodes()) {
      g.register_entity({"node:" + v, grid::EntityKind::resource, NodeDescriptor{v, {"cpu"}, 1, {}}, v});
    }
    std::size_t diameter = 0;
    for (const auto& v : topo.nodes()) diameter = std::max(diameter, oracle::eccentricity(graph, v));
    for (const auto& origin : topo.nodes()) {
      for (std::size_t ttl = 0; ttl <= diameter + 1; ++ttl) {
        ++queries;
        const auto found =
            g.discover(origin, {grid::EntityKind::resource, {"cpu"}, std::nullopt}, static_cast<std::uint16_t>(ttl));
        std::set<std::string> got;
        for (const auto& e : found) got.insert(e.home_node);
        const auto tag = "topology " + std::to_string(c) + " origin " + origin + " ttl " + std::to_string(ttl);
        o.expect(got == oracle::bfs_within(graph, origin, ttl), tag + ": result differs from BFS");
        o.expect(g.last_discovery().forwards <= n, tag + ": forwards exceed node count");
      }
    }
  }
  if (o.pass) o.detail = "50 topologies, " + std::to_string(queries) + " queries";
  return o;
}

// ---- 7: codec -----------------------------------------------------------------

Outcome codec() {
  Outcome o;
  Rng rng(1007);
  for (int i = 0; i < 1000; ++i) {
    grid::Message m;
    m.type = static_cast<grid::MsgType>(1 + rng.below(5));
    m.correlation_id = rng.next();
    m.ttl = static_cast<std::uint16_t>(rng.below(65536));
    for (auto* s : {&m.src, &m.dst}) {
      for (std::size_t c = rng.below(24); c > 0; --c) s->push_back(static_cast<char>('a' + rng.below(26)));
    }
    for (std::size_t c = rng.below(512); c > 0; --c) m.payload.push_back(static_cast<std::uint8_t>(rng.below(256)));
    o.expect(grid::decode_message(grid::encode_message(m)) == m, "message " + std::to_string(i) + " did not round-trip");
  }

  auto error_of = [](const grid::Bytes& frame) -> std::optional<Errc> {
    try {
      grid::decode_message(frame);
    } catch (const Error& e) {
      return e.code();
    }
    return std::nullopt;
  };
  // DISCOVER from "n1" to "n2", correlation 7, ttl 3, payload "hi".
  const grid::Bytes golden{'A', 'D', 'M', 'R', 0x01, 0x01, 0, 0, 0, 0, 0, 0, 0, 0x07, 0x00, 0x03,
                           0x00, 0x02, 'n', '1', 0x00, 0x02, 'n', '2', 0, 0, 0, 0x02, 'h', 'i'};
  const grid::Message fixed{grid::MsgType::discover, "n1", "n2", 7, 3, {'h', 'i'}};
  o.expect(grid::encode_message(fixed) == golden, "golden frame mismatch");
  o.expect(grid::encode_message(fixed) == grid::encode_message(fixed), "encoding is not stable");

  auto bad_magic = golden;
  bad_magic[0] = 'X';
  auto bad_version = golden;
  bad_version[4] = 0x09;
  const grid::Bytes truncated(golden.begin(), golden.end() - 1);
  o.expect(error_of(bad_magic) == Errc::bad_magic, "bad magic not reported");
  o.expect(error_of(bad_version) == Errc::unsupported_version, "bad version not reported");
  o.expect(error_of(truncated) == Errc::malformed_frame, "truncated payload not reported");
  if (o.pass) o.detail = "1000 round-trips, 3 malformed frames, golden frame stable";
  return o;
}

// ---- 8: end-to-end determinism --------------------------------------------

Outcome end_to_end() {
  Outcome o;
  const std::filesystem::path data = ADMIRE_TEST_DATA;
  support::TempDir tmp;
  auto q = [](const std::filesystem::path& p) { return "'" + p.string() + "'"; };

  auto session = [&](const std::string& name) {
    const auto repo = tmp / name;
    const auto scratch = tmp / (name + "-io");
    std::filesystem::create_directories(scratch);
    auto cli = [&](const std::string& args) {
      const auto r = support::run_cli(scratch, "--repo " + q(repo) + " " + args);
      o.expect(r.status == 0, name + ": '" + args + "' exited " + std::to_string(r.status) + ": " + r.err);
    };
    cli("publish-dataset " + q(data / "blobs.csv") + " --id blobs");
    for (auto n : {"n1", "n2", "n3"}) cli(std::string("publish-node --id ") + n + " --capabilities cpu,mem --capacity 2");
    cli("submit " + q(data / "cluster_job.json") + " --seed 42");
    return repo;
  };
  const auto a = session("first");
  const auto b = session("second");
  const auto results = std::filesystem::path("results") / "blobs-kmeans";
  const auto result_a = support::read(a / results / "result.json");
  o.expect(!result_a.empty(), "result.json missing");
  o.expect(result_a == support::read(b / results / "result.json"), "result.json differs between runs");
  o.expect(support::read(a / results / "events.jsonl") == support::read(b / results / "events.jsonl"),
           "events.jsonl differs between runs");

  const auto report = support::read(a / results / "km.txt");
  const auto job = nlohmann::json::parse(support::read(data / "cluster_job.json"));
  std::size_t k = 0;
  for (const auto& t : job.at("tasks")) {
    if (t.at("id") == "km") k = t.at("params").at("k").get<std::size_t>();
  }
  std::size_t centroid_lines = 0;
  std::optional<double> reported_sse;
  std::istringstream lines(report);
  for (std::string line; std::getline(lines, line);) {
    if (line.rfind("centroid ", 0) == 0) ++centroid_lines;
    if (line.rfind("sse = ", 0) == 0) reported_sse = std::stod(line.substr(6));
  }
  o.expect(centroid_lines == k, "report lists " + std::to_string(centroid_lines) + " centroids, expected " +
                                    std::to_string(k));
  o.expect(reported_sse.has_value(), "report has no sse line");

  const auto stored = nlohmann::json::parse(support::read(a / "knowledge" / "blobs-kmeans_km.json"));
  const auto centroids = stored.at("model").at("centroids").get<std::vector<oracle::Point>>();
  const auto table = load_table(data / "blobs.csv");
  double sse = 0.0;
  for (const auto& row : table.rows()) {
    const oracle::Point p{std::get<double>(row[0]), std::get<double>(row[1])};
    sse += oracle::dist2(p, centroids[oracle::nearest(p, centroids)]);
  }
  if (reported_sse) {
    const auto diff = std::abs(*reported_sse - sse);
    o.expect(diff <= 1e-9, "reported sse off by " + std::to_string(diff));
  }
  if (o.pass) {
    std::ostringstream s;
    s << "byte-identical reruns; " << k << " centroids; sse " << sse;
    o.detail = s.str();
  }
  return o;
}

// ---- 9: preprocessing invariants ------------------------------------------

Outcome preprocessing_invariants() {
  Outcome o;
  Rng rng(1009);
  for (int c = 0; c < 200; ++c) {
    const auto rows = 2 + rng.below(60);
    const double scale = std::pow(10.0, static_cast<double>(rng.below(7)) - 3.0);
    const double offset = (rng.uniform01() - 0.5) * 1000.0;
    std::vector<Row> data;
    for (std::size_t r = 0; r < rows; ++r) data.push_back({offset + scale * gen::normal(rng)});
    // Two distinct endpoints guarantee a non-constant column.
    data[0][0] = offset - scale;
    data[1][0] = offset + scale;
    const Table t(Schema{{"v", ColumnType::num}}, data);
    const auto tag = "column " + std::to_string(c);

    const auto z = preprocessing::zscore(t, {"v"});
    double mean = 0.0;
    for (const auto& row : z.rows()) mean += std::get<double>(row[0]);
    mean /= static_cast<double>(rows);
    double var = 0.0;
    for (const auto& row : z.rows()) var += std::pow(std::get<double>(row[0]) - mean, 2);
    var /= static_cast<double>(rows);
    o.expect(std::abs(mean) <= 1e-9, tag + ": zscore mean " + std::to_string(mean));
    o.expect(std::abs(var - 1.0) <= 1e-9, tag + ": zscore variance " + std::to_string(var));

    const auto m = preprocessing::minmax(t, {"v"});
    bool zero = false, one = false, inside = true;
    for (const auto& row : m.rows()) {
      const auto v = std::get<double>(row[0]);
      zero |= v == 0.0;
      one |= v == 1.0;
      inside &= v >= 0.0 && v <= 1.0;
    }
    o.expect(inside, tag + ": minmax value outside [0,1]");
    o.expect(zero && one, tag + ": minmax endpoints not attained");
  }

  auto row_multiset = [](const Table& t) {
    std::vector<std::string> out;
    std::istringstream in(format_table(t));
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    while (std::getline(in, line)) out.push_back(line);
    std::sort(out.begin(), out.end());
    return out;
  };
  for (int c = 0; c < 100; ++c) {
    const auto t = gen::numeric_table(rng, rng.below(80), 1 + rng.below(4));
    const auto k = 1 + rng.below(10);
    const auto parts = horizontal_partition(t, k, rng.next());
    const auto joined = concatenate(parts);
    const auto tag = "partition " + std::to_string(c);
    o.expect(row_multiset_digest(joined) == row_multiset_digest(t), tag + ": digest differs");
    o.expect(row_multiset(joined) == row_multiset(t), tag + ": row multiset differs");
    std::size_t lo = t.row_count(), hi = 0;
    for (const auto& p : parts) {
      lo = std::min(lo, p.row_count());
      hi = std::max(hi, p.row_count());
    }
    o.expect(parts.size() == k && hi - lo <= 1, tag + ": unbalanced parts");
  }
  if (o.pass) o.detail = "200 columns zscore/minmax, 100 partitions sound";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"distributed naive bayes equals centralized", bayes_equality},
      {"distributed apriori equals centralized and brute force", apriori_equality},
      {"distributed k-means trajectory", kmeans_trajectory},
      {"downward closure", downward_closure},
      {"scheduler makespan and safety", scheduler},
      {"discovery equals bfs within ttl", discovery},
      {"codec round-trip and malformed frames", codec},
      {"end-to-end determinism", end_to_end},
      {"preprocessing invariants", preprocessing_invariants},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::cout << "criterion " << i + 1 << " " << (o.pass ? "PASS" : "FAIL") << " " << criteria[i].first << ": "
              << o.detail << "\n";
  }
  return failed ? 1 : 0;
}
