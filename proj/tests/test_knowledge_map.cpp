#include <doctest.h>

#include <cmath>

#include "admire/error.hpp"
#include "admire/knowledge_map.hpp"
#include "admire/serialization.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace admire;
using namespace admire::knowledge;

namespace {

CentroidSums one_cluster(double sum, std::uint64_t count, double sse = 0.0) {
  return CentroidSums{1, 1, {ClusterSums{{sum}, count, sse}}};
}

Table column_table(std::vector<double> xs) {
  std::vector<Row> rows;
  for (double x : xs) rows.push_back({x});
  return Table(Schema{{"x", ColumnType::num}}, std::move(rows));
}

std::vector<oracle::Point> points_of(const Table& t) {
  std::vector<oracle::Point> out;
  for (const auto& r : t.rows()) out.push_back({std::get<double>(r[0]), std::get<double>(r[1])});
  return out;
}

std::vector<Transaction> abc() { return {{"A", "B"}, {"A", "C"}, {"A", "B", "C"}, {"B"}}; }

}  // namespace

TEST_SUITE("knowledge_map") {

TEST_CASE("merge kmeans partials") {
  const std::vector<mining::Point> prev{{7.0}};
  const auto m = merge_kmeans({{0, one_cluster(3, 2, 1.0)}, {1, one_cluster(5, 2, 0.5)}}, prev);
  CHECK(m.centroids == std::vector<mining::Point>{{2.0}});
  CHECK(m.counts == std::vector<std::uint64_t>{4});
  CHECK(m.total_sse == 1.5);
  CHECK(merge_kmeans({{0, one_cluster(9, 3)}}, prev).centroids == std::vector<mining::Point>{{3.0}});
  CHECK(merge_kmeans({{0, one_cluster(0, 0)}}, prev).centroids == prev);
  CHECK_THROWS_AS(merge_kmeans({{0, one_cluster(1, 1)}, {1, CentroidSums{2, 1, {{{1.0}, 1, 0}, {{1.0}, 1, 0}}}}}, prev),
                  Error);
}

TEST_CASE("merge order does not matter") {
  Rng rng(41);
  std::vector<SitePartial<CentroidSums>> parts;
  for (std::size_t s = 0; s < 6; ++s) {
    CentroidSums c{2, 2, {}};
    for (int i = 0; i < 2; ++i) {
      c.clusters.push_back({{rng.uniform01() * 1e3, rng.uniform01() * 1e-3}, rng.below(9), rng.uniform01()});
    }
    parts.push_back({s, c});
  }
  const std::vector<mining::Point> prev{{0, 0}, {1, 1}};
  const auto base = merge_kmeans(parts, prev);
  for (int i = 0; i < 10; ++i) {
    auto shuffled = parts;
    const auto perm = rng.permutation(shuffled.size());
    for (std::size_t j = 0; j < perm.size(); ++j) shuffled[j] = parts[perm[j]];
    const auto m = merge_kmeans(shuffled, prev);
    CHECK(m.centroids == base.centroids);
    CHECK(m.total_sse == base.total_sse);
  }
}

TEST_CASE("distributed kmeans by hand") {
  const auto t = column_table({0, 1, 9, 10});
  const std::vector<mining::Point> init{{0.0}, {9.0}};
  const auto run = distributed_kmeans(std::vector<Table>{t}, 2, init, 20, 1e-9);
  CHECK(run.model.centroids == std::vector<std::vector<double>>{{0.5}, {9.5}});
  CHECK(run.model.counts == std::vector<std::uint64_t>{2, 2});
  CHECK(run.model.total_sse == 1.0);

  const auto fix = distributed_kmeans(std::vector<Table>{t}, 4, std::vector<mining::Point>{{0}, {1}, {9}, {10}}, 5, 0);
  CHECK(fix.model.total_sse == 0.0);

  CHECK_THROWS_AS(distributed_kmeans(std::vector<Table>{}, 2, init, 5, 0), Error);
  CHECK_THROWS_AS(distributed_kmeans(std::vector<Table>{t}, 3, init, 5, 0), Error);
}

TEST_CASE("first distinct rows") {
  const auto t = column_table({3, 3, 1, 3, 2});
  const auto parts = horizontal_partition(t, 1, 0);
  CHECK(first_distinct_rows(std::vector<Table>{t}, 3) == std::vector<mining::Point>{{3}, {1}, {2}});
  CHECK_THROWS_AS(first_distinct_rows(std::vector<Table>{t}, 4), Error);
}

TEST_CASE("distributed kmeans follows centralized Lloyd") {
  Rng rng(42);
  for (int c = 0; c < 10; ++c) {
    const auto t = gen::gaussian_mixture(rng, 120, {{0, 0}, {6, 1}, {2, 7}});
    const std::size_t k = 2 + rng.below(3);
    const auto init = first_distinct_rows(std::vector<Table>{t}, k);
    const auto run = distributed_kmeans(horizontal_partition(t, 1 + rng.below(6), rng.next()), k, init, 20, 0.0);
    const auto ref = oracle::lloyd(points_of(t), init, 20, 0.0);
    REQUIRE(run.trajectory.size() == ref.trajectory.size());
    for (std::size_t it = 0; it < ref.trajectory.size(); ++it) {
      for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t d = 0; d < 2; ++d) CHECK(std::abs(run.trajectory[it][j][d] - ref.trajectory[it][j][d]) < 1e-9);
      }
    }
    CHECK(std::abs(run.model.total_sse - ref.sse) < 1e-9);
    CHECK(run.model.counts == ref.counts);
  }
}

TEST_CASE("apriori on the four-transaction example") {
  const auto tx = abc();
  const auto run = drive_apriori(std::vector<std::vector<Transaction>>{tx}, 0.5, 1.0);
  std::map<Itemset, double> got;
  for (const auto& f : run.model.itemsets) got[f.items] = f.support;
  CHECK(got == std::map<Itemset, double>{{{"A"}, 0.75}, {{"B"}, 0.75}, {{"C"}, 0.5}, {{"A", "B"}, 0.5}, {{"A", "C"}, 0.5}});
  bool c_to_a = false;
  for (const auto& r : run.model.rules) {
    c_to_a = c_to_a || (r.antecedent == Itemset{"C"} && r.consequent == Itemset{"A"} && r.confidence == 1.0);
  }
  CHECK(c_to_a);
  const auto split = drive_apriori(gen::split(tx, 2), 0.5, 1.0);
  CHECK(split.model == run.model);

  CHECK_THROWS_AS(drive_apriori(std::vector<std::vector<Transaction>>{tx}, 0.0, 0.5), Error);
  CHECK_THROWS_AS(drive_apriori(std::vector<std::vector<Transaction>>{tx}, 0.5, 1.5), Error);
}

TEST_CASE("apriori matches brute-force enumeration") {
  Rng rng(43);
  for (int c = 0; c < 15; ++c) {
    const auto tx = gen::transactions(rng, 60, 6, 0.45);
    const double minsup = 0.1 + 0.1 * static_cast<double>(rng.below(4));
    const double minconf = 0.5 + 0.1 * static_cast<double>(rng.below(4));
    const auto run = drive_apriori(gen::split(tx, 1 + rng.below(4)), minsup, minconf);
    const auto freq = oracle::frequent_itemsets(tx, minsup);
    std::map<Itemset, std::uint64_t> got;
    for (const auto& f : run.model.itemsets) got[f.items] = f.count;
    CHECK(got == freq);
    const auto rules = oracle::rules(freq, minconf);
    REQUIRE(run.model.rules.size() == rules.size());
    for (std::size_t i = 0; i < rules.size(); ++i) {
      CHECK(run.model.rules[i].antecedent == rules[i].antecedent);
      CHECK(run.model.rules[i].consequent == rules[i].consequent);
    }
  }
}

TEST_CASE("bayes merging") {
  const auto a = mining::bayes_fit(parse_table("y\ncat\n+\n-\n"), "y");
  const auto b = mining::bayes_fit(parse_table("y\ncat\n+\n+\n"), "y");
  const auto m = merge_bayes({{0, a}, {1, b}});
  CHECK(m.class_counts == std::map<std::string, std::uint64_t>{{"+", 3}, {"-", 1}});
  CHECK(merge_bayes({{0, a}}) == a);
  const auto other = mining::bayes_fit(parse_table("f,y\ncat,cat\nu,+\n"), "y");
  CHECK_THROWS_AS(merge_bayes({{0, a}, {1, other}}), Error);
}

TEST_CASE("distributed bayes equals centralized fit") {
  Rng rng(44);
  for (int c = 0; c < 10; ++c) {
    auto t = gen::categorical_table(rng, 80, 3, 2);
    std::vector<Row> rows = t.rows();
    Schema schema = t.schema();
    schema.insert(schema.begin(), Column{"z", ColumnType::num});
    for (auto& r : rows) r.insert(r.begin(), Cell{static_cast<double>(rng.below(50))});
    const Table mixed(schema, rows);
    const auto central = mining::bayes_fit(mixed, "label");
    for (std::size_t k : {1u, 2u, 3u, 8u}) {
      CHECK(distributed_bayes(horizontal_partition(mixed, k, rng.next()), "label") == central);
    }
  }
}

TEST_CASE("strategy selection") {
  Repository repo;
  const auto nums = summarize(parse_table("x,y\nnum,num\n1,2\n"));
  const auto mixed = summarize(parse_table("x,c\nnum,cat\n1,a\n"), std::string("c"));
  CHECK_THROWS_AS(select_strategy(TaskKind::clustering, nums, repo), Error);
  repo.publish_algorithm({"km-b", TaskKind::clustering, {}, ""});
  CHECK(select_strategy(TaskKind::clustering, nums, repo).id == "km-b");
  repo.publish_algorithm({"km-a", TaskKind::clustering, {}, ""});
  CHECK(select_strategy(TaskKind::clustering, nums, repo).id == "km-a");
  try {
    select_strategy(TaskKind::clustering, mixed, repo);
    FAIL("expected data-incompatible");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::data_incompatible);
  }
  repo.publish_algorithm({"ap", TaskKind::association_rules, {}, ""});
  repo.publish_algorithm({"nb", TaskKind::classification, {}, ""});
  CHECK_THROWS_AS(select_strategy(TaskKind::association_rules, nums, repo), Error);
  CHECK(select_strategy(TaskKind::association_rules, mixed, repo).id == "ap");
  CHECK(select_strategy(TaskKind::classification, mixed, repo).id == "nb");
  CHECK_THROWS_AS(select_strategy(TaskKind::classification, summarize(parse_table("x,c\nnum,cat\n1,a\n"), std::string("x")), repo),
                  Error);
}

TEST_CASE("emitted knowledge is stored and serializes to a fixpoint") {
  Repository repo;
  const auto run = drive_apriori(std::vector<std::vector<Transaction>>{abc()}, 0.25, 0.5);
  const auto e = emit_knowledge(repo, "job", "rules", run.model, {{"rules", 3.0}, {"pi", M_PI}});
  CHECK(*repo.knowledge("job", "rules") == e);
  CHECK_THROWS_AS(emit_knowledge(repo, "job", "rules", run.model, {}), Error);
  CHECK_THROWS_AS(emit_knowledge(repo, "job", "bad", ClusteringModel{{{1.0}}, 0, {}}, {}), Error);

  nlohmann::json j;
  to_json(j, e);
  const auto text = dump_document(j);
  KnowledgeEntry back;
  from_json(nlohmann::json::parse(text), back);
  CHECK(back == e);
  nlohmann::json again;
  to_json(again, back);
  CHECK(dump_document(again) == text);
}

}
