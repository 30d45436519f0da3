#include <doctest.h>

#include <cmath>

#include "admire/error.hpp"
#include "admire/kernels.hpp"
#include "admire/local_mining.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace admire;
using namespace admire::mining;

namespace {

Table column_table(std::vector<double> xs) {
  std::vector<Row> rows;
  for (double x : xs) rows.push_back({x});
  return Table(Schema{{"x", ColumnType::num}}, std::move(rows));
}

std::vector<oracle::Point> points_of(const Table& t) {
  std::vector<oracle::Point> out;
  for (const auto& r : t.rows()) {
    oracle::Point p;
    for (const auto& c : r) p.push_back(std::get<double>(c));
    out.push_back(p);
  }
  return out;
}

}  // namespace

TEST_SUITE("local_mining") {

TEST_CASE("kmeans assignment basics") {
  const std::vector<Point> c{{0.0}, {1.0}};
  const auto s = kmeans_assign_and_sum(column_table({0.0, 1.0}), c);
  CHECK(s.k == 2);
  CHECK(s.clusters[0].vector_sum == std::vector<double>{0.0});
  CHECK(s.clusters[0].count == 1);
  CHECK(s.clusters[1].vector_sum == std::vector<double>{1.0});
  CHECK(s.clusters[1].count == 1);

  const auto tie = kmeans_assign_and_sum(column_table({0.5}), c);
  CHECK(tie.clusters[0].count == 1);
  CHECK(tie.clusters[1].count == 0);
  CHECK(tie.clusters[0].sse_partial == 0.25);

  CHECK_THROWS_AS(kmeans_assign_and_sum(column_table({1.0}), std::vector<Point>{{0.0, 1.0}}), Error);
  CHECK_THROWS_AS(kmeans_assign_and_sum(column_table({1.0}), std::vector<Point>{}), Error);
  CHECK_THROWS_AS(kmeans_assign_and_sum(parse_table("c\ncat\na\n"), c), Error);
  CHECK_THROWS_AS(kmeans_assign_and_sum(parse_table("x\nnum\n?\n"), c), Error);
}

TEST_CASE("kmeans sums match brute-force assignment") {
  Rng rng(31);
  for (int c = 0; c < 20; ++c) {
    const auto t = gen::numeric_table(rng, 50, 2);
    std::vector<Point> centroids;
    for (int i = 0; i < 3; ++i) centroids.push_back({(rng.uniform01() - 0.5) * 10, (rng.uniform01() - 0.5) * 10});
    const auto s = kmeans_assign_and_sum(t, centroids);
    std::vector<oracle::Point> sums(3, oracle::Point(2, 0.0));
    std::vector<std::uint64_t> counts(3, 0);
    std::vector<double> sse(3, 0.0);
    double col0 = 0.0;
    for (const auto& p : points_of(t)) {
      const auto n = oracle::nearest(p, centroids);
      sums[n][0] += p[0];
      sums[n][1] += p[1];
      ++counts[n];
      sse[n] += oracle::dist2(p, centroids[n]);
      col0 += p[0];
    }
    double total0 = 0.0;
    std::uint64_t total = 0;
    for (int i = 0; i < 3; ++i) {
      CHECK(s.clusters[i].count == counts[i]);
      CHECK(s.clusters[i].vector_sum == sums[i]);
      CHECK(s.clusters[i].sse_partial == doctest::Approx(sse[i]).epsilon(1e-12));
      total0 += s.clusters[i].vector_sum[0];
      total += s.clusters[i].count;
    }
    CHECK(total == 50);
    CHECK(std::abs(total0 - col0) < 1e-9);
  }
}

TEST_CASE("serial and parallel kernels agree bit for bit") {
  Rng rng(32);
  const auto t = gen::numeric_table(rng, 5000, 4);
  const auto points = to_dense(t);
  kernels::DenseMatrix centroids{7, 4, {}};
  for (std::size_t i = 0; i < 28; ++i) centroids.values.push_back((rng.uniform01() - 0.5) * 10);
  std::vector<std::uint32_t> la(5000), lb(5000);
  std::vector<double> da(5000), db(5000);
  kernels::serial::assign_nearest(points, centroids, la, da);
  kernels::omp::assign_nearest(points, centroids, lb, db);
  CHECK(la == lb);
  CHECK(da == db);

  std::vector<kernels::EncodedSet> tx, cand;
  for (int i = 0; i < 3000; ++i) {
    kernels::EncodedSet s;
    for (std::uint32_t j = 0; j < 12; ++j) {
      if (rng.uniform01() < 0.4) s.push_back(j);
    }
    tx.push_back(s);
  }
  for (std::uint32_t a = 0; a < 12; ++a) {
    for (std::uint32_t b = a + 1; b < 12; ++b) cand.push_back({a, b});
  }
  cand.push_back({});
  std::vector<std::uint64_t> ca(cand.size()), cb(cand.size());
  kernels::serial::count_subsets(tx, cand, ca);
  kernels::omp::count_subsets(tx, cand, cb);
  CHECK(ca == cb);
  CHECK(ca.back() == tx.size());

  const std::vector<Point> c{{0.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 1.0}, {-2.0, 1.0, 0.0, 3.0}};
  CHECK(kmeans_assign_and_sum(t, c, kernels::Policy::serial) == kmeans_assign_and_sum(t, c, kernels::Policy::parallel));
}

TEST_CASE("apriori counting") {
  const std::vector<Transaction> tx{{"A", "B"}, {"A", "C"}, {"A", "B", "C"}, {"B"}};
  const std::vector<Itemset> cand{{"A", "B"}, {}, {"Z"}};
  const auto counts = apriori_count(tx, cand);
  CHECK(counts.transaction_count == 4);
  CHECK(counts.counts.at({"A", "B"}) == 2);
  CHECK(counts.counts.at({}) == 4);
  CHECK(counts.counts.at({"Z"}) == 0);
  CHECK(apriori_count(tx, cand, kernels::Policy::serial) == counts);
}

TEST_CASE("transactions from a table") {
  const auto t = parse_table("a,x,b\ncat,num,cat\nu,1,v\n?,2,w\n");
  const auto tx = transactions_from_table(t);
  REQUIRE(tx.size() == 2);
  CHECK(tx[0] == Transaction{make_item("a", "u"), make_item("b", "v")});
  CHECK(tx[1] == Transaction{make_item("b", "w")});
  CHECK(make_item("a", "u") == "a=u");
}

TEST_CASE("candidate generation") {
  CHECK(apriori_gen(std::vector<Itemset>{{"A"}, {"B"}, {"C"}}) == std::vector<Itemset>{{"A", "B"}, {"A", "C"}, {"B", "C"}});
  CHECK(apriori_gen(std::vector<Itemset>{{"A", "B"}, {"A", "C"}}).empty());
  CHECK(apriori_gen(std::vector<Itemset>{{"A", "B"}, {"A", "C"}, {"B", "C"}}) == std::vector<Itemset>{{"A", "B", "C"}});
  CHECK(apriori_gen(std::vector<Itemset>{}).empty());
  CHECK_THROWS_AS(apriori_gen(std::vector<Itemset>{{"A"}, {"A", "B"}}), Error);
}

TEST_CASE("candidate generation equals filtered enumeration") {
  Rng rng(33);
  const std::vector<std::string> universe{"a", "b", "c", "d", "e", "f", "g"};
  for (int c = 0; c < 60; ++c) {
    const std::size_t k = 1 + rng.below(3);
    std::set<Itemset> frequent;
    for (std::uint32_t mask = 0; mask < (1u << universe.size()); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) != k || rng.uniform01() > 0.5) continue;
      Itemset s;
      for (std::size_t b = 0; b < universe.size(); ++b) {
        if (mask & (1u << b)) s.push_back(universe[b]);
      }
      frequent.insert(s);
    }
    std::vector<Itemset> expected;
    for (std::uint32_t mask = 0; mask < (1u << universe.size()); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) != k + 1) continue;
      Itemset s;
      for (std::size_t b = 0; b < universe.size(); ++b) {
        if (mask & (1u << b)) s.push_back(universe[b]);
      }
      bool all = true;
      for (std::size_t drop = 0; drop < s.size(); ++drop) {
        auto sub = s;
        sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
        all = all && frequent.count(sub);
      }
      if (all) expected.push_back(s);
    }
    std::sort(expected.begin(), expected.end());
    CHECK(apriori_gen(std::vector<Itemset>(frequent.begin(), frequent.end())) == expected);
  }
}

TEST_CASE("bayes fit") {
  const auto t = parse_table("f,x,y\ncat,num,cat\nu,1,+\nv,?,-\n");
  const auto b = bayes_fit(t, "y");
  CHECK(b.class_counts == std::map<std::string, std::uint64_t>{{"+", 1}, {"-", 1}});
  CHECK(b.total() == 2);
  CHECK(b.categorical.at({"+", "f", "u"}) == 1);
  CHECK(b.numeric.at({"+", "x"}).count == 1);
  CHECK_FALSE(b.numeric.count({"-", "x"}));
  CHECK_THROWS_AS(bayes_fit(t, "nope"), Error);
  CHECK_THROWS_AS(bayes_fit(parse_table("f,y\ncat,cat\nu,?\n"), "y"), Error);
  CHECK_THROWS_AS(bayes_fit(t, "x"), Error);
}

TEST_CASE("bayes counts equal a brute-force tally") {
  Rng rng(34);
  for (int c = 0; c < 20; ++c) {
    const auto t = gen::categorical_table(rng, 60, 3, 2 + rng.below(2));
    const auto b = bayes_fit(t, "label");
    std::map<std::string, std::uint64_t> classes;
    std::map<std::tuple<std::string, std::string, std::string>, std::uint64_t> cells;
    for (const auto& r : t.rows()) {
      const auto& y = std::get<std::string>(r[3]);
      ++classes[y];
      for (std::size_t f = 0; f < 3; ++f) ++cells[{y, gen::id("f", f), std::get<std::string>(r[f])}];
    }
    CHECK(b.class_counts == classes);
    CHECK(b.categorical == cells);
    CHECK(b.total() == t.row_count());
  }
}

TEST_CASE("bayes predict") {
  const auto one = bayes_fit(parse_table("f,y\ncat,cat\nu,a\nv,a\n"), "y");
  const Schema s{{"f", ColumnType::cat}, {"y", ColumnType::cat}};
  CHECK(bayes_predict(one, s, {std::string("v"), Missing{}}).label == "a");
  CHECK(bayes_predict(one, s, {std::string("never"), Missing{}}).label == "a");

  const auto sym = bayes_fit(parse_table("f,y\ncat,cat\nu,b\nu,a\n"), "y");
  CHECK(bayes_predict(sym, s, {std::string("u"), Missing{}}).label == "a");
  CHECK_THROWS_AS(bayes_predict(BayesCounts{}, s, {std::string("u"), Missing{}}), Error);
}

TEST_CASE("bayes scores match the smoothed formula by hand") {
  // f in {u, v}; class + : u, u, v ; class - : v.
  const auto b = bayes_fit(parse_table("f,y\ncat,cat\nu,+\nu,+\nv,+\nv,-\n"), "y");
  const Schema s{{"f", ColumnType::cat}, {"y", ColumnType::cat}};
  const auto p = bayes_predict(b, s, {std::string("u"), Missing{}});
  // P(+) = 3/4, P(u|+) = (2+1)/(3+2); P(-) = 1/4, P(u|-) = (0+1)/(1+2).
  CHECK(p.log_scores.at("+") == doctest::Approx(std::log(0.75) + std::log(3.0 / 5.0)).epsilon(1e-12));
  CHECK(p.log_scores.at("-") == doctest::Approx(std::log(0.25) + std::log(1.0 / 3.0)).epsilon(1e-12));
  CHECK(p.label == "+");
}

TEST_CASE("gaussian likelihood with variance floor") {
  const auto b = bayes_fit(parse_table("x,y\nnum,cat\n1,a\n1,a\n5,b\n7,b\n"), "y");
  const Schema s{{"x", ColumnType::num}, {"y", ColumnType::cat}};
  const auto p = bayes_predict(b, s, {1.0, Missing{}});
  CHECK(p.label == "a");
  // Class a has zero variance; floored at 1e-9 the density at the mean is
  // 1/sqrt(2*pi*1e-9).
  CHECK(p.log_scores.at("a") == doctest::Approx(std::log(0.5) - 0.5 * std::log(2 * M_PI * 1e-9)).epsilon(1e-9));
  // Class b: mean 6, population variance 1.
  CHECK(p.log_scores.at("b") ==
        doctest::Approx(std::log(0.5) - 0.5 * std::log(2 * M_PI) - 0.5 * 25.0).epsilon(1e-9));
}

}
