#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "support.hpp"

#include "graphweave/error.hpp"
#include "graphweave/metrics.hpp"
#include "graphweave/samplers.hpp"

using namespace graphweave;

namespace {

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

struct Census {
  long triangles = 0;
  long connected4 = 0;
  long cycles4 = 0;
  long cliques4 = 0;
};

/// Induced subgraph census over every 3- and 4-subset.
Census brute_census(const Graph& g) {
  const int n = g.num_nodes();
  Census c;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int x = b + 1; x < n; ++x) {
        if (g.has_edge(a, b) && g.has_edge(b, x) && g.has_edge(a, x)) ++c.triangles;
        for (int y = x + 1; y < n; ++y) {
          const int s[4] = {a, b, x, y};
          int deg[4] = {0, 0, 0, 0}, edges = 0;
          for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
              if (g.has_edge(s[i], s[j])) {
                ++deg[i];
                ++deg[j];
                ++edges;
              }
          // Four nodes with at least three edges are connected unless one is isolated.
          const bool isolated = std::count(deg, deg + 4, 0) > 0;
          if (edges >= 3 && !isolated) ++c.connected4;
          if (edges == 4 && std::all_of(deg, deg + 4, [](int d) { return d == 2; })) ++c.cycles4;
          if (edges == 6) ++c.cliques4;
        }
      }
  return c;
}

std::int64_t orbit_total(const Graph& g, int lo, int hi) {
  std::int64_t total = 0;
  for (const auto& row : orbit_counts(g))
    for (int o = lo; o <= hi; ++o) total += row[static_cast<std::size_t>(o)];
  return total;
}

}  // namespace

TEST_CASE("metric names") {
  CHECK(all_metrics().size() == 9);
  for (Metric m : all_metrics()) CHECK(parse_metric(to_string(m)) == m);
  CHECK_THROWS_AS(parse_metric("diameter"), PreconditionError);
}

TEST_CASE("clustering, pagerank and modularity oracles") {
  CHECK(local_clustering(testing::triangle()) == std::vector<double>{1.0, 1.0, 1.0});
  CHECK(local_clustering(testing::path(3)) == std::vector<double>{0.0, 0.0, 0.0});

  const auto pr = pagerank(testing::cycle(9));
  for (double x : pr) CHECK(std::abs(x - 1.0 / 9.0) <= 1e-9);
  const auto star = pagerank(Graph(4, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}}));
  CHECK(std::accumulate(star.begin(), star.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(star[0] > star[1]);

  const std::vector<char> side{0, 0, 0, 1, 1, 1};
  CHECK(modularity(testing::two_triangles_bridged(), side) == doctest::Approx(5.0 / 14.0).epsilon(1e-12));
  CHECK(cut_size(testing::two_triangles_bridged(), side) == 1);
  CHECK(modularity(Graph(3, {}), std::vector<char>{0, 1, 0}) == 0.0);
}

TEST_CASE("flow and resistance oracles") {
  CHECK(max_flow(testing::path(3), 0, 2) == 1);
  CHECK(max_flow(testing::cycle(6), 0, 3) == 2);
  CHECK(max_flow(testing::complete(5), 1, 4) == 4);
  CHECK(max_flow(Graph(4, std::vector<Edge>{{0, 1}, {2, 3}}), 0, 3) == 0);

  for (int k = 2; k <= 6; ++k) {
    const std::vector<std::pair<int, int>> ends{{0, k - 1}};
    CHECK(*effective_resistances(testing::path(k), ends)[0] == doctest::Approx(k - 1.0).epsilon(1e-12));
  }
  const std::vector<std::pair<int, int>> st{{0, 2}};
  CHECK(*effective_resistances(testing::cycle(4), st)[0] == doctest::Approx(1.0).epsilon(1e-12));

  const Graph split(5, std::vector<Edge>{{0, 1}, {1, 2}, {3, 4}});
  const std::vector<std::pair<int, int>> pairs{{0, 2}, {0, 3}, {3, 4}};
  const auto r = effective_resistances(split, pairs);
  CHECK(*r[0] == doctest::Approx(2.0));
  CHECK_FALSE(r[1].has_value());
  CHECK(*r[2] == doctest::Approx(1.0));
  const auto sv = statistic(split, Metric::Resistance, 3);
  CHECK(sv.values.size() + sv.excluded == static_cast<std::size_t>(kNumPairs));
  CHECK(sv.excluded > 0);
}

TEST_CASE("orbit counts on hand-counted graphs") {
  const auto k4 = orbit_counts(testing::complete(4));
  for (const auto& row : k4) {
    CHECK(row[0] == 3);
    CHECK(row[3] == 3);
    CHECK(row[14] == 1);
    CHECK(std::accumulate(row.begin(), row.end(), std::int64_t{0}) == 7);
  }
  const auto c4 = orbit_counts(testing::cycle(4));
  for (const auto& row : c4) {
    CHECK(row[0] == 2);
    CHECK(row[1] == 2);
    CHECK(row[2] == 1);
    CHECK(row[8] == 1);
    CHECK(std::accumulate(row.begin(), row.end(), std::int64_t{0}) == 6);
  }
  const auto star = orbit_counts(Graph(4, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}}));
  CHECK(star[0][7] == 1);
  CHECK(star[0][2] == 3);
  CHECK(star[1][6] == 1);
  CHECK(star[1][1] == 2);
}

TEST_CASE("orbit counts agree with a subgraph census") {
  for (std::uint64_t s = 0; s < 8; ++s) {
    const Graph g = testing::random_graph(14, 0.3, s);
    const Census c = brute_census(g);
    CHECK(orbit_total(g, 3, 3) == 3 * c.triangles);
    CHECK(orbit_total(g, 4, 14) == 4 * c.connected4);
    CHECK(orbit_total(g, 8, 8) == 4 * c.cycles4);
    CHECK(orbit_total(g, 14, 14) == 4 * c.cliques4);
    CHECK(orbit_total(g, 0, 0) == 2 * static_cast<std::int64_t>(g.num_edges()));
  }
}

TEST_CASE("wasserstein distance") {
  const std::vector<double> a{0, 1}, b{1, 2}, c{0}, d{0, 1};
  CHECK(wasserstein1(a, a) == 0.0);
  CHECK(wasserstein1(a, b) == doctest::Approx(1.0));
  CHECK(wasserstein1(c, d) == doctest::Approx(0.5));
  CHECK(wasserstein1(d, c) == doctest::Approx(0.5));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_int_distribution<int> len(1, 12);
  auto draw = [&] {
    std::vector<double> v(static_cast<std::size_t>(len(rng)));
    for (double& x : v) x = u(rng);
    return v;
  };
  for (int t = 0; t < 100; ++t) {
    const auto x = draw(), y = draw(), z = draw();
    CHECK(wasserstein1(x, y) == doctest::Approx(wasserstein1(y, x)).epsilon(1e-12));
    CHECK(wasserstein1(x, z) <= wasserstein1(x, y) + wasserstein1(y, z) + 1e-9);
    std::vector<double> shuffled = x;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(wasserstein1(x, shuffled) <= 1e-12);
  }
}

TEST_CASE("relative error") {
  std::vector<Graph> test;
  for (std::uint64_t s = 0; s < 6; ++s) test.push_back(sample_sbm(20, {0.5, 0.5}, 0.5, 0.1, s));

  for (Metric m : all_metrics()) {
    INFO(to_string(m));
    const auto self = relative_error(test, test, m, 4);
    REQUIRE(self.has_value());
    CHECK(*self == 0.0);
    std::vector<Graph> doubled = test;
    doubled.insert(doubled.end(), test.begin(), test.end());
    CHECK(*relative_error(doubled, test, m, 4) == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
  }

  // Degree W1: P5-C5 = 0.4, K5-P5 = 2.4, K5-C5 = 2, so (2 * 4.4 / 0.8) * 2 / 2 - 1 = 10.
  const std::vector<Graph> pair{testing::path(5), testing::cycle(5)};
  const std::vector<Graph> far{testing::complete(5), testing::complete(5)};
  CHECK(*relative_error(far, pair, Metric::Degree, 1) == doctest::Approx(10.0).epsilon(1e-12));
  // Copies of one test graph balance the cross sum exactly.
  const std::vector<Graph> firsts{testing::path(5), testing::path(5)};
  CHECK(*relative_error(firsts, pair, Metric::Degree, 1) == doctest::Approx(0.0).scale(1.0));

  const std::vector<Graph> same{testing::cycle(6), testing::cycle(6)};
  CHECK_FALSE(relative_error(same, same, Metric::Degree, 1).has_value());
  CHECK_FALSE(relative_error(std::vector<std::vector<double>>{{1.0}}, std::vector<std::vector<double>>{{}}).has_value());
}

TEST_CASE("statistics are deterministic and relabeling invariant") {
  const Graph g = sample_barabasi_albert(30, 2, 3);
  std::vector<int> perm(30);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(1));
  const Graph h = relabel(g, perm);
  for (Metric m : all_metrics()) {
    INFO(to_string(m));
    const auto a = statistic(g, m, 9);
    CHECK(a.values == statistic(g, m, 9).values);
    for (double x : a.values) CHECK(std::isfinite(x));
    if (m == Metric::Degree || m == Metric::Clustering || m == Metric::Orbit) {
      CHECK(sorted(a.values) == sorted(statistic(h, m, 9).values));
    }
    if (m == Metric::PageRank) {
      const auto x = sorted(a.values), y = sorted(statistic(h, m, 9).values);
      for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i] == doctest::Approx(y[i]).epsilon(1e-9));
    }
  }
  CHECK(statistic(g, Metric::Cut, 1).values.size() == static_cast<std::size_t>(kNumPartitions));
  CHECK(statistic(g, Metric::Degree, 1).values.size() == 30);
}

TEST_CASE("report discriminates families") {
  std::vector<Graph> sbm, ba;
  for (std::uint64_t s = 0; s < 20; ++s) {
    sbm.push_back(sample_sbm(60, {0.5, 0.5}, 0.3, 0.05, s));
    ba.push_back(sample_barabasi_albert(60, 2, 100 + s));
  }
  const ErrorReport r = error_report(sbm, ba, {Metric::Degree, Metric::Clustering}, 7, 2);
  CHECK(*r.error(Metric::Degree) >= 0.2);
  CHECK(r.gen.count == 20);
  CHECK(r.test.connected_fraction == 1.0);
  const auto j = r.to_json();
  CHECK(j["metrics"]["degree"].get<double>() == *r.error(Metric::Degree));
  CHECK(r.to_csv().rfind("metric,error\n", 0) == 0);

  const ErrorReport self = error_report(ba, ba, all_metrics(), 7, 2);
  for (const auto& [name, err] : self.errors) {
    INFO(name);
    REQUIRE(err.has_value());
    CHECK(*err == 0.0);
  }
}
