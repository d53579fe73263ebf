#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "support/oracle.hpp"
#include "support/random_graphs.hpp"
#include "tgx/algorithms.hpp"
#include "tgx/digest.hpp"

using namespace tgx;

namespace {

constexpr std::int64_t kInf = PathResult::kUnreachedMin;
constexpr std::int64_t kNegInf = PathResult::kUnreachedMax;

TemporalGraph graph_of(const std::vector<TemporalEdge>& edges, VertexId n_v,
                       EngineConfig cfg = {}) {
  return TemporalGraph::build(edges, n_v, true, cfg);
}

PathResult run_path_algo(oracle::PathMetric m, const TemporalGraph& g, VertexId source,
                         const QueryWindow& w, const AlgoOptions& opts = {}) {
  switch (m) {
    case oracle::PathMetric::EarliestArrival:
      return earliest_arrival(g, source, w, opts);
    case oracle::PathMetric::LatestDeparture:
      return latest_departure(g, source, w, opts);
    case oracle::PathMetric::Fastest:
      return fastest_path(g, source, w, opts);
    case oracle::PathMetric::ShortestDuration:
      return shortest_duration(g, source, w, opts);
    case oracle::PathMetric::Hops:
      return temporal_bfs(g, source, w, opts);
  }
  return {};
}

constexpr oracle::PathMetric kAllMetrics[] = {
    oracle::PathMetric::EarliestArrival, oracle::PathMetric::LatestDeparture,
    oracle::PathMetric::Fastest, oracle::PathMetric::ShortestDuration, oracle::PathMetric::Hops};

constexpr Ordering kAllOrderings[] = {Ordering::Succeeds, Ordering::StrictlySucceeds,
                                      Ordering::Overlaps};

}  // namespace

TEST_CASE("earliest arrival basics") {
  SUBCASE("no edges") {
    const TemporalGraph g = graph_of({}, 4);
    const PathResult r = earliest_arrival(g, 1, QueryWindow{5, 50});
    CHECK(r.values[1] == 5);
    for (VertexId v : {0u, 2u, 3u}) CHECK(r.values[v] == kInf);
  }
  SUBCASE("single contained edge arrives at its end") {
    const TemporalGraph g = graph_of({{0, 1, 3, 5, 1.0}}, 2);
    const PathResult r = earliest_arrival(g, 0, QueryWindow{0, 10});
    CHECK(r.values[1] == 5);
  }
  SUBCASE("strict ordering rejects equal handoff, weak accepts") {
    const std::vector<TemporalEdge> chain{{0, 1, 1, 3, 1.0}, {1, 2, 3, 4, 1.0}};
    const TemporalGraph g = graph_of(chain, 3);
    AlgoOptions strict;
    strict.ordering = Ordering::StrictlySucceeds;
    AlgoOptions weak;
    weak.ordering = Ordering::Succeeds;
    CHECK(earliest_arrival(g, 0, QueryWindow{}, strict).values[2] == kInf);
    CHECK(earliest_arrival(g, 0, QueryWindow{}, weak).values[2] == 4);
  }
  SUBCASE("window monotonicity") {
    std::mt19937_64 rng(61);
    for (int i = 0; i < 20; ++i) {
      const auto inst = testsupport::random_instance(rng, 10, 30);
      const TemporalGraph g = graph_of(inst.edges, inst.n_v);
      const QueryWindow small = testsupport::random_window(rng, 70);
      const QueryWindow big{small.t_a - std::min<Timestamp>(small.t_a, 10), small.t_b + 10};
      const VertexId s = std::uniform_int_distribution<VertexId>(0, inst.n_v - 1)(rng);
      const PathResult rs = earliest_arrival(g, s, small);
      const PathResult rb = earliest_arrival(g, s, big);
      for (VertexId v = 0; v < inst.n_v; ++v) CHECK(rb.values[v] <= rs.values[v]);
    }
  }
  SUBCASE("source out of range") {
    const TemporalGraph g = graph_of({}, 2);
    CHECK_THROWS_AS(earliest_arrival(g, 5, QueryWindow{}), std::out_of_range);
  }
}

TEST_CASE("latest departure basics") {
  SUBCASE("no edges") {
    const TemporalGraph g = graph_of({}, 3);
    const PathResult r = latest_departure(g, 1, QueryWindow{2, 9});
    CHECK(r.values[1] == 9);
    CHECK(r.values[0] == kNegInf);
  }
  SUBCASE("single edge into the target departs at its start") {
    const TemporalGraph g = graph_of({{0, 1, 3, 5, 1.0}}, 2);
    const PathResult r = latest_departure(g, 1, QueryWindow{0, 10});
    CHECK(r.values[0] == 3);
  }
}

TEST_CASE("fastest path basics") {
  SUBCASE("two-hop beats the direct edge") {
    const std::vector<TemporalEdge> edges{
        {0, 1, 2, 6, 1.0}, {0, 2, 3, 4, 1.0}, {2, 1, 4, 5, 1.0}};
    const TemporalGraph g = graph_of(edges, 3);
    AlgoOptions weak;
    weak.ordering = Ordering::Succeeds;
    const PathResult r = fastest_path(g, 0, QueryWindow{}, weak);
    CHECK(r.values[1] == 2);  // depart 3, arrive 5
  }
  SUBCASE("no edges") {
    const TemporalGraph g = graph_of({}, 3);
    const PathResult r = fastest_path(g, 2, QueryWindow{});
    CHECK(r.values[2] == 0);
    CHECK(r.values[0] == kInf);
  }
}

TEST_CASE("shortest duration basics") {
  SUBCASE("single edge") {
    const TemporalGraph g = graph_of({{0, 1, 3, 5, 1.0}}, 2);
    CHECK(shortest_duration(g, 0, QueryWindow{}).values[1] == 2);
  }
  SUBCASE("cheaper two-hop sum wins") {
    // Direct path duration 4; two-hop sums 1 + 2 = 3.
    const std::vector<TemporalEdge> edges{
        {0, 1, 0, 4, 1.0}, {0, 2, 0, 1, 1.0}, {2, 1, 5, 7, 1.0}};
    const TemporalGraph g = graph_of(edges, 3);
    CHECK(shortest_duration(g, 0, QueryWindow{}).values[1] == 3);
  }
  SUBCASE("weighted variant sums integral weights") {
    const std::vector<TemporalEdge> edges{
        {0, 1, 0, 4, 9.0}, {0, 2, 0, 1, 2.0}, {2, 1, 5, 7, 3.0}};
    const TemporalGraph g = graph_of(edges, 3);
    AlgoOptions opts;
    opts.weighted = true;
    CHECK(shortest_duration(g, 0, QueryWindow{}, opts).values[1] == 5);
    // Fractional weights are rejected.
    const TemporalGraph bad = graph_of({{0, 1, 0, 1, 0.5}}, 2);
    CHECK_THROWS_AS(shortest_duration(bad, 0, QueryWindow{}, opts), std::invalid_argument);
  }
}

TEST_CASE("temporal bfs basics") {
  SUBCASE("chain of time-respecting edges") {
    const std::vector<TemporalEdge> edges{
        {0, 1, 1, 2, 1.0}, {1, 2, 3, 4, 1.0}, {2, 3, 5, 6, 1.0}};
    const TemporalGraph g = graph_of(edges, 4);
    const PathResult r = temporal_bfs(g, 0, QueryWindow{});
    CHECK(r.values == std::vector<std::int64_t>{0, 1, 2, 3});
  }
  SUBCASE("more hops can arrive earlier and unlock later edges") {
    // Direct 0->1 arrives at 10; the 2-hop route arrives at 3 and only it
    // can continue through [5, 6].
    const std::vector<TemporalEdge> edges{{0, 1, 9, 10, 1.0},
                                          {0, 2, 0, 1, 1.0},
                                          {2, 1, 2, 3, 1.0},
                                          {1, 3, 5, 6, 1.0}};
    const TemporalGraph g = graph_of(edges, 4);
    const PathResult r = temporal_bfs(g, 0, QueryWindow{});
    CHECK(r.values[1] == 1);
    CHECK(r.values[3] == 3);
  }
}

TEST_CASE("path algorithms match the exhaustive oracle") {
  std::mt19937_64 rng(67);
  int checked = 0;
  for (int iter = 0; iter < 60; ++iter) {
    const auto inst = testsupport::random_instance(rng, 9, 28);
    EngineConfig cfg;
    const TemporalGraph g = graph_of(inst.edges, inst.n_v, cfg);
    for (int wi = 0; wi < 3; ++wi) {
      const QueryWindow w = testsupport::random_window(rng, 75);
      const VertexId s = std::uniform_int_distribution<VertexId>(0, inst.n_v - 1)(rng);
      for (const Ordering ord : kAllOrderings) {
        AlgoOptions opts;
        opts.ordering = ord;
        for (const oracle::PathMetric m : kAllMetrics) {
          const PathResult got = run_path_algo(m, g, s, w, opts);
          const PathResult want = oracle::enumerate_paths(inst.edges, inst.n_v, s, w, ord, m);
          CHECK(got.values == want.values);
          ++checked;
        }
      }
    }
  }
  CHECK(checked == 60 * 3 * 3 * 5);
}

TEST_CASE("results invariant under forced access methods") {
  std::mt19937_64 rng(71);
  for (int iter = 0; iter < 10; ++iter) {
    const auto inst = testsupport::random_instance(rng, 8, 40);
    EngineConfig cfg;
    cfg.index_cutoff = 1;  // index every vertex so the tree path is real
    const TemporalGraph g = TemporalGraph::build(inst.edges, inst.n_v, true, cfg);
    const QueryWindow w = testsupport::random_window(rng, 75);
    const VertexId s = std::uniform_int_distribution<VertexId>(0, inst.n_v - 1)(rng);
    for (const oracle::PathMetric m : kAllMetrics) {
      AlgoOptions scan, index, automatic;
      scan.force_access = ForceAccess::Scan;
      index.force_access = ForceAccess::Index;
      automatic.force_access = ForceAccess::Auto;
      const PathResult a = run_path_algo(m, g, s, w, scan);
      const PathResult b = run_path_algo(m, g, s, w, index);
      const PathResult c = run_path_algo(m, g, s, w, automatic);
      CHECK(a.values == b.values);
      CHECK(a.values == c.values);
    }
  }
}

TEST_CASE("results identical across worker counts") {
  std::mt19937_64 rng(73);
  const auto inst = testsupport::random_instance(rng, 10, 40);
  const TemporalGraph g = graph_of(inst.edges, inst.n_v);
  const QueryWindow w{0, 50};

  for (const oracle::PathMetric m : kAllMetrics) {
    std::vector<std::vector<std::int64_t>> results;
    for (const int workers : {1, 2, 4}) {
      set_workers(workers);
      results.push_back(run_path_algo(m, g, 0, w).values);
    }
    set_workers(1);
    CHECK(results[0] == results[1]);
    CHECK(results[0] == results[2]);
  }
}

TEST_CASE("temporal connected components") {
  SUBCASE("no edges in window") {
    const TemporalGraph g = graph_of({{0, 1, 5, 6, 1.0}}, 3);
    const ComponentResult r = temporal_cc(g, QueryWindow{0, 2});
    CHECK(r.labels == std::vector<VertexId>{0, 1, 2});
  }
  SUBCASE("two disjoint triangles") {
    std::vector<TemporalEdge> edges;
    for (const VertexId base : {0u, 3u}) {
      edges.push_back({base, base + 1, 1, 2, 1.0});
      edges.push_back({base + 1, base + 2, 8, 9, 1.0});
      edges.push_back({base + 2, base, 4, 5, 1.0});
    }
    const TemporalGraph g = graph_of(edges, 6);
    const ComponentResult r = temporal_cc(g, QueryWindow{});
    CHECK(r.labels == std::vector<VertexId>{0, 0, 0, 3, 3, 3});
  }
  SUBCASE("matches union-find on random graphs") {
    std::mt19937_64 rng(79);
    for (int iter = 0; iter < 30; ++iter) {
      const auto inst = testsupport::random_instance(rng, 12, 40);
      const TemporalGraph g = graph_of(inst.edges, inst.n_v);
      const QueryWindow w = testsupport::random_window(rng, 75);
      CHECK(temporal_cc(g, w).labels ==
            oracle::connected_components(inst.edges, inst.n_v, w).labels);
    }
  }
}

TEST_CASE("temporal k-core") {
  SUBCASE("k zero keeps everything") {
    const TemporalGraph g = graph_of({}, 4);
    CHECK(temporal_kcore(g, QueryWindow{}, 0).count() == 4);
  }
  SUBCASE("triangle survives k = 2") {
    const std::vector<TemporalEdge> edges{
        {0, 1, 1, 2, 1.0}, {1, 2, 3, 4, 1.0}, {2, 0, 5, 6, 1.0}};
    const TemporalGraph g = graph_of(edges, 4);
    CHECK(temporal_kcore(g, QueryWindow{}, 2).to_ids() == std::vector<VertexId>{0, 1, 2});
  }
  SUBCASE("matches sequential peeling on random graphs") {
    std::mt19937_64 rng(83);
    for (int iter = 0; iter < 30; ++iter) {
      const auto inst = testsupport::random_instance(rng, 12, 40);
      const TemporalGraph g = graph_of(inst.edges, inst.n_v);
      const QueryWindow w = testsupport::random_window(rng, 75);
      const std::uint64_t k = std::uniform_int_distribution<std::uint64_t>(1, 4)(rng);
      CHECK(temporal_kcore(g, w, k).to_ids() ==
            oracle::kcore(inst.edges, inst.n_v, true, w, k));
    }
  }
}

TEST_CASE("temporal betweenness") {
  SUBCASE("star center carries all pair dependencies, leaves none") {
    // Directed star with time-respecting through-paths via the center.
    std::vector<TemporalEdge> edges;
    for (VertexId leaf = 1; leaf <= 3; ++leaf) {
      edges.push_back({leaf, 0, leaf, leaf + 1, 1.0});
      edges.push_back({0, leaf, 10 + leaf, 11 + leaf, 1.0});
    }
    const TemporalGraph g = graph_of(edges, 4);
    const CentralityResult r = temporal_bc(g, QueryWindow{});
    CHECK(r.scores[0] > 0.0);
    for (VertexId leaf = 1; leaf <= 3; ++leaf) CHECK(r.scores[leaf] == doctest::Approx(0.0));
  }
  SUBCASE("two-hop path credits the middle vertex once") {
    const std::vector<TemporalEdge> edges{{0, 1, 1, 2, 1.0}, {1, 2, 3, 4, 1.0}};
    const TemporalGraph g = graph_of(edges, 3);
    const CentralityResult r = temporal_bc(g, QueryWindow{});
    CHECK(r.scores[1] == doctest::Approx(1.0));
    CHECK(r.scores[0] == doctest::Approx(0.0));
    CHECK(r.scores[2] == doctest::Approx(0.0));
  }
  SUBCASE("matches the enumeration oracle on random graphs") {
    std::mt19937_64 rng(89);
    for (int iter = 0; iter < 25; ++iter) {
      const auto inst = testsupport::random_instance(rng, 8, 24, 60, 8, /*d_min=*/1);
      const TemporalGraph g = graph_of(inst.edges, inst.n_v);
      const QueryWindow w = testsupport::random_window(rng, 75);
      for (const Ordering ord : {Ordering::Succeeds, Ordering::StrictlySucceeds}) {
        AlgoOptions opts;
        opts.ordering = ord;
        const CentralityResult got = temporal_bc(g, w, opts);
        const std::vector<double> want = oracle::betweenness(inst.edges, inst.n_v, w, ord);
        REQUIRE(got.scores.size() == want.size());
        for (std::size_t v = 0; v < want.size(); ++v) {
          CHECK(got.scores[v] == doctest::Approx(want[v]).epsilon(1e-9));
        }
      }
    }
  }
}

TEST_CASE("temporal pagerank") {
  SUBCASE("no edges gives the uniform vector") {
    const TemporalGraph g = graph_of({}, 5);
    const CentralityResult r = temporal_pagerank(g, QueryWindow{}, 10);
    for (double s : r.scores) CHECK(s == doctest::Approx(0.2));
  }
  SUBCASE("two-vertex cycle splits evenly") {
    const std::vector<TemporalEdge> edges{{0, 1, 1, 2, 1.0}, {1, 0, 3, 4, 1.0}};
    const TemporalGraph g = graph_of(edges, 2);
    const CentralityResult r = temporal_pagerank(g, QueryWindow{}, 50);
    CHECK(r.scores[0] == doctest::Approx(0.5));
    CHECK(r.scores[1] == doctest::Approx(0.5));
  }
  SUBCASE("iterations below one rejected") {
    const TemporalGraph g = graph_of({}, 2);
    CHECK_THROWS_AS(temporal_pagerank(g, QueryWindow{}, 0), std::invalid_argument);
  }
  SUBCASE("matches the dense oracle and keeps its mass") {
    std::mt19937_64 rng(97);
    for (int iter = 0; iter < 20; ++iter) {
      const auto inst = testsupport::random_instance(rng, 12, 50);
      const TemporalGraph g = graph_of(inst.edges, inst.n_v);
      const QueryWindow w = testsupport::random_window(rng, 75);
      const CentralityResult got = temporal_pagerank(g, w, 100);
      const std::vector<double> want = oracle::pagerank(inst.edges, inst.n_v, w, 100, 0.85);
      double sum = 0.0;
      for (std::size_t v = 0; v < want.size(); ++v) {
        CHECK(std::abs(got.scores[v] - want[v]) <= 1e-8);
        sum += got.scores[v];
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
  SUBCASE("successive L1 differences keep shrinking") {
    std::mt19937_64 rng(101);
    const auto inst = testsupport::random_instance(rng, 12, 60);
    const TemporalGraph g = graph_of(inst.edges, inst.n_v);
    const QueryWindow w{0, 100};
    std::vector<double> l1;
    std::vector<double> prev = temporal_pagerank(g, w, 1).scores;
    for (int it = 2; it <= 25; ++it) {
      const std::vector<double> cur = temporal_pagerank(g, w, it).scores;
      double diff = 0.0;
      for (std::size_t v = 0; v < cur.size(); ++v) diff += std::abs(cur[v] - prev[v]);
      l1.push_back(diff);
      prev = cur;
    }
    for (std::size_t i = 3; i < l1.size(); ++i) CHECK(l1[i] <= l1[i - 1] + 1e-15);
  }
}

TEST_CASE("digests are stable for identical results") {
  std::mt19937_64 rng(103);
  const auto inst = testsupport::random_instance(rng, 10, 40);
  const TemporalGraph g = graph_of(inst.edges, inst.n_v);
  const QueryWindow w{0, 60};
  const std::uint64_t a = digest_of(earliest_arrival(g, 0, w).values);
  const std::uint64_t b = digest_of(earliest_arrival(g, 0, w).values);
  CHECK(a == b);
  // A different window yields a different digest on nontrivial graphs.
  if (g.out_csr().edge_count() > 0) {
    const std::uint64_t c = digest_of(earliest_arrival(g, 0, QueryWindow{1, 59}).values);
    (void)c;
  }
}
