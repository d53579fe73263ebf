#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <tuple>

#include "support/random_graphs.hpp"
#include "tgx/ingest.hpp"
#include "tgx/selective_index.hpp"

using namespace tgx;

namespace {

// One synthetic hub vertex: edges with the given start times and durations.
std::vector<NeighborEdge> hub_edges(std::span<const Timestamp> starts,
                                    std::span<const Timestamp> durations) {
  std::vector<NeighborEdge> out;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    out.push_back(NeighborEdge{static_cast<VertexId>(i % 7), starts[i],
                               starts[i] + durations[i % durations.size()], 1.0});
  }
  return out;
}

std::pair<TemporalCsr, TemporalCsr> csr_pair(std::span<const TemporalEdge> edges, VertexId n_v) {
  const GraphMeta meta = compute_meta(edges, n_v, true);
  return {TemporalCsr::build(edges, meta, Direction::Out),
          TemporalCsr::build(edges, meta, Direction::In)};
}

}  // namespace

TEST_CASE("cost formulas") {
  CHECK(cost_index_lookup(1, 0, 1.0) == doctest::Approx(0.0));
  CHECK(cost_index_lookup(1024, 10, 1.0) == doctest::Approx(20.0));
  CHECK(cost_index_lookup(4096, 100, 2.0) == doctest::Approx(224.0));
  CHECK_THROWS_AS(cost_index_lookup(0, 0, 1.0), std::domain_error);

  CHECK(cost_scan(0, 1.0) == doctest::Approx(0.0));
  CHECK(cost_scan(1000, 1.0) == doctest::Approx(1000.0));
  CHECK(cost_scan(4096, 0.05) == doctest::Approx(204.8));
}

TEST_CASE("registry indexes exactly the vertices at or above the cutoff") {
  // Vertex 0 out-degree 4, vertex 1 out-degree 3, vertex 2 in-degree 4.
  std::vector<TemporalEdge> edges;
  for (Timestamp t = 0; t < 4; ++t) edges.push_back({0, 2, t, t + 1, 1.0});
  for (Timestamp t = 0; t < 3; ++t) edges.push_back({1, 3, t, t + 1, 1.0});
  const auto [out, in] = csr_pair(edges, 4);

  SUBCASE("all below the cutoff") {
    const VertexIndexRegistry reg = VertexIndexRegistry::build(out, in, 5);
    CHECK(reg.indexed_count(Direction::Out) == 0);
    CHECK(reg.indexed_count(Direction::In) == 0);
  }
  SUBCASE("boundary degree is indexed") {
    const VertexIndexRegistry reg = VertexIndexRegistry::build(out, in, 4);
    CHECK(reg.indexed_count(Direction::Out) == 1);
    CHECK(reg.index(0, Direction::Out) != nullptr);
    CHECK(reg.histogram(0, Direction::Out) != nullptr);
    CHECK(reg.index(1, Direction::Out) == nullptr);
    CHECK(reg.indexed_count(Direction::In) == 1);
    CHECK(reg.index(2, Direction::In) != nullptr);
  }
  SUBCASE("cutoff below one rejected") {
    CHECK_THROWS_AS(VertexIndexRegistry::build(out, in, 0), std::invalid_argument);
  }
}

TEST_CASE("indexed set matches an independent degree count on synthetic data") {
  GeneratorConfig cfg;
  cfg.n_v = 300;
  cfg.n_e = 30000;
  cfg.sigma = 1.6;
  cfg.seed = 99;
  const auto edges = generate_synthetic(cfg);
  const auto [out, in] = csr_pair(edges, cfg.n_v);
  const EdgeId cutoff = 256;
  const VertexIndexRegistry reg = VertexIndexRegistry::build(out, in, cutoff);

  std::vector<EdgeId> out_deg(cfg.n_v, 0), in_deg(cfg.n_v, 0);
  for (const TemporalEdge& e : edges) {
    ++out_deg[e.source];
    ++in_deg[e.destination];
  }
  std::set<VertexId> expect_out, expect_in;
  for (VertexId v = 0; v < cfg.n_v; ++v) {
    if (out_deg[v] >= cutoff) expect_out.insert(v);
    if (in_deg[v] >= cutoff) expect_in.insert(v);
  }
  const auto got_out = reg.indexed_vertices(Direction::Out);
  const auto got_in = reg.indexed_vertices(Direction::In);
  CHECK(std::set<VertexId>(got_out.begin(), got_out.end()) == expect_out);
  CHECK(std::set<VertexId>(got_in.begin(), got_in.end()) == expect_in);

  // Every indexed vertex carries a histogram whose mass equals its degree.
  for (const VertexId v : got_out) {
    REQUIRE(reg.histogram(v, Direction::Out) != nullptr);
    CHECK(reg.histogram(v, Direction::Out)->total() == out_deg[v]);
  }
}

TEST_CASE("histogram estimate boundary behavior") {
  std::mt19937_64 rng(3);
  std::vector<Timestamp> starts(5000);
  for (auto& s : starts) s = std::uniform_int_distribution<Timestamp>(1000, 2000)(rng);
  const std::vector<Timestamp> durs{5, 10, 20, 40};
  const auto edges = hub_edges(starts, durs);
  const DensityHistogram h = DensityHistogram::build(edges);

  std::uint64_t mass = 0;
  for (const auto c : h.buckets()) mass += c;
  CHECK(mass == h.total());

  CHECK(h.estimate(QueryWindow{0, kMaxTimestamp}) == doctest::Approx(h.total()));
  CHECK(h.estimate(QueryWindow{0, 500}) == doctest::Approx(0.0));       // ends after the window
  CHECK(h.estimate(QueryWindow{2100, 4000}) == doctest::Approx(0.0));  // starts before it
}

TEST_CASE("estimate within 20 percent of truth on uniform data") {
  std::mt19937_64 rng(17);
  std::vector<Timestamp> starts(20000);
  for (auto& s : starts) s = std::uniform_int_distribution<Timestamp>(0, 100000)(rng);
  std::vector<Timestamp> durs(16);
  for (auto& d : durs) d = std::uniform_int_distribution<Timestamp>(1, 50)(rng);
  const auto edges = hub_edges(starts, durs);
  const DensityHistogram h = DensityHistogram::build(edges);

  // Most recent ~10% of start times, full durations.
  const QueryWindow w{90000, kMaxTimestamp};
  EdgeId truth = 0;
  for (const NeighborEdge& e : edges) {
    if (window_contains(w, e.start, e.end)) ++truth;
  }
  const double est = h.estimate(w);
  CHECK(est >= 0.8 * static_cast<double>(truth));
  CHECK(est <= 1.2 * static_cast<double>(truth));
}

TEST_CASE("estimate is monotone in the window") {
  std::mt19937_64 rng(23);
  std::vector<Timestamp> starts(3000);
  for (auto& s : starts) s = std::uniform_int_distribution<Timestamp>(0, 5000)(rng);
  std::vector<Timestamp> durs{1, 3, 9, 27, 81};
  const auto edges = hub_edges(starts, durs);
  const DensityHistogram h = DensityHistogram::build(edges);

  for (int i = 0; i < 300; ++i) {
    QueryWindow small = testsupport::random_window(rng, 6000);
    QueryWindow big{small.t_a - std::min<Timestamp>(small.t_a, 40), small.t_b + 40};
    CHECK(h.estimate(small) <= h.estimate(big) + 1e-9);
    CHECK(h.estimate(small) >= 0.0);
    CHECK(h.estimate(small) <= static_cast<double>(h.total()));
  }
}

TEST_CASE("degenerate single-value dimensions collapse to one bucket") {
  std::vector<Timestamp> starts(100, 42);
  std::vector<Timestamp> durs{7};
  const DensityHistogram h = DensityHistogram::build(hub_edges(starts, durs));
  CHECK(h.start_buckets() == 1);
  CHECK(h.duration_buckets() == 1);
  CHECK(h.estimate(QueryWindow{0, kMaxTimestamp}) == doctest::Approx(100.0));
  CHECK(h.estimate(QueryWindow{43, kMaxTimestamp}) == doctest::Approx(0.0));
  CHECK(h.estimate(QueryWindow{42, 49}) == doctest::Approx(100.0));
  CHECK(h.estimate(QueryWindow{42, 48}) == doctest::Approx(0.0));
}

TEST_CASE("access decision follows the beta threshold") {
  std::vector<TemporalEdge> edges;
  for (Timestamp t = 0; t < 100; ++t) edges.push_back({0, 1, t, t + 1, 1.0});
  const auto [out, in] = csr_pair(edges, 2);
  const VertexIndexRegistry reg = VertexIndexRegistry::build(out, in, 100);

  CostModelParams params;

  SUBCASE("unindexed vertex always scans") {
    const AccessDecision d = choose_access_method(1, reg, Direction::Out, QueryWindow{}, params);
    CHECK(d.method == AccessMethod::Scan);
    CHECK(d.beta_hat == -1.0);
  }
  SUBCASE("selective query picks the tree under theta 0.3") {
    params.theta_sel = 0.3;
    // Recent fifth of the edges: beta-hat near 0.2.
    const AccessDecision d =
        choose_access_method(0, reg, Direction::Out, QueryWindow{80, 1000}, params);
    CHECK(d.method == AccessMethod::IndexLookup);
    CHECK(d.beta_hat == doctest::Approx(0.2).epsilon(0.15));
  }
  SUBCASE("universal window scans") {
    const AccessDecision d =
        choose_access_method(0, reg, Direction::Out, QueryWindow{0, kMaxTimestamp}, params);
    CHECK(d.beta_hat == doctest::Approx(1.0));
    CHECK(d.method == AccessMethod::Scan);
  }
  SUBCASE("tie goes to the tree") {
    params.theta_sel = 1.0;
    const AccessDecision d =
        choose_access_method(0, reg, Direction::Out, QueryWindow{0, kMaxTimestamp}, params);
    CHECK(d.method == AccessMethod::IndexLookup);
  }
}

TEST_CASE("access transparency: tree and scan agree on every window") {
  GeneratorConfig cfg;
  cfg.n_v = 50;
  cfg.n_e = 20000;
  cfg.sigma = 1.0;
  cfg.seed = 7;
  const auto edges = generate_synthetic(cfg);
  const auto [out, in] = csr_pair(edges, cfg.n_v);
  const VertexIndexRegistry reg = VertexIndexRegistry::build(out, in, 64);
  REQUIRE(reg.indexed_count(Direction::Out) > 0);

  std::mt19937_64 rng(31);
  auto key = [](const NeighborEdge& e) {
    return std::tuple(e.start, e.end, e.neighbor, e.weight);
  };
  for (const VertexId v : reg.indexed_vertices(Direction::Out)) {
    for (int q = 0; q < 5; ++q) {
      QueryWindow w = testsupport::random_window(rng, 30000);
      auto via_tree = reg.index(v, Direction::Out)->query_window(w);
      auto via_scan = out.scan_neighbors(v, w);
      std::sort(via_tree.begin(), via_tree.end(),
                [&](const NeighborEdge& a, const NeighborEdge& b) { return key(a) < key(b); });
      std::sort(via_scan.begin(), via_scan.end(),
                [&](const NeighborEdge& a, const NeighborEdge& b) { return key(a) < key(b); });
      CHECK(via_tree == via_scan);
    }
  }
}

TEST_CASE("calibration recovers injected constants") {
  std::vector<TemporalEdge> edges;
  for (Timestamp t = 0; t < 512; ++t) edges.push_back({0, 1, t, t + 1, 1.0});
  const auto [out, in] = csr_pair(edges, 2);
  const VertexIndexRegistry reg = VertexIndexRegistry::build(out, in, 512);

  std::vector<std::pair<VertexId, QueryWindow>> workload;
  for (Timestamp a = 0; a < 500; a += 50) workload.push_back({0, QueryWindow{a, a + 100}});

  SUBCASE("injected timings matching the formulas round-trip") {
    auto timer = [&](VertexId v, const QueryWindow& w, AccessMethod m) {
      const EdgeId deg = out.degree(v);
      const EdgeId k = out.count_in_window(v, w);
      return m == AccessMethod::IndexLookup
                 ? 3.0 * (std::log2(static_cast<double>(deg)) + static_cast<double>(k))
                 : 0.5 * static_cast<double>(deg);
    };
    const CostModelParams p = calibrate_constants(out, reg, Direction::Out, workload, timer);
    CHECK(p.c == doctest::Approx(3.0).epsilon(0.01));
    CHECK(p.c_prime == doctest::Approx(0.5).epsilon(0.01));
    CHECK(p.theta_sel == doctest::Approx(0.2));
  }
  SUBCASE("single pair gives the implied exact fit") {
    std::vector<std::pair<VertexId, QueryWindow>> one{{0, QueryWindow{0, 50}}};
    auto timer = [&](VertexId, const QueryWindow&, AccessMethod m) {
      return m == AccessMethod::IndexLookup ? 7.0 : 11.0;
    };
    const CostModelParams p = calibrate_constants(out, reg, Direction::Out, one, timer);
    const double x =
        std::log2(512.0) + static_cast<double>(out.count_in_window(0, QueryWindow{0, 50}));
    CHECK(p.c == doctest::Approx(7.0 / x));
    CHECK(p.c_prime == doctest::Approx(11.0 / 512.0));
  }
  SUBCASE("workload without indexed vertices fails") {
    std::vector<std::pair<VertexId, QueryWindow>> none{{1, QueryWindow{0, 50}}};
    CHECK_THROWS_AS(calibrate_constants(out, reg, Direction::Out, none, {}),
                    std::invalid_argument);
  }
  SUBCASE("empty point set fails") {
    CHECK_THROWS_AS(fit_cost_constants({}, 0.2), std::invalid_argument);
  }
}

TEST_CASE("decision accuracy against exact selectivity on a skewed synthetic graph") {
  GeneratorConfig cfg;
  cfg.n_v = 400;
  cfg.n_e = 400000;
  cfg.sigma = 1.5;
  cfg.d_max = 600;
  cfg.seed = 1234;
  const auto edges = generate_synthetic(cfg);
  const auto [out, in] = csr_pair(edges, cfg.n_v);
  const VertexIndexRegistry reg = VertexIndexRegistry::build(out, in, 1024);
  REQUIRE(reg.indexed_count(Direction::Out) >= 20);

  CostModelParams params;  // theta 0.2
  for (const double pct : {0.5, 3.0, 10.0}) {
    const QueryWindow w = window_for_recent_fraction(edges, pct / 100.0);
    std::uint64_t agree = 0, total = 0;
    for (const Direction dir : {Direction::Out, Direction::In}) {
      const TemporalCsr& csr = dir == Direction::Out ? out : in;
      for (const VertexId v : reg.indexed_vertices(dir)) {
        const AccessDecision dec = choose_access_method(v, reg, dir, w, params);
        const double beta = static_cast<double>(csr.count_in_window(v, w)) /
                            static_cast<double>(csr.degree(v));
        agree += (beta <= params.theta_sel) == (dec.method == AccessMethod::IndexLookup) ? 1 : 0;
        ++total;
      }
    }
    const double accuracy = static_cast<double>(agree) / static_cast<double>(total);
    if (pct < 1.0) {
      CHECK(accuracy >= 0.90);
    } else {
      CHECK(accuracy >= 0.95);
    }
  }
}
