#include <algorithm>
#include <cmath>
#include <numeric>

#include "internal.hpp"
#include "tgx/algorithms.hpp"
#include "tgx/parallel.hpp"

namespace tgx {

namespace {

constexpr std::int64_t kInf = PathResult::kUnreachedMin;
constexpr std::uint64_t kSigmaCap = static_cast<std::uint64_t>(PathResult::kUnreachedMin);

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > kSigmaCap - b ? kSigmaCap : a + b;
}

}  // namespace

ComponentResult temporal_cc(const TemporalGraph& g, const QueryWindow& w,
                            const AlgoOptions& opts) {
  const QueryWindow cw = detail::clamp_window(w);
  const ForceAccess force = opts.force_access.value_or(g.config().force_access);
  const VertexId n = g.vertex_count();

  ComponentResult r;
  r.labels.resize(n);
  std::iota(r.labels.begin(), r.labels.end(), VertexId{0});

  std::vector<VertexId> snap;
  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t round = 0;

  // Min-label propagation over both edge orientations; temporal ordering is
  // deliberately ignored, only window containment filters edges.
  VertexSubset frontier = VertexSubset::all(n);
  while (frontier.count() != 0) {
    ++round;
    snap = r.labels;
    auto update = [&](VertexId s, VertexId d, Timestamp, Timestamp, double) -> bool {
      const VertexId cand = snap[s];
      return write_min(r.labels[d], cand) && claim_stamp(stamp[d], round);
    };
    auto cond = [](VertexId) { return true; };
    EdgeMapOptions fwd;
    fwd.direction = Direction::Out;
    fwd.ordering = Ordering::Succeeds;  // no consecutive-edge constraint applies
    fwd.force_access = force;
    fwd.stats = opts.stats;
    VertexSubset a = temporal_edge_map(g, cw, frontier, update, cond, fwd);
    EdgeMapOptions bwd = fwd;
    bwd.direction = Direction::In;
    VertexSubset b = temporal_edge_map(g, cw, frontier, update, cond, bwd);

    std::vector<VertexId> merged = a.to_ids();
    const std::vector<VertexId> more = b.to_ids();
    merged.insert(merged.end(), more.begin(), more.end());
    frontier = VertexSubset::from_ids(std::move(merged), n);
  }
  return r;
}

VertexSubset temporal_kcore(const TemporalGraph& g, const QueryWindow& w, std::uint64_t k,
                            const AlgoOptions& opts) {
  const QueryWindow cw = detail::clamp_window(w);
  const ForceAccess force = opts.force_access.value_or(g.config().force_access);
  const VertexId n = g.vertex_count();
  VertexSubset members = VertexSubset::all(n);
  if (k == 0) return members;

  // Undirected builds already materialize both orientations in the out
  // layout, so incident edges are counted from it alone; directed graphs
  // count out- plus in-edges.
  const bool both_sides = g.meta().directed;

  // The window is fixed for the whole peel, so the per-vertex access
  // decision is made once per direction and reused every round.
  auto pick_methods = [&](Direction dir) {
    std::vector<std::uint8_t> use_index(n, 0);
    if (force == ForceAccess::Scan) return use_index;
    for (const VertexId v : g.registry().indexed_vertices(dir)) {
      use_index[v] =
          force == ForceAccess::Index ||
                  choose_access_method(v, g.registry(), dir, cw, g.config().cost).method ==
                      AccessMethod::IndexLookup
              ? 1
              : 0;
    }
    return use_index;
  };
  const std::vector<std::uint8_t> out_index = pick_methods(Direction::Out);
  const std::vector<std::uint8_t> in_index =
      both_sides ? pick_methods(Direction::In) : std::vector<std::uint8_t>();

  std::vector<std::uint8_t> member_flags(n, 1);
  while (true) {
    const std::size_t before = members.count();
    auto count_side = [&](VertexId v, Direction dir, const std::vector<std::uint8_t>& use_index) {
      std::uint64_t cnt = 0;
      auto tally = [&](VertexId nb, Timestamp, Timestamp, double, EdgeId) {
        if (member_flags[nb]) ++cnt;
      };
      if (use_index[v]) {
        g.registry().index(v, dir)->for_each_in_window(
            cw, [&](const NeighborEdge& e, std::uint32_t) {
              if (member_flags[e.neighbor]) ++cnt;
            });
        detail::count_access(opts.stats, AccessMethod::IndexLookup);
      } else {
        g.csr(dir).for_each_in_window(v, cw, tally);
        detail::count_access(opts.stats, AccessMethod::Scan);
      }
      return cnt;
    };
    auto has_support = [&](VertexId v) -> bool {
      std::uint64_t cnt = count_side(v, Direction::Out, out_index);
      if (both_sides && cnt < k) cnt += count_side(v, Direction::In, in_index);
      return cnt >= k;
    };
    members = vertex_map(members, g, has_support);
    if (members.count() == before) break;
    std::fill(member_flags.begin(), member_flags.end(), 0);
    for (VertexId v : members.to_ids()) member_flags[v] = 1;
  }
  return members;
}

CentralityResult temporal_pagerank(const TemporalGraph& g, const QueryWindow& w, int iterations,
                                   double damping, const AlgoOptions& opts) {
  (void)opts;
  if (iterations < 1) throw std::invalid_argument("pagerank needs iterations >= 1");
  if (!(damping >= 0.0 && damping < 1.0)) {
    throw std::invalid_argument("pagerank damping must lie in [0, 1)");
  }
  const QueryWindow cw = detail::clamp_window(w);
  const VertexId n = g.vertex_count();
  CentralityResult r;
  if (n == 0) return r;

  // Out-degrees on the window-filtered subgraph.
  std::vector<EdgeId> out_deg(n, 0);
  parallel_for(0, n, [&](std::size_t v) {
    out_deg[v] = g.out_csr().count_in_window(static_cast<VertexId>(v), cw);
  });

  const double uniform = 1.0 / static_cast<double>(n);
  std::vector<double> rank(n, uniform);
  std::vector<double> next(n, 0.0);
  std::vector<double> dangling(n, 0.0);

  for (int it = 0; it < iterations; ++it) {
    parallel_for(0, n, [&](std::size_t v) { dangling[v] = out_deg[v] == 0 ? rank[v] : 0.0; });
    const double dangling_mass = deterministic_sum(dangling);
    const double base = (1.0 - damping) * uniform + damping * dangling_mass * uniform;
    parallel_for(0, n, [&](std::size_t v) {
      double acc = 0.0;
      g.in_csr().for_each_in_window(static_cast<VertexId>(v), cw,
                                    [&](VertexId u, Timestamp, Timestamp, double, EdgeId) {
                                      acc += rank[u] / static_cast<double>(out_deg[u]);
                                    });
      next[v] = base + damping * acc;
    });
    rank.swap(next);
  }
  r.scores = std::move(rank);
  return r;
}

CentralityResult temporal_bc(const TemporalGraph& g, const QueryWindow& w,
                             const AlgoOptions& opts) {
  const QueryWindow cw = detail::clamp_window(w);
  const Ordering ord = opts.ordering.value_or(g.ordering());
  const ForceAccess force = opts.force_access.value_or(g.config().force_access);
  const VertexId n = g.vertex_count();
  const TemporalCsr& out = g.out_csr();
  const EdgeId n_e = out.edge_count();

  CentralityResult r;
  r.scores.assign(n, 0.0);
  if (n == 0) return r;

  // Sources: everything on small graphs, else the top out-degree vertices.
  std::vector<VertexId> sources(n);
  std::iota(sources.begin(), sources.end(), VertexId{0});
  if (n > 1000 && opts.bc_source_limit < sources.size()) {
    std::partial_sort(sources.begin(),
                      sources.begin() + static_cast<std::ptrdiff_t>(opts.bc_source_limit),
                      sources.end(), [&](VertexId a, VertexId b) {
                        const EdgeId da = g.out_csr().degree(a);
                        const EdgeId db = g.out_csr().degree(b);
                        return da != db ? da > db : a < b;
                      });
    sources.resize(opts.bc_source_limit);
    std::sort(sources.begin(), sources.end());
  }

  detail::EdgeRelaxWorkspace ws;
  std::vector<std::int64_t> sd_vertex(n, kInf);
  std::vector<std::uint64_t> sigma_vertex(n, 0);
  std::vector<std::int64_t> compact(n_e, -1);  // flat edge id -> reached slot

  for (const VertexId s : sources) {
    const std::vector<EdgeId> reached =
        detail::shortest_duration_edges(g, s, cw, ord, force, false, opts.stats, ws);
    if (reached.empty()) continue;
    const std::size_t m = reached.size();
    for (std::size_t i = 0; i < m; ++i) compact[reached[i]] = static_cast<std::int64_t>(i);

    // Per-vertex optima and touched vertex list.
    std::vector<VertexId> touched_vertices;
    for (const EdgeId e : reached) {
      const VertexId v = out.neighbor_at(e);
      if (sd_vertex[v] == kInf) touched_vertices.push_back(v);
      sd_vertex[v] = std::min(sd_vertex[v], ws.value[e]);
    }

    // Optimal-transition DAG over reached edge states: e -> f when f
    // extends e with an equal-cost step. Built as compact CSR adjacency.
    std::vector<EdgeId> head(m + 1, 0);
    std::vector<std::uint64_t> sigma(m, 0);
    std::vector<std::uint32_t> indeg(m, 0);
    auto for_each_transition = [&](std::size_t i, auto&& fn) {
      const EdgeId e = reached[i];
      const Interval iv = out.interval_at(e);
      const auto ew = detail::forward_window(cw, iv, ord);
      if (!ew) return;
      const std::int64_t base = ws.value[e];
      out.for_each_in_window(out.neighbor_at(e), *ew,
                             [&](VertexId, Timestamp ts, Timestamp te, double, EdgeId f) {
                               if (!ordering_holds(iv, Interval{ts, te}, ord)) return;
                               const std::int64_t fe = compact[f] >= 0 ? ws.value[f] : kInf;
                               if (fe != base + detail::duration_metric(ts, te, 0.0, false)) {
                                 return;
                               }
                               fn(static_cast<std::size_t>(compact[f]));
                             });
    };
    parallel_for(0, m, [&](std::size_t i) {
      EdgeId cnt = 0;
      for_each_transition(i, [&](std::size_t) { ++cnt; });
      head[i + 1] = cnt;
    });
    for (std::size_t i = 0; i < m; ++i) head[i + 1] += head[i];
    std::vector<std::uint32_t> adj(head[m]);
    parallel_for(0, m, [&](std::size_t i) {
      EdgeId at = head[i];
      for_each_transition(i, [&](std::size_t j) {
        adj[at++] = static_cast<std::uint32_t>(j);
        atomic_add(indeg[j], std::uint32_t{1});
      });
    });

    // Path counts: one for each window edge leaving the source at its own
    // cost, plus saturating sums over optimal predecessors, in topological
    // order (Kahn). Leftovers would mean degenerate zero-duration cycles
    // under Succeeds; they keep whatever counts accumulated.
    for (std::size_t i = 0; i < m; ++i) {
      const EdgeId e = reached[i];
      const Interval iv = out.interval_at(e);
      const std::int64_t own = detail::duration_metric(iv.start, iv.end, 0.0, false);
      bool from_source = false;
      // An edge seeds a path iff the compact-state value equals its own
      // metric and it leaves the source.
      if (ws.value[e] == own) {
        // neighbor_at on the out layout is the destination; the source side
        // needs the owning segment, identified via offsets.
        from_source = e >= out.offsets()[s] && e < out.offsets()[s + 1];
      }
      sigma[i] = from_source ? 1 : 0;
    }
    std::vector<std::uint32_t> order;
    order.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
      if (indeg[i] == 0) order.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::size_t qi = 0; qi < order.size(); ++qi) {
      const std::uint32_t i = order[qi];
      for (EdgeId a = head[i]; a < head[i + 1]; ++a) {
        const std::uint32_t j = adj[a];
        sigma[j] = sat_add(sigma[j], sigma[i]);
        if (--indeg[j] == 0) order.push_back(j);
      }
    }

    // Aggregate per-target path counts over terminal states.
    std::vector<VertexId> targets;
    for (std::size_t i = 0; i < m; ++i) {
      const VertexId t = out.neighbor_at(reached[i]);
      if (t == s || ws.value[reached[i]] != sd_vertex[t]) continue;
      if (sigma_vertex[t] == 0) targets.push_back(t);
      sigma_vertex[t] = sat_add(sigma_vertex[t], sigma[i]);
    }

    // Backward dependency accumulation over the processed topological
    // order; unprocessed (cyclic) states contribute nothing.
    std::vector<double> delta(m, 0.0);
    for (std::size_t qi = order.size(); qi-- > 0;) {
      const std::uint32_t i = order[qi];
      const EdgeId e = reached[i];
      const VertexId t = out.neighbor_at(e);
      double acc = 0.0;
      if (t != s && ws.value[e] == sd_vertex[t] && sigma_vertex[t] > 0) {
        acc += 1.0 / static_cast<double>(sigma_vertex[t]);
      }
      for (EdgeId a = head[i]; a < head[i + 1]; ++a) acc += delta[adj[a]];
      delta[i] = acc;
    }
    for (std::size_t qi = 0; qi < order.size(); ++qi) {
      const std::uint32_t i = order[qi];
      const EdgeId e = reached[i];
      const VertexId v = out.neighbor_at(e);
      if (v == s) continue;
      double through = 0.0;
      for (EdgeId a = head[i]; a < head[i + 1]; ++a) through += delta[adj[a]];
      r.scores[v] += static_cast<double>(sigma[i]) * through;
    }

    // Reset the shared workspaces for the next source.
    ws.reset(reached, kInf);
    for (const EdgeId e : reached) compact[e] = -1;
    for (const VertexId v : touched_vertices) sd_vertex[v] = kInf;
    for (const VertexId t : targets) sigma_vertex[t] = 0;
  }
  return r;
}

}  // namespace tgx
