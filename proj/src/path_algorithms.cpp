#include <algorithm>
#include <cmath>

#include "internal.hpp"
#include "tgx/algorithms.hpp"
#include "tgx/parallel.hpp"

namespace tgx {

namespace {

constexpr std::int64_t kInf = PathResult::kUnreachedMin;
constexpr std::int64_t kNegInf = PathResult::kUnreachedMax;

void require_vertex(const TemporalGraph& g, VertexId v, const char* what) {
  if (v >= g.vertex_count()) {
    throw std::out_of_range(std::string(what) + " " + std::to_string(v) +
                            " outside vertex range [0, " + std::to_string(g.vertex_count()) + ")");
  }
}

QueryWindow checked_window(const QueryWindow& w) {
  if (!w.valid()) throw std::invalid_argument("query window with t_a > t_b");
  return detail::clamp_window(w);
}

std::vector<EdgeId> merge_edge_buffers(std::vector<std::vector<EdgeId>>& bufs) {
  std::size_t total = 0;
  for (const auto& b : bufs) total += b.size();
  std::vector<EdgeId> out;
  out.reserve(total);
  for (auto& b : bufs) out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  return out;
}

// Edge-graph breadth-first reachability used by the Overlaps variants: each
// flat edge id of the chosen layout is visited at most once; on_reach(e,
// round) fires exactly once per reached edge (seeds are round 1).
template <class OnReach>
void edge_reachability(const TemporalGraph& g, const QueryWindow& w, Ordering ord,
                       ForceAccess force, Direction dir, VertexId anchor, EdgeMapStats* stats,
                       OnReach&& on_reach) {
  const TemporalCsr& csr = g.csr(dir);
  std::vector<std::uint8_t> reached(csr.edge_count(), 0);
  std::vector<EdgeId> frontier;

  detail::count_access(stats, g.for_each_window_edge(
                                  anchor, dir, w, force,
                                  [&](VertexId, Timestamp, Timestamp, double, EdgeId f) {
                                    if (compare_and_swap(reached[f], std::uint8_t{0},
                                                         std::uint8_t{1})) {
                                      frontier.push_back(f);
                                    }
                                  }));
  std::sort(frontier.begin(), frontier.end());
  std::uint32_t round = 1;
  for (EdgeId e : frontier) on_reach(e, round);

  while (!frontier.empty()) {
    ++round;
    std::vector<std::vector<EdgeId>> bufs(static_cast<std::size_t>(num_workers()));
    parallel_for(0, frontier.size(), [&](std::size_t i) {
      const EdgeId e = frontier[i];
      const Interval iv = csr.interval_at(e);
      const auto ew = dir == Direction::Out ? detail::forward_window(w, iv, ord)
                                            : detail::backward_window(w, iv, ord);
      if (!ew) return;
      const VertexId next = csr.neighbor_at(e);
      auto& buf = bufs[static_cast<std::size_t>(omp_get_thread_num())];
      detail::count_access(
          stats, g.for_each_window_edge(
                     next, dir, *ew, force,
                     [&](VertexId, Timestamp ts, Timestamp te, double, EdgeId f) {
                       const Interval fv{ts, te};
                       const bool ok = dir == Direction::Out ? ordering_holds(iv, fv, ord)
                                                             : ordering_holds(fv, iv, ord);
                       if (!ok) return;
                       if (compare_and_swap(reached[f], std::uint8_t{0}, std::uint8_t{1})) {
                         buf.push_back(f);
                       }
                     }));
    });
    frontier = merge_edge_buffers(bufs);
    for (EdgeId e : frontier) on_reach(e, round);
  }
}

PathResult earliest_arrival_overlaps(const TemporalGraph& g, VertexId source,
                                     const QueryWindow& w, ForceAccess force,
                                     EdgeMapStats* stats) {
  PathResult r;
  r.values.assign(g.vertex_count(), kInf);
  const TemporalCsr& out = g.out_csr();
  edge_reachability(g, w, Ordering::Overlaps, force, Direction::Out, source, stats,
                    [&](EdgeId e, std::uint32_t) {
                      write_min(r.values[out.neighbor_at(e)],
                                static_cast<std::int64_t>(out.end_at(e)));
                    });
  r.values[source] = static_cast<std::int64_t>(w.t_a);
  return r;
}

PathResult latest_departure_overlaps(const TemporalGraph& g, VertexId target,
                                     const QueryWindow& w, ForceAccess force,
                                     EdgeMapStats* stats) {
  PathResult r;
  r.values.assign(g.vertex_count(), kNegInf);
  const TemporalCsr& in = g.in_csr();
  edge_reachability(g, w, Ordering::Overlaps, force, Direction::In, target, stats,
                    [&](EdgeId e, std::uint32_t) {
                      write_max(r.values[in.neighbor_at(e)],
                                static_cast<std::int64_t>(in.start_at(e)));
                    });
  r.values[target] = static_cast<std::int64_t>(w.t_b);
  return r;
}

PathResult temporal_bfs_overlaps(const TemporalGraph& g, VertexId source, const QueryWindow& w,
                                 ForceAccess force, EdgeMapStats* stats) {
  PathResult r;
  r.values.assign(g.vertex_count(), kInf);
  const TemporalCsr& out = g.out_csr();
  edge_reachability(g, w, Ordering::Overlaps, force, Direction::Out, source, stats,
                    [&](EdgeId e, std::uint32_t round) {
                      write_min(r.values[out.neighbor_at(e)], static_cast<std::int64_t>(round));
                    });
  r.values[source] = 0;
  return r;
}

// Fastest under Overlaps: per edge, the maximum first-edge start over valid
// paths ending with that edge; the per-vertex optimum then minimizes
// end - departure.
PathResult fastest_overlaps(const TemporalGraph& g, VertexId source, const QueryWindow& w,
                            ForceAccess force, EdgeMapStats* stats) {
  const TemporalCsr& out = g.out_csr();
  const EdgeId n_e = out.edge_count();
  std::vector<std::int64_t> depart(n_e, kNegInf);
  std::vector<std::uint32_t> stamp(n_e, 0);
  std::uint32_t round = 0;

  std::vector<EdgeId> frontier;
  detail::count_access(stats, g.for_each_window_edge(
                                  source, Direction::Out, w, force,
                                  [&](VertexId, Timestamp ts, Timestamp, double, EdgeId f) {
                                    if (write_max(depart[f], static_cast<std::int64_t>(ts))) {
                                      frontier.push_back(f);
                                    }
                                  }));
  std::sort(frontier.begin(), frontier.end());
  frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());

  while (!frontier.empty()) {
    ++round;
    std::vector<std::int64_t> base(frontier.size());
    for (std::size_t i = 0; i < frontier.size(); ++i) base[i] = depart[frontier[i]];
    std::vector<std::vector<EdgeId>> bufs(static_cast<std::size_t>(num_workers()));
    parallel_for(0, frontier.size(), [&](std::size_t i) {
      const EdgeId e = frontier[i];
      const Interval iv = out.interval_at(e);
      const auto ew = detail::forward_window(w, iv, Ordering::Overlaps);
      if (!ew) return;
      auto& buf = bufs[static_cast<std::size_t>(omp_get_thread_num())];
      detail::count_access(
          stats,
          g.for_each_window_edge(out.neighbor_at(e), Direction::Out, *ew, force,
                                 [&](VertexId, Timestamp ts, Timestamp te, double, EdgeId f) {
                                   if (!ordering_holds(iv, Interval{ts, te}, Ordering::Overlaps)) {
                                     return;
                                   }
                                   if (write_max(depart[f], base[i]) &&
                                       claim_stamp(stamp[f], round)) {
                                     buf.push_back(f);
                                   }
                                 }));
    });
    frontier = merge_edge_buffers(bufs);
  }

  PathResult r;
  r.values.assign(g.vertex_count(), kInf);
  parallel_for(0, n_e, [&](std::size_t e) {
    if (depart[e] == kNegInf) return;
    const std::int64_t dur = static_cast<std::int64_t>(out.end_at(e)) - depart[e];
    write_min(r.values[out.neighbor_at(e)], dur);
  });
  r.values[source] = 0;
  return r;
}

}  // namespace

namespace detail {

std::int64_t duration_metric(Timestamp start, Timestamp end, double weight, bool weighted) {
  if (!weighted) return static_cast<std::int64_t>(end - start);
  const double rounded = std::nearbyint(weight);
  if (weight < 0.0 || rounded != weight) {
    throw std::invalid_argument("weighted shortest duration needs non-negative integer weights");
  }
  return static_cast<std::int64_t>(rounded);
}

std::vector<EdgeId> shortest_duration_edges(const TemporalGraph& g, VertexId source,
                                            const QueryWindow& w, Ordering ord, ForceAccess force,
                                            bool weighted, EdgeMapStats* stats,
                                            EdgeRelaxWorkspace& ws) {
  const TemporalCsr& out = g.out_csr();
  ws.ensure(out.edge_count(), kInf);

  std::vector<EdgeId> touched;
  std::vector<EdgeId> frontier;
  ++ws.round;
  detail::count_access(
      stats, g.for_each_window_edge(source, Direction::Out, w, force,
                                    [&](VertexId, Timestamp ts, Timestamp te, double wt,
                                        EdgeId f) {
                                      const std::int64_t m = duration_metric(ts, te, wt, weighted);
                                      if (write_min(ws.value[f], m) &&
                                          claim_stamp(ws.stamp[f], ws.round)) {
                                        frontier.push_back(f);
                                      }
                                    }));
  std::sort(frontier.begin(), frontier.end());
  touched.insert(touched.end(), frontier.begin(), frontier.end());

  while (!frontier.empty()) {
    ++ws.round;
    std::vector<std::int64_t> base(frontier.size());
    for (std::size_t i = 0; i < frontier.size(); ++i) base[i] = ws.value[frontier[i]];
    std::vector<std::vector<EdgeId>> bufs(static_cast<std::size_t>(num_workers()));
    parallel_for(0, frontier.size(), [&](std::size_t i) {
      const EdgeId e = frontier[i];
      const Interval iv = out.interval_at(e);
      const auto ew = detail::forward_window(w, iv, ord);
      if (!ew) return;
      auto& buf = bufs[static_cast<std::size_t>(omp_get_thread_num())];
      detail::count_access(
          stats,
          g.for_each_window_edge(out.neighbor_at(e), Direction::Out, *ew, force,
                                 [&](VertexId, Timestamp ts, Timestamp te, double wt, EdgeId f) {
                                   if (!ordering_holds(iv, Interval{ts, te}, ord)) return;
                                   const std::int64_t cand =
                                       base[i] + duration_metric(ts, te, wt, weighted);
                                   if (write_min(ws.value[f], cand) &&
                                       claim_stamp(ws.stamp[f], ws.round)) {
                                     buf.push_back(f);
                                   }
                                 }));
    });
    frontier = merge_edge_buffers(bufs);
    touched.insert(touched.end(), frontier.begin(), frontier.end());
  }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  return touched;
}

}  // namespace detail

PathResult earliest_arrival(const TemporalGraph& g, VertexId source, const QueryWindow& w,
                            const AlgoOptions& opts) {
  require_vertex(g, source, "source");
  const QueryWindow cw = checked_window(w);
  const Ordering ord = opts.ordering.value_or(g.ordering());
  const ForceAccess force = opts.force_access.value_or(g.config().force_access);
  if (ord == Ordering::Overlaps) return earliest_arrival_overlaps(g, source, cw, force, opts.stats);

  const VertexId n = g.vertex_count();
  PathResult r;
  r.values.assign(n, kInf);
  r.values[source] = static_cast<std::int64_t>(cw.t_a);

  std::vector<std::int64_t> snap;
  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t round = 0;
  const bool strict = ord == Ordering::StrictlySucceeds;

  VertexSubset frontier = VertexSubset::single(source, n);
  while (frontier.count() != 0) {
    ++round;
    snap = r.values;
    EdgeMapOptions emo;
    emo.direction = Direction::Out;
    emo.ordering = ord;
    emo.force_access = force;
    emo.stats = opts.stats;
    emo.min_start = [&](VertexId s) -> Timestamp {
      if (s == source) return cw.t_a;  // fresh paths may leave the source any time
      const auto b = static_cast<Timestamp>(snap[s]);
      return strict ? b + 1 : b;
    };
    auto update = [&](VertexId s, VertexId d, Timestamp ts, Timestamp te, double) -> bool {
      if (s != source) {
        const std::int64_t ps = snap[s];
        if (ps == kInf) return false;
        if (strict ? static_cast<std::int64_t>(ts) <= ps : static_cast<std::int64_t>(ts) < ps) {
          return false;
        }
      }
      return write_min(r.values[d], static_cast<std::int64_t>(te)) &&
             claim_stamp(stamp[d], round);
    };
    frontier = temporal_edge_map(g, cw, frontier, update, [](VertexId) { return true; }, emo);
  }
  return r;
}

PathResult latest_departure(const TemporalGraph& g, VertexId target, const QueryWindow& w,
                            const AlgoOptions& opts) {
  require_vertex(g, target, "target");
  const QueryWindow cw = checked_window(w);
  const Ordering ord = opts.ordering.value_or(g.ordering());
  const ForceAccess force = opts.force_access.value_or(g.config().force_access);
  if (ord == Ordering::Overlaps) return latest_departure_overlaps(g, target, cw, force, opts.stats);

  const VertexId n = g.vertex_count();
  PathResult r;
  r.values.assign(n, kNegInf);
  r.values[target] = static_cast<std::int64_t>(cw.t_b);

  std::vector<std::int64_t> snap;
  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t round = 0;
  const bool strict = ord == Ordering::StrictlySucceeds;

  VertexSubset frontier = VertexSubset::single(target, n);
  while (frontier.count() != 0) {
    ++round;
    snap = r.values;
    EdgeMapOptions emo;
    emo.direction = Direction::In;
    emo.ordering = ord;
    emo.force_access = force;
    emo.stats = opts.stats;
    emo.max_end = [&](VertexId s) -> Timestamp {
      if (s == target) return cw.t_b;  // arrival at the target only needs the window
      const auto b = static_cast<Timestamp>(snap[s]);
      if (strict && b == 0) return 0;  // re-check below rejects the leftovers
      return strict ? b - 1 : b;
    };
    auto update = [&](VertexId s, VertexId u, Timestamp ts, Timestamp te, double) -> bool {
      if (s != target) {
        const std::int64_t ps = snap[s];
        if (ps == kNegInf) return false;
        if (strict ? static_cast<std::int64_t>(te) >= ps : static_cast<std::int64_t>(te) > ps) {
          return false;
        }
      }
      return write_max(r.values[u], static_cast<std::int64_t>(ts)) &&
             claim_stamp(stamp[u], round);
    };
    frontier = temporal_edge_map(g, cw, frontier, update, [](VertexId) { return true; }, emo);
  }
  return r;
}

PathResult temporal_bfs(const TemporalGraph& g, VertexId source, const QueryWindow& w,
                        const AlgoOptions& opts) {
  require_vertex(g, source, "source");
  const QueryWindow cw = checked_window(w);
  const Ordering ord = opts.ordering.value_or(g.ordering());
  const ForceAccess force = opts.force_access.value_or(g.config().force_access);
  if (ord == Ordering::Overlaps) return temporal_bfs_overlaps(g, source, cw, force, opts.stats);

  const VertexId n = g.vertex_count();
  PathResult r;
  r.values.assign(n, kInf);
  r.values[source] = 0;

  // Hop minimality needs round-synchronous admission: arrivals are read
  // from the previous round's snapshot, so round k exactly covers paths of
  // at most k edges.
  std::vector<std::int64_t> arrival(n, kInf);
  std::vector<std::int64_t> snap;
  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t round = 0;
  const bool strict = ord == Ordering::StrictlySucceeds;

  VertexSubset frontier = VertexSubset::single(source, n);
  while (frontier.count() != 0) {
    ++round;
    snap = arrival;
    EdgeMapOptions emo;
    emo.direction = Direction::Out;
    emo.ordering = ord;
    emo.force_access = force;
    emo.stats = opts.stats;
    emo.min_start = [&](VertexId s) -> Timestamp {
      if (s == source) return cw.t_a;
      const auto b = static_cast<Timestamp>(snap[s]);
      return strict ? b + 1 : b;
    };
    auto update = [&](VertexId s, VertexId d, Timestamp ts, Timestamp te, double) -> bool {
      if (s != source) {
        const std::int64_t ps = snap[s];
        if (ps == kInf) return false;
        if (strict ? static_cast<std::int64_t>(ts) <= ps : static_cast<std::int64_t>(ts) < ps) {
          return false;
        }
      }
      const bool improved = write_min(arrival[d], static_cast<std::int64_t>(te));
      if (!improved) return false;
      compare_and_swap(r.values[d], kInf, static_cast<std::int64_t>(round));
      return claim_stamp(stamp[d], round);
    };
    frontier = temporal_edge_map(g, cw, frontier, update, [](VertexId) { return true; }, emo);
  }
  r.values[source] = 0;
  return r;
}

PathResult shortest_duration(const TemporalGraph& g, VertexId source, const QueryWindow& w,
                             const AlgoOptions& opts) {
  require_vertex(g, source, "source");
  const QueryWindow cw = checked_window(w);
  const Ordering ord = opts.ordering.value_or(g.ordering());
  const ForceAccess force = opts.force_access.value_or(g.config().force_access);

  detail::EdgeRelaxWorkspace ws;
  const std::vector<EdgeId> reached =
      detail::shortest_duration_edges(g, source, cw, ord, force, opts.weighted, opts.stats, ws);

  const TemporalCsr& out = g.out_csr();
  PathResult r;
  r.values.assign(g.vertex_count(), kInf);
  parallel_for(0, reached.size(), [&](std::size_t i) {
    const EdgeId e = reached[i];
    write_min(r.values[out.neighbor_at(e)], ws.value[e]);
  });
  r.values[source] = 0;
  return r;
}

PathResult fastest_path(const TemporalGraph& g, VertexId source, const QueryWindow& w,
                        const AlgoOptions& opts) {
  require_vertex(g, source, "source");
  const QueryWindow cw = checked_window(w);
  const Ordering ord = opts.ordering.value_or(g.ordering());
  const ForceAccess force = opts.force_access.value_or(g.config().force_access);
  if (ord == Ordering::Overlaps) return fastest_overlaps(g, source, cw, force, opts.stats);

  const VertexId n = g.vertex_count();
  const bool strict = ord == Ordering::StrictlySucceeds;

  // Candidate departure times: distinct start times of the source's
  // window-contained out-edges, processed in decreasing order. Arrivals
  // persist across candidates (a path departing at d also departs at any
  // earlier candidate), so each pass only seeds the newly admitted first
  // edges and relaxes incrementally.
  std::vector<std::pair<Timestamp, std::pair<VertexId, Timestamp>>> first_edges;
  g.out_csr().for_each_in_window(source, cw,
                                 [&](VertexId d, Timestamp ts, Timestamp te, double, EdgeId) {
                                   first_edges.push_back({ts, {d, te}});
                                 });
  std::sort(first_edges.begin(), first_edges.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  PathResult r;
  r.values.assign(n, kInf);
  r.values[source] = 0;
  if (first_edges.empty()) return r;

  std::vector<std::int64_t> arrival(n, kInf);
  std::vector<std::int64_t> snap;
  std::vector<std::uint32_t> stamp(n, 0);
  std::vector<std::uint32_t> touch_stamp(n, 0);
  std::uint32_t round = 0;
  std::uint32_t candidate_id = 0;

  std::size_t i = 0;
  while (i < first_edges.size()) {
    const Timestamp depart = first_edges[i].first;
    ++candidate_id;

    // Seed every first edge with this departure time.
    std::vector<VertexId> seeds;
    std::vector<VertexId> touched;
    for (; i < first_edges.size() && first_edges[i].first == depart; ++i) {
      const auto [d, te] = first_edges[i].second;
      if (write_min(arrival[d], static_cast<std::int64_t>(te))) {
        if (claim_stamp(touch_stamp[d], candidate_id)) touched.push_back(d);
        seeds.push_back(d);
      }
    }
    VertexSubset frontier = VertexSubset::from_ids(std::move(seeds), n);

    while (frontier.count() != 0) {
      ++round;
      snap = arrival;
      EdgeMapOptions emo;
      emo.direction = Direction::Out;
      emo.ordering = ord;
      emo.force_access = force;
      emo.stats = opts.stats;
      emo.min_start = [&](VertexId s) -> Timestamp {
        const auto b = static_cast<Timestamp>(snap[s]);
        return strict ? b + 1 : b;
      };
      std::vector<std::vector<VertexId>> touch_bufs(static_cast<std::size_t>(num_workers()));
      auto update = [&](VertexId s, VertexId d, Timestamp ts, Timestamp te, double) -> bool {
        const std::int64_t ps = snap[s];
        if (ps == kInf) return false;
        if (strict ? static_cast<std::int64_t>(ts) <= ps : static_cast<std::int64_t>(ts) < ps) {
          return false;
        }
        const bool improved = write_min(arrival[d], static_cast<std::int64_t>(te));
        if (!improved) return false;
        if (claim_stamp(touch_stamp[d], candidate_id)) {
          touch_bufs[static_cast<std::size_t>(omp_get_thread_num())].push_back(d);
        }
        return claim_stamp(stamp[d], round);
      };
      frontier = temporal_edge_map(g, cw, frontier, update, [](VertexId) { return true; }, emo);
      for (const auto& b : touch_bufs) touched.insert(touched.end(), b.begin(), b.end());
    }

    // Only vertices whose arrival improved during this candidate can get a
    // better duration bound from it.
    const auto dep64 = static_cast<std::int64_t>(depart);
    for (const VertexId v : touched) {
      write_min(r.values[v], arrival[v] - dep64);
    }
  }
  r.values[source] = 0;
  return r;
}

}  // namespace tgx
