#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "tgx/parallel.hpp"
#include "tgx/selective_index.hpp"
#include "tgx/tcsr.hpp"
#include "tgx/types.hpp"

namespace tgx {

enum class ForceAccess { Auto, Index, Scan };

struct EngineConfig {
  EdgeId index_cutoff = VertexIndexRegistry::kDefaultCutoff;
  CostModelParams cost;
  Ordering ordering = Ordering::StrictlySucceeds;
  ForceAccess force_access = ForceAccess::Auto;
};

// Immutable assembly of both T-CSR layouts plus the selective index
// registry. Undirected inputs are symmetrized at build time (each edge
// materialized in both orientations; self-loops once), so meta.n_e keeps
// the logical edge count while the layouts store the materialized one.
class TemporalGraph {
 public:
  static TemporalGraph build(std::vector<TemporalEdge> edges, VertexId n_v, bool directed,
                             const EngineConfig& config = {});

  const GraphMeta& meta() const { return meta_; }
  VertexId vertex_count() const { return meta_.n_v; }
  const TemporalCsr& csr(Direction d) const { return d == Direction::Out ? out_ : in_; }
  const TemporalCsr& out_csr() const { return out_; }
  const TemporalCsr& in_csr() const { return in_; }
  const VertexIndexRegistry& registry() const { return registry_; }
  const EngineConfig& config() const { return config_; }
  Ordering ordering() const { return config_.ordering; }

  EdgeId degree(VertexId v, Direction d) const { return csr(d).degree(v); }

  // Retrieves v's incident edges within the window through the access
  // method the cost model picks (or the forced one); f(neighbor, start,
  // end, weight, flat_edge_index). Returns the method actually used.
  template <class F>
  AccessMethod for_each_window_edge(VertexId v, Direction d, const QueryWindow& w,
                                    ForceAccess force, F&& f) const {
    const TemporalCsr& c = csr(d);
    const PrioritySearchTree* tree = registry_.index(v, d);
    bool use_index = false;
    switch (force) {
      case ForceAccess::Scan:
        break;
      case ForceAccess::Index:
        use_index = tree != nullptr;
        break;
      case ForceAccess::Auto:
        use_index = tree != nullptr &&
                    choose_access_method(v, registry_, d, w, config_.cost).method ==
                        AccessMethod::IndexLookup;
        break;
    }
    if (use_index) {
      const EdgeId base = c.offsets()[v];
      tree->for_each_in_window(w, [&](const NeighborEdge& e, std::uint32_t pos) {
        f(e.neighbor, e.start, e.end, e.weight, base + pos);
      });
      return AccessMethod::IndexLookup;
    }
    c.for_each_in_window(v, w, f);
    return AccessMethod::Scan;
  }

 private:
  GraphMeta meta_;
  TemporalCsr out_;
  TemporalCsr in_;
  VertexIndexRegistry registry_;
  EngineConfig config_;
};

// Frontier representation: sparse (sorted unique vertex ids) or dense
// (byte flags over all vertices).
class VertexSubset {
 public:
  VertexSubset() = default;

  static VertexSubset empty(VertexId n_v) { return VertexSubset(n_v); }

  static VertexSubset single(VertexId v, VertexId n_v) {
    VertexSubset s(n_v);
    s.ids_ = {v};
    return s;
  }

  static VertexSubset all(VertexId n_v) {
    VertexSubset s(n_v);
    s.dense_ = true;
    s.flags_.assign(n_v, 1);
    s.count_ = n_v;
    return s;
  }

  // Takes arbitrary ids, sorts and deduplicates.
  static VertexSubset from_ids(std::vector<VertexId> ids, VertexId n_v);

  static VertexSubset from_flags(std::vector<std::uint8_t> flags);

  VertexId universe() const { return n_v_; }
  std::size_t count() const { return dense_ ? count_ : ids_.size(); }
  bool is_dense() const { return dense_; }

  bool contains(VertexId v) const;

  std::span<const VertexId> ids() const { return ids_; }  // sparse form only
  const std::vector<std::uint8_t>& flags() const { return flags_; }

  std::vector<VertexId> to_ids() const;  // sorted, either representation
  const std::vector<std::uint8_t>& as_flags(std::vector<std::uint8_t>& scratch) const;

  bool set_equal(const VertexSubset& other) const;

 private:
  explicit VertexSubset(VertexId n_v) : n_v_(n_v) {}

  VertexId n_v_ = 0;
  bool dense_ = false;
  std::vector<VertexId> ids_;
  std::vector<std::uint8_t> flags_;
  std::size_t count_ = 0;
};

struct TemporalEdgeSubset {
  std::vector<TemporalEdge> members;
};

struct EdgeMapStats {
  std::uint64_t index_decisions = 0;
  std::uint64_t scan_decisions = 0;
};

struct EdgeMapOptions {
  Direction direction = Direction::Out;
  std::optional<Ordering> ordering;          // defaults to the graph's
  std::optional<ForceAccess> force_access;   // defaults to the graph config's
  // Per-frontier-vertex retrieval tightening from path state: raises the
  // start lower bound / lowers the end upper bound of the window used for
  // the vertex's retrieval. The update callback still receives the full
  // interval and re-checks, so correctness never depends on these.
  std::function<Timestamp(VertexId)> min_start;
  std::function<Timestamp(VertexId)> max_end;
  // Under the Overlaps ordering: the interval of the in-edge recorded on
  // the path state for a frontier vertex. Candidate out-edges that do not
  // stand in the Overlaps relation to it are dropped before update.
  std::function<std::optional<Interval>(VertexId)> prev_interval;
  EdgeMapStats* stats = nullptr;
  // Fraction of the layout's edge count above which the dense (pull-style)
  // representation is used; Ligra's published constant by default.
  std::optional<double> dense_threshold;
};

// Applies f to every member in parallel; keeps the members where f returned
// true. f may mutate per-vertex algorithm state (it must be safe under
// concurrent invocation on distinct vertices).
template <class F>
VertexSubset vertex_map(const VertexSubset& u, const TemporalGraph& g, F&& f);

template <class F>
TemporalEdgeSubset temporal_edge_map_edges(const TemporalEdgeSubset& u, const TemporalGraph& g,
                                           F&& f);

// Frontier expansion: for every frontier vertex, retrieves its incident
// edges within the window via the per-vertex access decision, skips targets
// failing cond, applies update in parallel, and returns the set of targets
// for which update returned true. Deduplication of the output rides on the
// update function's success-at-most-once contract (CAS-style flags), as in
// the frontier algorithms. Switches to a dense pull-style pass over all
// vertices when frontier size plus its degree sum exceeds the threshold.
template <class Update, class Cond>
VertexSubset temporal_edge_map(const TemporalGraph& g, const QueryWindow& w,
                               const VertexSubset& frontier, Update&& update, Cond&& cond,
                               const EdgeMapOptions& opts = {});

// --- template implementations ------------------------------------------

namespace detail {

inline std::vector<VertexId> merge_buffers(std::vector<std::vector<VertexId>>& bufs) {
  std::size_t total = 0;
  for (const auto& b : bufs) total += b.size();
  std::vector<VertexId> out;
  out.reserve(total);
  for (auto& b : bufs) out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace detail

template <class F>
VertexSubset vertex_map(const VertexSubset& u, const TemporalGraph& g, F&& f) {
  (void)g;
  if (u.is_dense()) {
    std::vector<std::uint8_t> out(u.universe(), 0);
    const auto& flags = u.flags();
    std::size_t kept = 0;
    parallel_for(0, flags.size(), [&](std::size_t v) {
      if (flags[v] && f(static_cast<VertexId>(v))) {
        out[v] = 1;
        atomic_add(kept, std::size_t{1});
      }
    });
    return VertexSubset::from_flags(std::move(out));
  }
  const auto ids = u.ids();
  std::vector<std::vector<VertexId>> bufs(static_cast<std::size_t>(num_workers()));
  parallel_for(0, ids.size(), [&](std::size_t i) {
    if (f(ids[i])) bufs[static_cast<std::size_t>(omp_get_thread_num())].push_back(ids[i]);
  });
  return VertexSubset::from_ids(detail::merge_buffers(bufs), u.universe());
}

template <class F>
TemporalEdgeSubset temporal_edge_map_edges(const TemporalEdgeSubset& u, const TemporalGraph& g,
                                           F&& f) {
  (void)g;
  std::vector<std::uint8_t> keep(u.members.size(), 0);
  parallel_for(0, u.members.size(), [&](std::size_t i) { keep[i] = f(u.members[i]) ? 1 : 0; });
  TemporalEdgeSubset out;
  for (std::size_t i = 0; i < u.members.size(); ++i) {
    if (keep[i]) out.members.push_back(u.members[i]);
  }
  return out;
}

template <class Update, class Cond>
VertexSubset temporal_edge_map(const TemporalGraph& g, const QueryWindow& w,
                               const VertexSubset& frontier, Update&& update, Cond&& cond,
                               const EdgeMapOptions& opts) {
  if (!w.valid()) throw std::invalid_argument("temporal_edge_map: window with t_a > t_b");
  const Direction dir = opts.direction;
  const Ordering ord = opts.ordering.value_or(g.ordering());
  const ForceAccess force = opts.force_access.value_or(g.config().force_access);
  const TemporalCsr& fwd = g.csr(dir);
  const VertexId n_v = g.vertex_count();

  if (frontier.count() == 0) return VertexSubset::empty(n_v);

  // Effective retrieval window for one frontier vertex; nullopt when the
  // tightened bounds cross (nothing can match).
  auto effective_window = [&](VertexId s) -> std::optional<QueryWindow> {
    QueryWindow ew = w;
    if (opts.min_start) {
      const Timestamp lo = opts.min_start(s);
      if (lo > ew.t_a) ew.t_a = lo;
    }
    if (opts.max_end) {
      const Timestamp hi = opts.max_end(s);
      if (hi < ew.t_b) ew.t_b = hi;
    }
    if (ew.t_a > ew.t_b) return std::nullopt;
    return ew;
  };

  auto overlap_gate = [&](VertexId s) -> std::optional<std::optional<Interval>> {
    // outer nullopt: vertex can emit nothing; inner: no recorded in-edge,
    // every window edge qualifies (path origin).
    if (ord != Ordering::Overlaps || !opts.prev_interval) {
      return std::optional<std::optional<Interval>>{std::optional<Interval>{}};
    }
    return std::optional<std::optional<Interval>>{opts.prev_interval(s)};
  };

  std::uint64_t index_decisions = 0;
  std::uint64_t scan_decisions = 0;

  // Representation switch, after Ligra: sparse push while the frontier and
  // its degree sum stay small relative to the edge count.
  const double threshold_fraction = opts.dense_threshold.value_or(1.0 / 20.0);
  std::uint64_t frontier_mass = frontier.count();
  if (frontier.is_dense()) {
    const auto& fl = frontier.flags();
    parallel_for(0, fl.size(), [&](std::size_t v) {
      if (fl[v]) atomic_add(frontier_mass, fwd.degree(static_cast<VertexId>(v)));
    });
  } else {
    for (VertexId s : frontier.ids()) frontier_mass += fwd.degree(s);
  }
  const bool go_dense =
      static_cast<double>(frontier_mass) >
      threshold_fraction * static_cast<double>(fwd.edge_count());

  VertexSubset result;
  if (!go_dense) {
    const std::vector<VertexId> srcs =
        frontier.is_dense() ? frontier.to_ids()
                            : std::vector<VertexId>(frontier.ids().begin(), frontier.ids().end());
    std::vector<std::vector<VertexId>> bufs(static_cast<std::size_t>(num_workers()));
    parallel_for(0, srcs.size(), [&](std::size_t i) {
      const VertexId s = srcs[i];
      const auto ew = effective_window(s);
      if (!ew) return;
      const auto gate = overlap_gate(s);
      auto& buf = bufs[static_cast<std::size_t>(omp_get_thread_num())];
      const AccessMethod m = g.for_each_window_edge(
          s, dir, *ew, force,
          [&](VertexId d, Timestamp ts, Timestamp te, double wt, EdgeId) {
            if (*gate && !ordering_holds(**gate, Interval{ts, te}, Ordering::Overlaps)) return;
            if (!cond(d)) return;
            if (update(s, d, ts, te, wt)) buf.push_back(d);
          });
      if (opts.stats) {
        atomic_add(m == AccessMethod::IndexLookup ? index_decisions : scan_decisions,
                   std::uint64_t{1});
      }
    });
    result = VertexSubset::from_ids(detail::merge_buffers(bufs), n_v);
  } else {
    std::vector<std::uint8_t> frontier_scratch;
    const std::vector<std::uint8_t>& in_frontier = frontier.as_flags(frontier_scratch);
    const TemporalCsr& rev = g.csr(reverse(dir));
    std::vector<std::uint8_t> out_flags(n_v, 0);
    parallel_for(0, n_v, [&](std::size_t dv) {
      const VertexId d = static_cast<VertexId>(dv);
      if (!cond(d)) return;
      const AccessMethod m = g.for_each_window_edge(
          d, reverse(dir), w, force,
          [&](VertexId s, Timestamp ts, Timestamp te, double wt, EdgeId) {
            if (!in_frontier[s]) return;
            const auto ew = effective_window(s);
            if (!ew || !window_contains(*ew, ts, te)) return;
            const auto gate = overlap_gate(s);
            if (*gate && !ordering_holds(**gate, Interval{ts, te}, Ordering::Overlaps)) return;
            if (!cond(d)) return;  // may have flipped mid-scan
            if (update(s, d, ts, te, wt)) out_flags[d] = 1;
          });
      if (opts.stats) {
        atomic_add(m == AccessMethod::IndexLookup ? index_decisions : scan_decisions,
                   std::uint64_t{1});
      }
    });
    result = VertexSubset::from_flags(std::move(out_flags));
  }

  if (opts.stats) {
    opts.stats->index_decisions += index_decisions;
    opts.stats->scan_decisions += scan_decisions;
  }
  return result;
}

}  // namespace tgx
