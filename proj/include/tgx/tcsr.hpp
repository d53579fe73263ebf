#pragma once

#include <span>
#include <vector>

#include "tgx/types.hpp"

namespace tgx {

// One incident edge as seen from its owning vertex: the opposite endpoint
// plus the interval and weight.
struct NeighborEdge {
  VertexId neighbor = 0;
  Timestamp start = 0;
  Timestamp end = 0;
  double weight = 1.0;

  Interval interval() const { return {start, end}; }

  friend bool operator==(const NeighborEdge&, const NeighborEdge&) = default;
};

// Temporal CSR: classic offsets/adjacency extended with parallel start-time
// and end-time arrays (structure of arrays, one position per edge). Within
// each vertex segment edges are sorted by (start, end, neighbor, weight) so
// layouts are deterministic and start-time scans can exit early.
class TemporalCsr {
 public:
  TemporalCsr() = default;

  // Parallel build: counting + prefix sum + parallel placement +
  // per-segment sort. direction Out groups by source, In by destination.
  static TemporalCsr build(std::span<const TemporalEdge> edges, const GraphMeta& meta,
                           Direction direction);

  VertexId vertex_count() const { return n_v_; }
  EdgeId edge_count() const { return static_cast<EdgeId>(neighbors_.size()); }
  EdgeId degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

  std::span<const EdgeId> offsets() const { return offsets_; }
  std::span<const VertexId> neighbors() const { return neighbors_; }
  std::span<const Timestamp> starts() const { return starts_; }
  std::span<const Timestamp> ends() const { return ends_; }
  std::span<const double> weights() const { return weights_; }

  VertexId neighbor_at(EdgeId i) const { return neighbors_[i]; }
  Timestamp start_at(EdgeId i) const { return starts_[i]; }
  Timestamp end_at(EdgeId i) const { return ends_[i]; }
  double weight_at(EdgeId i) const { return weights_[i]; }
  Interval interval_at(EdgeId i) const { return {starts_[i], ends_[i]}; }

  // All incident edges of v whose interval lies within the window, in
  // segment order. Executed as a (chunked) parallel filter for large
  // segments.
  std::vector<NeighborEdge> scan_neighbors(VertexId v, const QueryWindow& w) const;

  // Callback form used on hot paths; f(neighbor, start, end, weight,
  // flat_edge_index), sequential over the segment. Segments are sorted by
  // start time, so the scan stops once start exceeds w.t_b.
  template <class F>
  void for_each_in_window(VertexId v, const QueryWindow& w, F&& f) const {
    const EdgeId lo = offsets_[v];
    const EdgeId hi = offsets_[v + 1];
    for (EdgeId i = lo; i < hi; ++i) {
      const Timestamp s = starts_[i];
      if (s > w.t_b) break;
      if (s >= w.t_a && ends_[i] <= w.t_b) f(neighbors_[i], s, ends_[i], weights_[i], i);
    }
  }

  // Number of edges of v inside the window (exact selectivity numerator).
  EdgeId count_in_window(VertexId v, const QueryWindow& w) const;

  // Reconstructs the edge multiset. direction tells how this layout was
  // built so sources and destinations land on the right side.
  std::vector<TemporalEdge> flatten(Direction direction) const;

 private:
  VertexId n_v_ = 0;
  std::vector<EdgeId> offsets_{0};
  std::vector<VertexId> neighbors_;
  std::vector<Timestamp> starts_;
  std::vector<Timestamp> ends_;
  std::vector<double> weights_;
};

}  // namespace tgx
