#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tgx {

// Discrete time domain. Unsigned 64-bit covers epoch seconds as well as
// nanosecond traces without a format switch.
using Timestamp = std::uint64_t;
using VertexId = std::uint32_t;
using EdgeId = std::uint64_t;

inline constexpr Timestamp kMaxTimestamp = std::numeric_limits<Timestamp>::max();

struct Interval {
  Timestamp start = 0;
  Timestamp end = 0;

  friend bool operator==(const Interval&, const Interval&) = default;
};

// The atom of the whole system: a directed edge valid over [start, end].
// Weight defaults to 1.0 so unweighted algorithms run on any input.
struct TemporalEdge {
  VertexId source = 0;
  VertexId destination = 0;
  Timestamp start = 0;
  Timestamp end = 0;
  double weight = 1.0;

  constexpr Interval interval() const { return {start, end}; }
  constexpr Timestamp duration() const { return end - start; }

  friend bool operator==(const TemporalEdge&, const TemporalEdge&) = default;
};

// Closed interval [t_a, t_b] restricting which edges a traversal may use.
struct QueryWindow {
  Timestamp t_a = 0;
  Timestamp t_b = kMaxTimestamp;

  bool valid() const { return t_a <= t_b; }

  friend bool operator==(const QueryWindow&, const QueryWindow&) = default;
};

// Containment rule shared by every access path: an edge qualifies for a
// window iff its whole interval lies inside it. Exposed as the single
// predicate so index and scan retrieval cannot diverge.
constexpr bool window_contains(const QueryWindow& w, Timestamp start, Timestamp end) {
  return start >= w.t_a && end <= w.t_b;
}

constexpr bool window_contains(const QueryWindow& w, const Interval& iv) {
  return window_contains(w, iv.start, iv.end);
}

// Interval relations constraining consecutive edges on a temporal path.
enum class Ordering {
  Succeeds,          // end(a) <= start(b)
  StrictlySucceeds,  // end(a) <  start(b)
  Overlaps,          // start(a) < start(b) && start(b) <= end(a) && end(a) < end(b)
};

// True iff interval b stands in relation `p` to interval a.
constexpr bool ordering_holds(const Interval& a, const Interval& b, Ordering p) {
  switch (p) {
    case Ordering::Succeeds:
      return a.end <= b.start;
    case Ordering::StrictlySucceeds:
      return a.end < b.start;
    case Ordering::Overlaps:
      return a.start < b.start && b.start <= a.end && a.end < b.end;
  }
  return false;
}

constexpr bool ordering_holds(const TemporalEdge& a, const TemporalEdge& b, Ordering p) {
  return ordering_holds(a.interval(), b.interval(), p);
}

const char* ordering_name(Ordering p);

enum class Direction { Out, In };

inline Direction reverse(Direction d) {
  return d == Direction::Out ? Direction::In : Direction::Out;
}

// Vertex/edge counts plus per-vertex degrees. Vertices are labeled
// 0..n_v-1; for undirected graphs n_e counts each input edge once while
// the layouts materialize both orientations.
struct GraphMeta {
  VertexId n_v = 0;
  EdgeId n_e = 0;
  bool directed = true;
  std::vector<EdgeId> out_degree;
  std::vector<EdgeId> in_degree;

  EdgeId degree(VertexId v, Direction d) const {
    return d == Direction::Out ? out_degree[v] : in_degree[v];
  }
};

// Counts degrees and validates endpoints. Throws std::out_of_range naming
// the first offending edge index if an endpoint is >= n_v.
GraphMeta compute_meta(std::span<const TemporalEdge> edges, VertexId n_v, bool directed);

}  // namespace tgx
