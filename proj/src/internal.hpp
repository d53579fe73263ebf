#pragma once

// Shared internals of the algorithm suite (not installed).

#include <optional>
#include <vector>

#include "tgx/engine.hpp"
#include "tgx/types.hpp"

namespace tgx::detail {

// Edge timestamps are validated to fit int64 at graph build, so a window
// clamped to that range admits exactly the same edges while keeping the
// path-metric arithmetic signed-safe. Window starts beyond the range are
// rejected.
inline QueryWindow clamp_window(const QueryWindow& w) {
  constexpr auto kLimit = static_cast<Timestamp>(std::numeric_limits<std::int64_t>::max());
  if (w.t_a > kLimit) {
    throw std::invalid_argument("window start beyond the supported time range (2^63 - 1)");
  }
  QueryWindow out = w;
  if (out.t_b > kLimit) out.t_b = kLimit;
  return out;
}

inline void count_access(EdgeMapStats* stats, AccessMethod m) {
  if (stats == nullptr) return;
  atomic_add(m == AccessMethod::IndexLookup ? stats->index_decisions : stats->scan_decisions,
             std::uint64_t{1});
}

// Retrieval window for edges that may FOLLOW an edge with interval `iv`
// under the ordering; exact admission is still re-checked per edge.
inline std::optional<QueryWindow> forward_window(const QueryWindow& w, const Interval& iv,
                                                 Ordering ord) {
  QueryWindow ew = w;
  Timestamp lo = ew.t_a;
  switch (ord) {
    case Ordering::Succeeds:
      lo = iv.end;
      break;
    case Ordering::StrictlySucceeds:
      if (iv.end == kMaxTimestamp) return std::nullopt;
      lo = iv.end + 1;
      break;
    case Ordering::Overlaps:
      if (iv.start == kMaxTimestamp) return std::nullopt;
      lo = iv.start + 1;
      break;
  }
  if (lo > ew.t_a) ew.t_a = lo;
  if (ew.t_a > ew.t_b) return std::nullopt;
  return ew;
}

// Retrieval window for edges that may PRECEDE an edge with interval `iv`.
inline std::optional<QueryWindow> backward_window(const QueryWindow& w, const Interval& iv,
                                                  Ordering ord) {
  QueryWindow ew = w;
  Timestamp hi = ew.t_b;
  switch (ord) {
    case Ordering::Succeeds:
      hi = iv.start;
      break;
    case Ordering::StrictlySucceeds:
      if (iv.start == 0) return std::nullopt;
      hi = iv.start - 1;
      break;
    case Ordering::Overlaps:
      if (iv.end == 0) return std::nullopt;
      hi = iv.end - 1;
      break;
  }
  if (hi < ew.t_b) ew.t_b = hi;
  if (ew.t_a > ew.t_b) return std::nullopt;
  return ew;
}

// Workspace for edge-state relaxations, reusable across sources: values are
// reset through the returned touched list rather than wholesale.
struct EdgeRelaxWorkspace {
  std::vector<std::int64_t> value;
  std::vector<std::uint32_t> stamp;
  std::uint32_t round = 0;

  void ensure(std::size_t n_edges, std::int64_t fill) {
    if (value.size() != n_edges) {
      value.assign(n_edges, fill);
      stamp.assign(n_edges, 0);
      round = 0;
    }
  }
  void reset(const std::vector<EdgeId>& touched, std::int64_t fill) {
    for (EdgeId e : touched) value[e] = fill;
  }
};

// Shortest-duration relaxation over out-edge states: value[e] becomes the
// minimum metric sum over valid temporal paths from `source` ending with
// edge e. Returns the touched (reached) edge ids, sorted and unique.
std::vector<EdgeId> shortest_duration_edges(const TemporalGraph& g, VertexId source,
                                            const QueryWindow& w, Ordering ord, ForceAccess force,
                                            bool weighted, EdgeMapStats* stats,
                                            EdgeRelaxWorkspace& ws);

std::int64_t duration_metric(Timestamp start, Timestamp end, double weight, bool weighted);

}  // namespace tgx::detail
