#include "tgx/types.hpp"

#include "tgx/parallel.hpp"

namespace tgx {

const char* ordering_name(Ordering p) {
  switch (p) {
    case Ordering::Succeeds:
      return "succeeds";
    case Ordering::StrictlySucceeds:
      return "strictly-succeeds";
    case Ordering::Overlaps:
      return "overlaps";
  }
  return "?";
}

GraphMeta compute_meta(std::span<const TemporalEdge> edges, VertexId n_v, bool directed) {
  GraphMeta meta;
  meta.n_v = n_v;
  meta.n_e = edges.size();
  meta.directed = directed;
  meta.out_degree.assign(n_v, 0);
  meta.in_degree.assign(n_v, 0);

  // Path metrics accumulate in signed 64-bit, so timestamps must stay
  // below 2^63 (plenty for nanosecond epochs).
  constexpr Timestamp kTimeLimit = static_cast<Timestamp>(std::numeric_limits<std::int64_t>::max());

  EdgeId bad = kMaxTimestamp;
  parallel_for(0, edges.size(), [&](std::size_t i) {
    const TemporalEdge& e = edges[i];
    if (e.source >= n_v || e.destination >= n_v || e.end < e.start || e.end > kTimeLimit) {
      write_min(bad, static_cast<EdgeId>(i));
      return;
    }
    atomic_add(meta.out_degree[e.source], EdgeId{1});
    atomic_add(meta.in_degree[e.destination], EdgeId{1});
  });
  if (bad != kMaxTimestamp) {
    const TemporalEdge& e = edges[bad];
    if (e.source >= n_v || e.destination >= n_v) {
      throw std::out_of_range("edge " + std::to_string(bad) + ": endpoint (" +
                              std::to_string(e.source) + " -> " + std::to_string(e.destination) +
                              ") outside vertex range [0, " + std::to_string(n_v) + ")");
    }
    if (e.end < e.start) {
      throw std::out_of_range("edge " + std::to_string(bad) + ": end " + std::to_string(e.end) +
                              " precedes start " + std::to_string(e.start));
    }
    throw std::out_of_range("edge " + std::to_string(bad) + ": end " + std::to_string(e.end) +
                            " beyond the supported time range (2^63 - 1)");
  }
  return meta;
}

}  // namespace tgx
