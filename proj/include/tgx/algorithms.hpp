#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "tgx/engine.hpp"
#include "tgx/types.hpp"

namespace tgx {

// Per-vertex optimum of one temporal path metric. Minimizing metrics mark
// unreached vertices with kUnreachedMin, latest departure (a maximizing
// metric) with kUnreachedMax.
struct PathResult {
  static constexpr std::int64_t kUnreachedMin = std::numeric_limits<std::int64_t>::max();
  static constexpr std::int64_t kUnreachedMax = std::numeric_limits<std::int64_t>::min();

  std::vector<std::int64_t> values;
};

struct CentralityResult {
  std::vector<double> scores;
};

struct ComponentResult {
  std::vector<VertexId> labels;
};

struct AlgoOptions {
  std::optional<Ordering> ordering;         // defaults to the graph's
  std::optional<ForceAccess> force_access;  // defaults to the graph config's
  EdgeMapStats* stats = nullptr;
  // Shortest duration: sum edge weights instead of interval durations.
  bool weighted = false;
  // Betweenness: number of top out-degree sources used when n_v > 1000
  // (all sources are used on smaller graphs).
  std::size_t bc_source_limit = 100;
};

// Earliest arrival: per vertex, the minimum last-edge end time over
// temporal paths from source whose edges lie within the window and whose
// consecutive edges satisfy the ordering predicate; the first edge only
// needs to depart at or after t_a. values[source] = t_a.
PathResult earliest_arrival(const TemporalGraph& g, VertexId source, const QueryWindow& w,
                            const AlgoOptions& opts = {});

// Latest departure: per vertex, the maximum first-edge start time over
// temporal paths from that vertex TO `target`, traversed backward over
// in-edges; paths must arrive by t_b. values[target] = t_b; unreachable
// vertices hold kUnreachedMax.
PathResult latest_departure(const TemporalGraph& g, VertexId target, const QueryWindow& w,
                            const AlgoOptions& opts = {});

// Fastest: per vertex, the minimum (last edge end - first edge start).
PathResult fastest_path(const TemporalGraph& g, VertexId source, const QueryWindow& w,
                        const AlgoOptions& opts = {});

// Shortest duration: per vertex, the minimum sum of per-edge durations
// (or weights, with opts.weighted).
PathResult shortest_duration(const TemporalGraph& g, VertexId source, const QueryWindow& w,
                             const AlgoOptions& opts = {});

// Minimum number of edges over valid temporal paths.
PathResult temporal_bfs(const TemporalGraph& g, VertexId source, const QueryWindow& w,
                        const AlgoOptions& opts = {});

// Connected components of the undirected subgraph induced by edges fully
// inside the window (temporal ordering ignored); labels are the minimum
// vertex id in each component.
ComponentResult temporal_cc(const TemporalGraph& g, const QueryWindow& w,
                            const AlgoOptions& opts = {});

// Maximal vertex set where every member has >= k incident edges (counting
// multiplicity) within the window to members; iterative peeling.
VertexSubset temporal_kcore(const TemporalGraph& g, const QueryWindow& w, std::uint64_t k,
                            const AlgoOptions& opts = {});

// Brandes-style betweenness where path counts follow shortest-duration
// temporal paths. Raw (unnormalized) accumulation; counts saturate at
// 2^63 - 1.
CentralityResult temporal_bc(const TemporalGraph& g, const QueryWindow& w,
                             const AlgoOptions& opts = {});

// Power-iteration PageRank on the subgraph of window-contained edges, with
// out-degrees recomputed on the filtered subgraph and dangling mass spread
// uniformly. Scores sum to 1. Throws std::invalid_argument for
// iterations < 1.
CentralityResult temporal_pagerank(const TemporalGraph& g, const QueryWindow& w, int iterations,
                                   double damping = 0.85, const AlgoOptions& opts = {});

}  // namespace tgx
