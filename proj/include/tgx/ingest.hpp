#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tgx/types.hpp"

namespace tgx {

// Whitespace-separated text lines `src dst start [end] [weight]`, with
// `#`-prefixed comment lines; every data line in one file must carry the
// same column count (3, 4, or 5). Files ending in .gz are read/written
// gzip-compressed.
struct LoadOptions {
  // Default expects non-negative integer ids used as-is (n_v = max id + 1,
  // so the written form round-trips). With map_ids, arbitrary string ids
  // are densified to 0..n_v-1 in first-appearance order.
  bool map_ids = false;
  // End-time synthesis for 3-column files: end = start + uniform[1, d_max].
  std::uint64_t seed = 1;
  Timestamp end_sample_max = 3600;
};

struct LoadResult {
  std::vector<TemporalEdge> edges;
  GraphMeta meta;
};

// Parses the file; throws std::runtime_error naming the line number for
// malformed lines, intervals with end < start, or a changing column count.
LoadResult load_edge_list(const std::string& path, const LoadOptions& options = {});

// Emits `src dst start end weight`, one edge per line, LF terminators.
void write_edge_list(const std::string& path, std::span<const TemporalEdge> edges);

// end = start + U with U ~ uniform integer [1, d_max], deterministic per
// seed, consumed in edge order.
void sample_end_times(std::vector<TemporalEdge>& edges, std::uint64_t seed, Timestamp d_max);

// Synthetic temporal graphs: sources drawn proportionally to log-normal
// per-vertex weights, per-source start times as cumulative exponential
// inter-arrivals (rounded up to >= 1 tick), uniform integer durations,
// destinations uniform.
struct GeneratorConfig {
  VertexId n_v = 0;
  EdgeId n_e = 0;
  double mu = 1.0;
  double sigma = 1.5;
  double lambda = 1.0;
  Timestamp d_min = 1;
  Timestamp d_max = 3600;
  std::uint64_t seed = 42;
};

std::vector<TemporalEdge> generate_synthetic(const GeneratorConfig& cfg);

// [t_a, t_b] where t_a is the (1 - fraction) nearest-rank quantile of edge
// start times and t_b the maximum end time, so ceil(fraction * n_e) of the
// most recent edges (by start) match, up to quantile ties. fraction must be
// in (0, 1]; throws std::invalid_argument otherwise or on an empty edge set.
QueryWindow window_for_recent_fraction(std::span<const TemporalEdge> edges, double fraction);

}  // namespace tgx
