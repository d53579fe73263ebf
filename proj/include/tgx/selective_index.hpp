#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tgx/pst.hpp"
#include "tgx/tcsr.hpp"
#include "tgx/types.hpp"

namespace tgx {

// 2D density histogram over (start time, duration) of one vertex's incident
// edges: 100 equal-width buckets per dimension over the observed min-max
// range. A dimension with a single observed value collapses to one bucket.
class DensityHistogram {
 public:
  static constexpr int kBucketsPerDim = 100;

  static DensityHistogram build(std::span<const NeighborEdge> edges);

  std::uint64_t total() const { return total_; }
  int start_buckets() const { return start_buckets_; }
  int duration_buckets() const { return dur_buckets_; }
  std::span<const std::uint32_t> buckets() const { return counts_; }

  // Estimated number of edges matching the window under the containment
  // rule, i.e. the mass of the region {start >= t_a && start + duration
  // <= t_b} with fractional (uniform-within-bucket) overlap for partially
  // covered buckets. Always within [0, total].
  double estimate(const QueryWindow& w) const;

 private:
  Timestamp start_min_ = 0, start_max_ = 0;
  Timestamp dur_min_ = 0, dur_max_ = 0;
  int start_buckets_ = 1, dur_buckets_ = 1;
  std::uint64_t total_ = 0;
  std::vector<std::uint32_t> counts_;     // row-major [start_bucket][dur_bucket]
  std::vector<std::uint64_t> row_sums_;  // per start bucket
};

struct CostModelParams {
  double c = 1.0;        // index per-operation cost constant
  double c_prime = 1.0;  // scan per-operation cost constant
  double theta_sel = 0.2;
};

enum class AccessMethod { IndexLookup, Scan };

struct AccessDecision {
  AccessMethod method = AccessMethod::Scan;
  // Estimated selectivity and match count; -1 when the vertex has no
  // histogram and nothing was estimated.
  double beta_hat = -1.0;
  double k_hat = -1.0;
};

// Estimated cost of answering via the tree: c * (log2(degree) + k).
// Throws std::domain_error for degree 0.
double cost_index_lookup(EdgeId degree, double k, double c);

// Estimated cost of a full-segment scan: c' * degree.
double cost_scan(EdgeId degree, double c_prime);

// Selective indexing: vertices whose degree in a direction meets the cutoff
// get a priority search tree over that direction's incident edges plus a
// density histogram; everything else stays on the T-CSR scan path. Lookup
// goes through a sparse associative map from vertex id to pool slot.
class VertexIndexRegistry {
 public:
  static constexpr EdgeId kDefaultCutoff = 2048;

  VertexIndexRegistry() = default;

  // Builds indexes for both directions in parallel over qualifying
  // vertices. Trees are max-heap on start / BST on end, the configuration
  // window containment translates to. Throws std::invalid_argument for
  // cutoff < 1.
  static VertexIndexRegistry build(const TemporalCsr& out, const TemporalCsr& in, EdgeId cutoff);

  EdgeId cutoff() const { return cutoff_; }

  const PrioritySearchTree* index(VertexId v, Direction d) const;
  const DensityHistogram* histogram(VertexId v, Direction d) const;

  std::span<const VertexId> indexed_vertices(Direction d) const {
    return ids_[d == Direction::Out ? 0 : 1];
  }
  std::size_t indexed_count(Direction d) const { return indexed_vertices(d).size(); }

 private:
  EdgeId cutoff_ = kDefaultCutoff;
  std::unordered_map<VertexId, std::size_t> slot_of_[2];
  std::vector<VertexId> ids_[2];
  std::vector<PrioritySearchTree> trees_[2];
  std::vector<DensityHistogram> hists_[2];
};

// Runtime access-method decision for one vertex and window: no index means
// scan; otherwise estimate beta = k_hat / degree from the histogram and
// pick the tree iff beta <= theta_sel (ties go to the tree).
AccessDecision choose_access_method(VertexId v, const VertexIndexRegistry& registry, Direction d,
                                    const QueryWindow& w, const CostModelParams& params);

// --- Cost-constant calibration -----------------------------------------

struct CalibrationPoint {
  EdgeId degree = 0;
  EdgeId matches = 0;
  double index_seconds = 0.0;
  double scan_seconds = 0.0;
};

// Least-squares fit of c and c_prime through the origin against the cost
// formulas. Throws std::invalid_argument on an empty sample.
CostModelParams fit_cost_constants(std::span<const CalibrationPoint> points,
                                   double theta_sel = 0.2);

// Times both access paths on the given (vertex, window) workload over
// indexed vertices and fits the constants. `timer` returns seconds for one
// retrieval and exists so tests can inject synthetic timings; when empty, a
// wall-clock measurement of the real paths is used. Throws
// std::invalid_argument if the workload covers no indexed vertex.
CostModelParams calibrate_constants(
    const TemporalCsr& csr, const VertexIndexRegistry& registry, Direction d,
    std::span<const std::pair<VertexId, QueryWindow>> workload,
    const std::function<double(VertexId, const QueryWindow&, AccessMethod)>& timer = {});

}  // namespace tgx
