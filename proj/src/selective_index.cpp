#include "tgx/selective_index.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "tgx/parallel.hpp"

namespace tgx {

namespace {

// Bucket index with exact integer arithmetic (values span the full 64-bit
// range, so the scaling runs in 128 bits).
int bucket_of(Timestamp x, Timestamp lo, Timestamp hi, int buckets) {
  if (buckets == 1 || hi == lo) return 0;
  const unsigned __int128 num =
      static_cast<unsigned __int128>(x - lo) * static_cast<unsigned>(buckets);
  int b = static_cast<int>(num / (hi - lo));
  if (b >= buckets) b = buckets - 1;
  return b;
}

// Fraction of the rectangle [s0,s1] x [d0,d1] lying in the region
// {s >= ta  &&  s + d <= tb}. Degenerate (point) dimensions evaluate the
// point instead of a length ratio.
double region_fraction(double s0, double s1, double d0, double d1, double ta, double tb) {
  const bool s_point = s1 <= s0;
  const bool d_point = d1 <= d0;

  if (s_point && d_point) {
    return (s0 >= ta && s0 + d0 <= tb) ? 1.0 : 0.0;
  }
  if (s_point) {
    if (s0 < ta) return 0.0;
    const double dmax = std::min(d1, tb - s0);
    if (dmax <= d0) return 0.0;
    return (dmax - d0) / (d1 - d0);
  }
  if (d_point) {
    const double a = std::max(s0, ta);
    const double b = std::min(s1, tb - d0);
    if (b <= a) return 0.0;
    return (b - a) / (s1 - s0);
  }

  const double a = std::max(s0, ta);
  if (a >= s1) return 0.0;
  const double height = d1 - d0;
  // Full-height part: s <= tb - d1. Linear part: height tb - s - d0 until
  // it hits zero at s = tb - d0.
  const double full_hi = std::min(s1, tb - d1);
  double area = 0.0;
  if (full_hi > a) area += (full_hi - a) * height;
  const double lin_lo = std::max(a, tb - d1);
  const double lin_hi = std::min(s1, tb - d0);
  if (lin_hi > lin_lo) {
    const double h_lo = tb - d0 - lin_lo;
    const double h_hi = tb - d0 - lin_hi;
    area += 0.5 * (h_lo + h_hi) * (lin_hi - lin_lo);
  }
  return area / ((s1 - s0) * height);
}

}  // namespace

DensityHistogram DensityHistogram::build(std::span<const NeighborEdge> edges) {
  DensityHistogram h;
  h.total_ = edges.size();
  if (edges.empty()) {
    h.counts_.assign(1, 0);
    return h;
  }
  h.start_min_ = kMaxTimestamp;
  h.start_max_ = 0;
  h.dur_min_ = kMaxTimestamp;
  h.dur_max_ = 0;
  for (const NeighborEdge& e : edges) {
    const Timestamp d = e.end - e.start;
    h.start_min_ = std::min(h.start_min_, e.start);
    h.start_max_ = std::max(h.start_max_, e.start);
    h.dur_min_ = std::min(h.dur_min_, d);
    h.dur_max_ = std::max(h.dur_max_, d);
  }
  h.start_buckets_ = h.start_min_ == h.start_max_ ? 1 : kBucketsPerDim;
  h.dur_buckets_ = h.dur_min_ == h.dur_max_ ? 1 : kBucketsPerDim;
  h.counts_.assign(static_cast<std::size_t>(h.start_buckets_) * h.dur_buckets_, 0);
  h.row_sums_.assign(h.start_buckets_, 0);
  for (const NeighborEdge& e : edges) {
    const int sb = bucket_of(e.start, h.start_min_, h.start_max_, h.start_buckets_);
    const int db = bucket_of(e.end - e.start, h.dur_min_, h.dur_max_, h.dur_buckets_);
    ++h.counts_[static_cast<std::size_t>(sb) * h.dur_buckets_ + db];
    ++h.row_sums_[sb];
  }
  return h;
}

double DensityHistogram::estimate(const QueryWindow& w) const {
  if (total_ == 0) return 0.0;
  const double ta = static_cast<double>(w.t_a);
  const double tb = static_cast<double>(w.t_b);
  const double s_lo = static_cast<double>(start_min_);
  const double s_span = static_cast<double>(start_max_ - start_min_);
  const double d_lo = static_cast<double>(dur_min_);
  const double d_span = static_cast<double>(dur_max_ - dur_min_);
  const double s_width = start_buckets_ == 1 ? 0.0 : s_span / start_buckets_;
  const double d_width = dur_buckets_ == 1 ? 0.0 : d_span / dur_buckets_;

  // Highest duration extent of any bucket, for the whole-row fast path.
  const double d_top = dur_buckets_ == 1 ? d_lo : d_lo + d_span;

  double acc = 0.0;
  for (int i = 0; i < start_buckets_; ++i) {
    if (row_sums_[i] == 0) continue;
    const double s0 = s_lo + i * s_width;
    const double s1 = start_buckets_ == 1 ? s0 : s_lo + (i + 1) * s_width;

    // Fraction of the row satisfying s >= ta.
    double s_frac;
    if (s1 <= s0) {
      s_frac = s0 >= ta ? 1.0 : 0.0;
    } else {
      s_frac = std::clamp((s1 - std::max(s0, ta)) / (s1 - s0), 0.0, 1.0);
    }
    if (s_frac == 0.0) continue;

    // When s + d <= tb holds across the whole row, the area fraction is
    // the start fraction alone and the row adds in one step.
    if (s1 + d_top <= tb) {
      acc += static_cast<double>(row_sums_[i]) * s_frac;
      continue;
    }
    for (int j = 0; j < dur_buckets_; ++j) {
      const std::uint32_t count = counts_[static_cast<std::size_t>(i) * dur_buckets_ + j];
      if (count == 0) continue;
      const double d0 = d_lo + j * d_width;
      const double d1 = dur_buckets_ == 1 ? d0 : d_lo + (j + 1) * d_width;
      acc += count * region_fraction(s0, s1, d0, d1, ta, tb);
    }
  }
  return std::clamp(acc, 0.0, static_cast<double>(total_));
}

double cost_index_lookup(EdgeId degree, double k, double c) {
  if (degree == 0) throw std::domain_error("cost_index_lookup: degree must be >= 1");
  return c * (std::log2(static_cast<double>(degree)) + k);
}

double cost_scan(EdgeId degree, double c_prime) {
  return c_prime * static_cast<double>(degree);
}

VertexIndexRegistry VertexIndexRegistry::build(const TemporalCsr& out, const TemporalCsr& in,
                                               EdgeId cutoff) {
  if (cutoff < 1) throw std::invalid_argument("index cutoff must be >= 1");
  VertexIndexRegistry reg;
  reg.cutoff_ = cutoff;
  for (int side = 0; side < 2; ++side) {
    const TemporalCsr& csr = side == 0 ? out : in;
    auto& ids = reg.ids_[side];
    for (VertexId v = 0; v < csr.vertex_count(); ++v) {
      if (csr.degree(v) >= cutoff) ids.push_back(v);
    }
    reg.trees_[side].resize(ids.size());
    reg.hists_[side].resize(ids.size());
    parallel_for(
        0, ids.size(),
        [&](std::size_t i) {
          const VertexId v = ids[i];
          const EdgeId lo = csr.offsets()[v];
          const EdgeId hi = csr.offsets()[v + 1];
          std::vector<NeighborEdge> seg(hi - lo);
          for (EdgeId e = lo; e < hi; ++e) {
            seg[e - lo] =
                NeighborEdge{csr.neighbor_at(e), csr.start_at(e), csr.end_at(e), csr.weight_at(e)};
          }
          reg.hists_[side][i] = DensityHistogram::build(seg);
          reg.trees_[side][i] =
              PrioritySearchTree::build(std::move(seg), HeapMode::Max, PriorityAxis::Start);
        },
        /*grain=*/1);
    reg.slot_of_[side].reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) reg.slot_of_[side].emplace(ids[i], i);
  }
  return reg;
}

const PrioritySearchTree* VertexIndexRegistry::index(VertexId v, Direction d) const {
  const int side = d == Direction::Out ? 0 : 1;
  const auto it = slot_of_[side].find(v);
  return it == slot_of_[side].end() ? nullptr : &trees_[side][it->second];
}

const DensityHistogram* VertexIndexRegistry::histogram(VertexId v, Direction d) const {
  const int side = d == Direction::Out ? 0 : 1;
  const auto it = slot_of_[side].find(v);
  return it == slot_of_[side].end() ? nullptr : &hists_[side][it->second];
}

AccessDecision choose_access_method(VertexId v, const VertexIndexRegistry& registry, Direction d,
                                    const QueryWindow& w, const CostModelParams& params) {
  const DensityHistogram* h = registry.histogram(v, d);
  if (h == nullptr) return AccessDecision{AccessMethod::Scan, -1.0, -1.0};
  const double k_hat = h->estimate(w);
  const double beta = h->total() == 0 ? 0.0 : k_hat / static_cast<double>(h->total());
  const AccessMethod m =
      beta <= params.theta_sel ? AccessMethod::IndexLookup : AccessMethod::Scan;
  return AccessDecision{m, beta, k_hat};
}

CostModelParams fit_cost_constants(std::span<const CalibrationPoint> points, double theta_sel) {
  if (points.empty()) throw std::invalid_argument("cost calibration needs a nonempty sample");
  double num_c = 0.0, den_c = 0.0;
  double num_cp = 0.0, den_cp = 0.0;
  for (const CalibrationPoint& p : points) {
    if (p.degree == 0) continue;
    const double x = std::log2(static_cast<double>(p.degree)) + static_cast<double>(p.matches);
    num_c += p.index_seconds * x;
    den_c += x * x;
    const double y = static_cast<double>(p.degree);
    num_cp += p.scan_seconds * y;
    den_cp += y * y;
  }
  if (den_c == 0.0 || den_cp == 0.0) {
    throw std::invalid_argument("cost calibration needs samples with degree >= 1");
  }
  CostModelParams out;
  out.c = num_c / den_c;
  out.c_prime = num_cp / den_cp;
  out.theta_sel = theta_sel;
  return out;
}

CostModelParams calibrate_constants(
    const TemporalCsr& csr, const VertexIndexRegistry& registry, Direction d,
    std::span<const std::pair<VertexId, QueryWindow>> workload,
    const std::function<double(VertexId, const QueryWindow&, AccessMethod)>& timer) {
  std::vector<CalibrationPoint> points;
  for (const auto& [v, w] : workload) {
    const PrioritySearchTree* tree = registry.index(v, d);
    if (tree == nullptr) continue;
    CalibrationPoint p;
    p.degree = csr.degree(v);
    p.matches = csr.count_in_window(v, w);
    if (timer) {
      p.index_seconds = timer(v, w, AccessMethod::IndexLookup);
      p.scan_seconds = timer(v, w, AccessMethod::Scan);
    } else {
      using clock = std::chrono::steady_clock;
      volatile std::uint64_t sink = 0;
      auto t0 = clock::now();
      tree->for_each_in_window(w, [&](const NeighborEdge&, std::uint32_t) { sink = sink + 1; });
      auto t1 = clock::now();
      EdgeId n = csr.count_in_window(v, w);
      auto t2 = clock::now();
      sink = sink + n;
      p.index_seconds = std::chrono::duration<double>(t1 - t0).count();
      p.scan_seconds = std::chrono::duration<double>(t2 - t1).count();
    }
    points.push_back(p);
  }
  if (points.empty()) {
    throw std::invalid_argument("cost calibration workload covers no indexed vertex");
  }
  return fit_cost_constants(points);
}

}  // namespace tgx
