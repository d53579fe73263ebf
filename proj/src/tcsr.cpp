#include "tgx/tcsr.hpp"

#include <algorithm>
#include <tuple>

#include "tgx/parallel.hpp"

namespace tgx {

namespace {

bool segment_less(const NeighborEdge& a, const NeighborEdge& b) {
  return std::tie(a.start, a.end, a.neighbor, a.weight) <
         std::tie(b.start, b.end, b.neighbor, b.weight);
}

}  // namespace

TemporalCsr TemporalCsr::build(std::span<const TemporalEdge> edges, const GraphMeta& meta,
                               Direction direction) {
  const VertexId n_v = meta.n_v;
  const EdgeId n_e = edges.size();

  TemporalCsr csr;
  csr.n_v_ = n_v;
  csr.offsets_.assign(static_cast<std::size_t>(n_v) + 1, 0);

  EdgeId bad = kMaxTimestamp;
  std::vector<EdgeId> counts(n_v, 0);
  parallel_for(0, edges.size(), [&](std::size_t i) {
    const TemporalEdge& e = edges[i];
    if (e.source >= n_v || e.destination >= n_v) {
      write_min(bad, static_cast<EdgeId>(i));
      return;
    }
    const VertexId key = direction == Direction::Out ? e.source : e.destination;
    atomic_add(counts[key], EdgeId{1});
  });
  if (bad != kMaxTimestamp) {
    const TemporalEdge& e = edges[bad];
    throw std::out_of_range("edge " + std::to_string(bad) + ": endpoint (" +
                            std::to_string(e.source) + " -> " + std::to_string(e.destination) +
                            ") outside vertex range [0, " + std::to_string(n_v) + ")");
  }

  EdgeId total = exclusive_scan_inplace(counts);
  (void)total;
  for (VertexId v = 0; v < n_v; ++v) csr.offsets_[v] = counts[v];
  csr.offsets_[n_v] = n_e;

  // Placement into a transient record array, then per-segment sort and
  // split into the four flat arrays.
  std::vector<NeighborEdge> records(n_e);
  std::vector<EdgeId> cursor = std::vector<EdgeId>(csr.offsets_.begin(), csr.offsets_.end() - 1);
  parallel_for(0, edges.size(), [&](std::size_t i) {
    const TemporalEdge& e = edges[i];
    const VertexId key = direction == Direction::Out ? e.source : e.destination;
    const VertexId other = direction == Direction::Out ? e.destination : e.source;
    std::atomic_ref<EdgeId> cur(cursor[key]);
    const EdgeId slot = cur.fetch_add(1, std::memory_order_relaxed);
    records[slot] = NeighborEdge{other, e.start, e.end, e.weight};
  });

  parallel_for(
      0, n_v,
      [&](std::size_t v) {
        auto* lo = records.data() + csr.offsets_[v];
        auto* hi = records.data() + csr.offsets_[v + 1];
        std::sort(lo, hi, segment_less);
      },
      /*grain=*/64);

  csr.neighbors_.resize(n_e);
  csr.starts_.resize(n_e);
  csr.ends_.resize(n_e);
  csr.weights_.resize(n_e);
  parallel_for(0, records.size(), [&](std::size_t i) {
    csr.neighbors_[i] = records[i].neighbor;
    csr.starts_[i] = records[i].start;
    csr.ends_[i] = records[i].end;
    csr.weights_[i] = records[i].weight;
  });
  return csr;
}

std::vector<NeighborEdge> TemporalCsr::scan_neighbors(VertexId v, const QueryWindow& w) const {
  const EdgeId lo = offsets_[v];
  const EdgeId hi = offsets_[v + 1];
  const EdgeId len = hi - lo;
  std::vector<NeighborEdge> out;

  constexpr EdgeId kChunk = 16384;
  if (len < 2 * kChunk) {
    for_each_in_window(v, w, [&](VertexId nb, Timestamp s, Timestamp e, double wt, EdgeId) {
      out.push_back(NeighborEdge{nb, s, e, wt});
    });
    return out;
  }

  // Chunked parallel filter; concatenation in chunk order preserves the
  // segment order.
  const std::size_t chunks = static_cast<std::size_t>((len + kChunk - 1) / kChunk);
  std::vector<std::vector<NeighborEdge>> parts(chunks);
  parallel_for(
      0, chunks,
      [&](std::size_t c) {
        const EdgeId a = lo + static_cast<EdgeId>(c) * kChunk;
        const EdgeId b = std::min(hi, a + kChunk);
        auto& part = parts[c];
        for (EdgeId i = a; i < b; ++i) {
          if (window_contains(w, starts_[i], ends_[i])) {
            part.push_back(NeighborEdge{neighbors_[i], starts_[i], ends_[i], weights_[i]});
          }
        }
      },
      /*grain=*/1);
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  out.reserve(total);
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

EdgeId TemporalCsr::count_in_window(VertexId v, const QueryWindow& w) const {
  EdgeId n = 0;
  for_each_in_window(v, w, [&](VertexId, Timestamp, Timestamp, double, EdgeId) { ++n; });
  return n;
}

std::vector<TemporalEdge> TemporalCsr::flatten(Direction direction) const {
  std::vector<TemporalEdge> out(neighbors_.size());
  parallel_for(0, n_v_, [&](std::size_t v) {
    for (EdgeId i = offsets_[v]; i < offsets_[v + 1]; ++i) {
      const VertexId self = static_cast<VertexId>(v);
      out[i] = direction == Direction::Out
                   ? TemporalEdge{self, neighbors_[i], starts_[i], ends_[i], weights_[i]}
                   : TemporalEdge{neighbors_[i], self, starts_[i], ends_[i], weights_[i]};
    }
  });
  return out;
}

}  // namespace tgx
