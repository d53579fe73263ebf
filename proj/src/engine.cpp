#include "tgx/engine.hpp"

#include <algorithm>

namespace tgx {

TemporalGraph TemporalGraph::build(std::vector<TemporalEdge> edges, VertexId n_v, bool directed,
                                   const EngineConfig& config) {
  // Validate the input as given so error messages name input edge indexes.
  GraphMeta input_meta = compute_meta(edges, n_v, directed);

  std::vector<TemporalEdge> materialized = std::move(edges);
  if (!directed) {
    const std::size_t base = materialized.size();
    materialized.reserve(2 * base);
    for (std::size_t i = 0; i < base; ++i) {
      const TemporalEdge& e = materialized[i];
      if (e.source != e.destination) {
        materialized.push_back(TemporalEdge{e.destination, e.source, e.start, e.end, e.weight});
      }
    }
  }

  TemporalGraph g;
  g.config_ = config;
  g.meta_ = directed ? std::move(input_meta) : compute_meta(materialized, n_v, false);
  if (!directed) g.meta_.n_e = input_meta.n_e;  // logical count; layouts hold both orientations
  g.out_ = TemporalCsr::build(materialized, g.meta_, Direction::Out);
  g.in_ = TemporalCsr::build(materialized, g.meta_, Direction::In);
  materialized.clear();
  materialized.shrink_to_fit();
  g.registry_ = VertexIndexRegistry::build(g.out_, g.in_, config.index_cutoff);
  return g;
}

VertexSubset VertexSubset::from_ids(std::vector<VertexId> ids, VertexId n_v) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  VertexSubset s(n_v);
  s.ids_ = std::move(ids);
  return s;
}

VertexSubset VertexSubset::from_flags(std::vector<std::uint8_t> flags) {
  VertexSubset s(static_cast<VertexId>(flags.size()));
  s.dense_ = true;
  s.flags_ = std::move(flags);
  std::size_t count = 0;
  for (std::uint8_t f : s.flags_) count += f ? 1 : 0;
  s.count_ = count;
  return s;
}

bool VertexSubset::contains(VertexId v) const {
  if (dense_) return v < flags_.size() && flags_[v] != 0;
  return std::binary_search(ids_.begin(), ids_.end(), v);
}

std::vector<VertexId> VertexSubset::to_ids() const {
  if (!dense_) return ids_;
  std::vector<VertexId> out;
  out.reserve(count_);
  for (std::size_t v = 0; v < flags_.size(); ++v) {
    if (flags_[v]) out.push_back(static_cast<VertexId>(v));
  }
  return out;
}

const std::vector<std::uint8_t>& VertexSubset::as_flags(
    std::vector<std::uint8_t>& scratch) const {
  if (dense_) return flags_;
  scratch.assign(n_v_, 0);
  for (VertexId v : ids_) scratch[v] = 1;
  return scratch;
}

bool VertexSubset::set_equal(const VertexSubset& other) const {
  return universe() == other.universe() && to_ids() == other.to_ids();
}

}  // namespace tgx
