#pragma once

// Seeded instance generators for property tests.

#include <random>
#include <vector>

#include "tgx/types.hpp"

namespace tgx::testsupport {

struct Instance {
  std::vector<TemporalEdge> edges;
  VertexId n_v = 0;
};

// Small temporal graph with spread-out timestamps (keeps exhaustive walk
// enumeration cheap) and optional integral weights.
inline Instance random_instance(std::mt19937_64& rng, VertexId max_v, std::size_t max_e,
                                Timestamp t_range = 60, Timestamp d_max = 8,
                                Timestamp d_min = 0) {
  Instance inst;
  inst.n_v = std::uniform_int_distribution<VertexId>(1, max_v)(rng);
  const std::size_t n_e = std::uniform_int_distribution<std::size_t>(0, max_e)(rng);
  std::uniform_int_distribution<VertexId> vd(0, inst.n_v - 1);
  std::uniform_int_distribution<Timestamp> sd(0, t_range);
  std::uniform_int_distribution<Timestamp> dd(d_min, d_max);
  std::uniform_int_distribution<int> wd(1, 4);
  for (std::size_t i = 0; i < n_e; ++i) {
    TemporalEdge e;
    e.source = vd(rng);
    e.destination = vd(rng);
    e.start = sd(rng);
    e.end = e.start + dd(rng);
    e.weight = wd(rng);
    inst.edges.push_back(e);
  }
  return inst;
}

inline QueryWindow random_window(std::mt19937_64& rng, Timestamp hi) {
  std::uniform_int_distribution<Timestamp> d(0, hi);
  Timestamp a = d(rng);
  Timestamp b = d(rng);
  if (a > b) std::swap(a, b);
  return QueryWindow{a, b};
}

}  // namespace tgx::testsupport
