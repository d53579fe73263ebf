#include "tgx/parallel.hpp"

namespace tgx {

double deterministic_sum(std::span<const double> values) {
  constexpr std::size_t kBlock = 4096;
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
  parallel_for(0, blocks, [&](std::size_t b) {
    const std::size_t lo = b * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += values[i];
    partial[b] = acc;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace tgx
