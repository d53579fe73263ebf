#pragma once

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace tgx {

// Loops below this many iterations run sequentially (matches the
// engine-wide granularity heuristic of ~1000 iterations).
inline constexpr std::size_t kParallelGrain = 1024;

inline int num_workers() { return omp_get_max_threads(); }

inline void set_workers(int n) { omp_set_num_threads(n < 1 ? 1 : n); }

template <class F>
void parallel_for(std::size_t lo, std::size_t hi, F&& f, std::size_t grain = kParallelGrain) {
  if (hi <= lo) return;
  if (hi - lo < grain || omp_in_parallel() || omp_get_max_threads() == 1) {
    for (std::size_t i = lo; i < hi; ++i) f(i);
    return;
  }
#pragma omp parallel for schedule(guided)
  for (std::size_t i = lo; i < hi; ++i) f(i);
}

// Fork-join pair: runs f1 as a spawned task concurrently with f2, then syncs.
template <class F1, class F2>
void parallel_invoke(F1&& f1, F2&& f2) {
  if (omp_in_parallel()) {
#pragma omp task shared(f1)
    f1();
    f2();
#pragma omp taskwait
  } else if (omp_get_max_threads() == 1) {
    f1();
    f2();
  } else {
#pragma omp parallel
#pragma omp single
    {
#pragma omp task shared(f1)
      f1();
      f2();
#pragma omp taskwait
    }
  }
}

namespace detail {

template <class It, class Cmp>
void parallel_sort_rec(It lo, It hi, Cmp& cmp, int depth) {
  const auto n = static_cast<std::size_t>(hi - lo);
  if (n < 4 * kParallelGrain || depth <= 0) {
    std::sort(lo, hi, cmp);
    return;
  }
  It mid = lo + static_cast<std::ptrdiff_t>(n / 2);
  parallel_invoke([&] { parallel_sort_rec(lo, mid, cmp, depth - 1); },
                  [&] { parallel_sort_rec(mid, hi, cmp, depth - 1); });
  std::inplace_merge(lo, mid, hi, cmp);
}

}  // namespace detail

// Fork-join merge sort; stable ordering is the caller's concern (pass a
// total order when determinism matters).
template <class It, class Cmp>
void parallel_sort(It lo, It hi, Cmp cmp) {
  detail::parallel_sort_rec(lo, hi, cmp, 8);
}

template <class It>
void parallel_sort(It lo, It hi) {
  parallel_sort(lo, hi, std::less<>{});
}

// --- Atomic update primitives over plain arrays ------------------------
//
// Algorithm state arrays stay plain vectors; mutation goes through
// std::atomic_ref so results are interleaving-independent.

template <class T>
bool write_min(T& slot, T value) {
  std::atomic_ref<T> ref(slot);
  T cur = ref.load(std::memory_order_relaxed);
  while (value < cur) {
    if (ref.compare_exchange_weak(cur, value, std::memory_order_relaxed)) return true;
  }
  return false;
}

template <class T>
bool write_max(T& slot, T value) {
  std::atomic_ref<T> ref(slot);
  T cur = ref.load(std::memory_order_relaxed);
  while (value > cur) {
    if (ref.compare_exchange_weak(cur, value, std::memory_order_relaxed)) return true;
  }
  return false;
}

// Single-shot claim: flips slot from anything != stamp to stamp exactly once
// per stamp value. Stamps must increase monotonically across rounds.
template <class T>
bool claim_stamp(T& slot, T stamp) {
  std::atomic_ref<T> ref(slot);
  T cur = ref.load(std::memory_order_relaxed);
  while (cur != stamp) {
    if (ref.compare_exchange_weak(cur, stamp, std::memory_order_relaxed)) return true;
  }
  return false;
}

template <class T>
bool compare_and_swap(T& slot, T expected, T desired) {
  std::atomic_ref<T> ref(slot);
  return ref.compare_exchange_strong(expected, desired, std::memory_order_relaxed);
}

template <class T>
T atomic_load(const T& slot) {
  return std::atomic_ref<const T>(slot).load(std::memory_order_relaxed);
}

template <class T>
void atomic_add(T& slot, T delta) {
  std::atomic_ref<T> ref(slot);
  ref.fetch_add(delta, std::memory_order_relaxed);
}

// Floating-point sum with a fixed reduction tree so the result is
// bit-identical regardless of worker count.
double deterministic_sum(std::span<const double> values);

// Exclusive prefix sum; returns the total.
template <class T>
T exclusive_scan_inplace(std::vector<T>& v) {
  T run = 0;
  for (auto& x : v) {
    T next = run + x;
    x = run;
    run = next;
  }
  return run;
}

}  // namespace tgx
