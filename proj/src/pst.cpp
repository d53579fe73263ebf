#include "tgx/pst.hpp"

#include <algorithm>
#include <tuple>

#include "tgx/parallel.hpp"

namespace tgx {

namespace {

struct BuildRec {
  NeighborEdge edge;
  std::uint32_t pos;
};

constexpr std::size_t kBuildTaskCutoff = 2048;

}  // namespace

PrioritySearchTree PrioritySearchTree::build(std::vector<NeighborEdge> edges, HeapMode mode,
                                             PriorityAxis axis) {
  PrioritySearchTree t;
  t.mode_ = mode;
  t.axis_ = axis;
  const std::size_t m = edges.size();
  if (m == 0) return t;

  std::vector<BuildRec> recs(m);
  parallel_for(0, m, [&](std::size_t i) {
    recs[i] = BuildRec{edges[i], static_cast<std::uint32_t>(i)};
  });

  // Total order on (priority key, search key, neighbor, weight, input
  // position): duplicates stay in input order, so builds are deterministic.
  auto pk = [&t](const BuildRec& r) { return t.priority_key(r.edge); };
  auto sk = [&t](const BuildRec& r) { return t.search_key(r.edge); };
  parallel_sort(recs.begin(), recs.end(), [&](const BuildRec& a, const BuildRec& b) {
    return std::tuple(pk(a), sk(a), a.edge.neighbor, a.edge.weight, a.pos) <
           std::tuple(pk(b), sk(b), b.edge.neighbor, b.edge.weight, b.pos);
  });

  t.nodes_.resize(m);
  t.root_ = 0;

  // The node for slice [lo, hi) lives at slot lo: the slice's first element
  // (extreme priority) roots the subtree, and the remainder splits at the
  // median search key, ties to the right.
  auto build_slice = [&](auto&& self, std::size_t lo, std::size_t hi) -> void {
    Node& node = t.nodes_[lo];
    node.edge = recs[lo].edge;
    node.pos = recs[lo].pos;
    node.left = -1;
    node.right = -1;
    node.split = 0;
    const std::size_t rem = hi - lo - 1;
    if (rem == 0) return;

    std::size_t first = lo + 1;
    std::vector<Timestamp> keys(rem);
    for (std::size_t i = 0; i < rem; ++i) keys[i] = sk(recs[first + i]);
    std::nth_element(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(rem / 2),
                     keys.end());
    const Timestamp median = keys[rem / 2];

    // Stable partition: search keys strictly below the median keep their
    // relative (start-sorted) order in front, the rest follow.
    std::vector<BuildRec> tail;
    tail.reserve(rem - rem / 2);
    std::size_t w = first;
    for (std::size_t i = first; i < hi; ++i) {
      if (sk(recs[i]) < median) {
        recs[w++] = recs[i];
      } else {
        tail.push_back(recs[i]);
      }
    }
    std::copy(tail.begin(), tail.end(), recs.begin() + static_cast<std::ptrdiff_t>(w));
    const std::size_t left_size = w - first;

    node.split = median;
    node.left = left_size > 0 ? static_cast<std::int32_t>(first) : -1;
    node.right = left_size < rem ? static_cast<std::int32_t>(first + left_size) : -1;

    const std::size_t mid = first + left_size;
    if (hi - lo >= kBuildTaskCutoff) {
      parallel_invoke([&] { if (left_size > 0) self(self, first, mid); },
                      [&] { if (left_size < rem) self(self, mid, hi); });
    } else {
      if (left_size > 0) self(self, first, mid);
      if (left_size < rem) self(self, mid, hi);
    }
  };
  build_slice(build_slice, 0, m);
  return t;
}

PrioritySearchTree PrioritySearchTree::from_raw_parts(std::vector<Node> nodes, std::int32_t root,
                                                      HeapMode mode, PriorityAxis axis) {
  PrioritySearchTree t;
  t.nodes_ = std::move(nodes);
  t.root_ = root;
  t.mode_ = mode;
  t.axis_ = axis;
  return t;
}

ThreeSidedQuery PrioritySearchTree::window_query(const QueryWindow& w) const {
  if (mode_ == HeapMode::Max && axis_ == PriorityAxis::Start) {
    // start >= t_a via the heap bound; end <= t_b via the search range
    // (end >= start >= t_a makes the range lower bound free).
    return ThreeSidedQuery{w.t_a, w.t_a, w.t_b};
  }
  if (mode_ == HeapMode::Min && axis_ == PriorityAxis::End) {
    return ThreeSidedQuery{w.t_b, w.t_a, w.t_b};
  }
  throw std::logic_error(
      "window containment needs a start lower bound (max-heap on start) or an end upper bound "
      "(min-heap on end)");
}

std::vector<NeighborEdge> PrioritySearchTree::query_window(const QueryWindow& w) const {
  return query(window_query(w));
}

std::vector<NeighborEdge> PrioritySearchTree::query(const ThreeSidedQuery& q) const {
  std::vector<NeighborEdge> out;
  if (root_ < 0) return out;

  constexpr std::size_t kParallelQuerySize = 1 << 15;
  if (size() < kParallelQuerySize || num_workers() == 1) {
    for_each_match(q, [&](const NeighborEdge& e, std::uint32_t) { out.push_back(e); });
    return out;
  }

  // Fan the depth-2 subtrees out as parallel tasks with per-task buffers
  // merged in a fixed order; the top nodes are handled inline.
  const Timestamp bound = internal_bound(q);
  std::vector<std::int32_t> roots;
  auto top = [&](auto&& self, std::int32_t idx, int depth) -> void {
    if (idx < 0) return;
    if (depth == 2) {
      roots.push_back(idx);
      return;
    }
    const Node& n = nodes_[static_cast<std::size_t>(idx)];
    if (priority_key(n.edge) > bound) return;
    const Timestamp sk = search_key(n.edge);
    if (sk >= q.search_lo && sk <= q.search_hi) out.push_back(n.edge);
    if (n.left >= 0 && q.search_lo < n.split) self(self, n.left, depth + 1);
    if (n.right >= 0 && q.search_hi >= n.split) self(self, n.right, depth + 1);
  };
  top(top, root_, 0);

  std::vector<std::vector<NeighborEdge>> parts(roots.size());
  parallel_for(
      0, roots.size(),
      [&](std::size_t i) {
        const ThreeSidedQuery qq = q;
        auto& part = parts[i];
        std::vector<std::int32_t> stack{roots[i]};
        while (!stack.empty()) {
          const Node& n = nodes_[static_cast<std::size_t>(stack.back())];
          stack.pop_back();
          if (priority_key(n.edge) > bound) continue;
          const Timestamp sk = search_key(n.edge);
          if (sk >= qq.search_lo && sk <= qq.search_hi) part.push_back(n.edge);
          if (n.left >= 0 && qq.search_lo < n.split) stack.push_back(n.left);
          if (n.right >= 0 && qq.search_hi >= n.split) stack.push_back(n.right);
        }
      },
      /*grain=*/1);
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::size_t PrioritySearchTree::count_visited(const ThreeSidedQuery& q) const {
  std::size_t visited = 0;
  if (root_ < 0) return 0;
  const Timestamp bound = internal_bound(q);
  std::vector<std::int32_t> stack{root_};
  while (!stack.empty()) {
    const Node& n = nodes_[static_cast<std::size_t>(stack.back())];
    stack.pop_back();
    ++visited;
    if (priority_key(n.edge) > bound) continue;
    if (n.left >= 0 && q.search_lo < n.split) stack.push_back(n.left);
    if (n.right >= 0 && q.search_hi >= n.split) stack.push_back(n.right);
  }
  return visited;
}

bool PrioritySearchTree::check_invariants() const {
  const std::size_t m = nodes_.size();
  if (root_ < 0) return m == 0;
  if (static_cast<std::size_t>(root_) >= m) return false;

  struct Agg {
    Timestamp min_pkey;
    Timestamp min_skey;
    Timestamp max_skey;
    std::size_t count;
  };
  std::vector<Agg> agg(m);

  // Children always sit at higher pool indices than their parent, so one
  // reverse pass computes all subtree aggregates.
  for (std::size_t ri = m; ri-- > 0;) {
    const Node& n = nodes_[ri];
    const Timestamp pkey = priority_key(n.edge);
    const Timestamp skey = search_key(n.edge);
    Agg a{pkey, skey, skey, 1};
    for (const std::int32_t child : {n.left, n.right}) {
      if (child < 0) continue;
      if (static_cast<std::size_t>(child) <= ri || static_cast<std::size_t>(child) >= m) {
        return false;  // layout violation
      }
      const Agg& c = agg[static_cast<std::size_t>(child)];
      if (c.min_pkey < pkey) return false;  // heap property
      a.min_skey = std::min(a.min_skey, c.min_skey);
      a.max_skey = std::max(a.max_skey, c.max_skey);
      a.count += c.count;
    }
    if (n.left >= 0 && agg[static_cast<std::size_t>(n.left)].max_skey >= n.split) return false;
    if (n.right >= 0 && agg[static_cast<std::size_t>(n.right)].min_skey < n.split) return false;
    agg[ri] = a;
  }
  return agg[static_cast<std::size_t>(root_)].count == m;
}

int PrioritySearchTree::height() const {
  const std::size_t m = nodes_.size();
  if (root_ < 0) return 0;
  std::vector<int> h(m, 1);
  for (std::size_t ri = m; ri-- > 0;) {
    const Node& n = nodes_[ri];
    int best = 0;
    if (n.left >= 0) best = std::max(best, h[static_cast<std::size_t>(n.left)]);
    if (n.right >= 0) best = std::max(best, h[static_cast<std::size_t>(n.right)]);
    h[ri] = 1 + best;
  }
  return h[static_cast<std::size_t>(root_)];
}

}  // namespace tgx
