#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tgx/tcsr.hpp"
#include "tgx/types.hpp"

namespace tgx {

// One bound on the priority axis (upper bound in min-heap mode, lower bound
// in max-heap mode) plus a closed range on the search axis.
struct ThreeSidedQuery {
  Timestamp priority_bound = 0;
  Timestamp search_lo = 0;
  Timestamp search_hi = kMaxTimestamp;
};

enum class HeapMode { Min, Max };

// Which interval endpoint maps to the priority axis; the other endpoint is
// the search (BST) axis.
enum class PriorityAxis { Start, End };

// Per-vertex priority search tree over incident temporal edges. Each stored
// edge is one node: the subtree root carries the extreme priority-axis
// value, and the remainder splits at the median search-axis value, giving
// O(log m + k) three-sided queries on O(m) space. Nodes live in a flat pool
// with children by index; the node for slice [lo, hi) sits at slot lo, so a
// fork-join build needs no allocation handshake.
class PrioritySearchTree {
 public:
  struct Node {
    Timestamp split = 0;  // search-axis median of the subtrees
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint32_t pos = 0;  // position of the edge in its source sequence
    NeighborEdge edge;
  };

  PrioritySearchTree() = default;

  // Sorts by the (reflected) priority key with a total tie order, then
  // recursively roots the extreme element and splits the rest at the median
  // search key; the two halves build as parallel fork-join tasks below a
  // 2048-element cutoff. `pos` values are assigned from the input order.
  static PrioritySearchTree build(std::vector<NeighborEdge> edges, HeapMode mode = HeapMode::Min,
                                  PriorityAxis axis = PriorityAxis::Start);

  // Assembles a tree from explicit nodes without validation (test support).
  static PrioritySearchTree from_raw_parts(std::vector<Node> nodes, std::int32_t root,
                                           HeapMode mode, PriorityAxis axis);

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  HeapMode mode() const { return mode_; }
  PriorityAxis priority_axis() const { return axis_; }
  std::span<const Node> nodes() const { return nodes_; }
  std::int32_t root() const { return root_; }

  // All stored edges matching q, as an unordered collection. Large trees
  // fan the top subtrees out as parallel tasks with per-task buffers.
  std::vector<NeighborEdge> query(const ThreeSidedQuery& q) const;

  // Sequential traversal form; f(const NeighborEdge&, pos). A node is
  // examined only if its parent passed both the heap cut and the
  // search-range cut, so the number of examinations stays O(log m + k).
  template <class F>
  void for_each_match(const ThreeSidedQuery& q, F&& f) const {
    if (root_ < 0) return;
    const Timestamp bound = internal_bound(q);
    std::vector<std::int32_t> stack;
    stack.reserve(64);
    stack.push_back(root_);
    while (!stack.empty()) {
      const Node& n = nodes_[static_cast<std::size_t>(stack.back())];
      stack.pop_back();
      if (priority_key(n.edge) > bound) continue;  // heap cut
      const Timestamp sk = search_key(n.edge);
      if (sk >= q.search_lo && sk <= q.search_hi) f(n.edge, n.pos);
      if (n.left >= 0 && q.search_lo < n.split) stack.push_back(n.left);
      if (n.right >= 0 && q.search_hi >= n.split) stack.push_back(n.right);
    }
  }

  // Window containment (start >= t_a && end <= t_b) translated into the
  // equivalent three-sided query. Supported configurations: max-heap on
  // start (priority lower bound t_a) and min-heap on end (priority upper
  // bound t_b); other configurations cannot express the containment rule
  // with a single query and throw std::logic_error.
  ThreeSidedQuery window_query(const QueryWindow& w) const;

  std::vector<NeighborEdge> query_window(const QueryWindow& w) const;

  template <class F>
  void for_each_in_window(const QueryWindow& w, F&& f) const {
    for_each_match(window_query(w), f);
  }

  // True iff the heap and BST properties hold at every node and the node
  // count equals size().
  bool check_invariants() const;

  // Number of tree nodes touched while answering q (complexity probe).
  std::size_t count_visited(const ThreeSidedQuery& q) const;

  int height() const;

 private:
  // Priority keys are reflected (bitwise complement) in max-heap mode so a
  // single min-oriented traversal serves both modes.
  Timestamp priority_key(const NeighborEdge& e) const {
    const Timestamp v = axis_ == PriorityAxis::Start ? e.start : e.end;
    return mode_ == HeapMode::Min ? v : ~v;
  }
  Timestamp search_key(const NeighborEdge& e) const {
    return axis_ == PriorityAxis::Start ? e.end : e.start;
  }
  Timestamp internal_bound(const ThreeSidedQuery& q) const {
    return mode_ == HeapMode::Min ? q.priority_bound : ~q.priority_bound;
  }

  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
  HeapMode mode_ = HeapMode::Min;
  PriorityAxis axis_ = PriorityAxis::Start;
};

}  // namespace tgx
