#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "volpot/geom.hpp"

namespace volpot {

// Quadtree over a fixed point set.  Immutable after construction; concurrent
// read-only queries are safe.
class Quadtree {
 public:
  struct QueryStats {
    std::size_t nodes_visited = 0;
  };

  Quadtree() = default;

  // points: stored by index; m: leaf capacity.  Subdivision stops early for
  // clusters of (near-)coincident points.
  static Quadtree build(const std::vector<Vec2>& points, int m = 32) {
    if (points.empty()) throw std::invalid_argument("quadtree: empty input");
    if (m < 1) throw std::invalid_argument("quadtree: leaf capacity must be >= 1");

    Quadtree t;
    t.points_ = points;
    t.leaf_capacity_ = m;

    Rect box;
    for (const Vec2& p : points) box.expand(p);
    // inflate so boundary points are strictly interior to the root box
    const double margin =
        1e-9 * std::max({std::abs(box.lo.x), std::abs(box.lo.y), std::abs(box.hi.x),
                         std::abs(box.hi.y), box.width(), box.height(), 1e-30});
    box.lo -= Vec2{margin, margin};
    box.hi += Vec2{margin, margin};

    t.min_diameter_ = 1e-12 * box.diameter();
    std::vector<int> all(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) all[i] = static_cast<int>(i);
    t.nodes_.push_back(Node{box});
    t.subdivide(0, std::move(all));
    return t;
  }

  const Rect& root_box() const { return nodes_[0].box; }
  std::size_t size() const { return points_.size(); }
  const Vec2& point(int i) const { return points_[i]; }
  int leaf_capacity() const { return leaf_capacity_; }

  // Indices of all stored points inside rect (boundaries closed).
  std::vector<int> query_rect(const Rect& rect, QueryStats* stats = nullptr) const {
    std::vector<int> out;
    if (!rect.valid()) throw std::invalid_argument("quadtree: malformed rectangle");
    QueryStats local;
    query_recurse(0, rect, out, local);
    if (stats) *stats = local;
    return out;
  }

  // Visits every leaf; used by tests to check the structural invariants.
  template <typename F>
  void for_each_leaf(F&& f) const {
    for (const Node& n : nodes_)
      if (n.leaf()) f(n.box, n.items);
  }

 private:
  struct Node {
    Rect box;
    int child0 = -1;         // children are child0..child0+3, or -1 for a leaf
    std::vector<int> items;  // populated for leaves only
    bool leaf() const { return child0 < 0; }
  };

  void subdivide(std::size_t ni, std::vector<int> items) {
    Node& n = nodes_[ni];
    if (static_cast<int>(items.size()) <= leaf_capacity_ ||
        n.box.diameter() < min_diameter_) {
      n.items = std::move(items);
      return;
    }
    const Vec2 c = n.box.center();
    const Rect box = n.box;
    std::vector<int> bucket[4];
    for (int idx : items) {
      const Vec2& p = points_[idx];
      const int q = (p.x >= c.x ? 1 : 0) + (p.y >= c.y ? 2 : 0);
      bucket[q].push_back(idx);
    }
    items.clear();
    items.shrink_to_fit();

    const std::size_t c0 = nodes_.size();
    nodes_[ni].child0 = static_cast<int>(c0);
    const Rect quarters[4] = {Rect{box.lo, c},
                              Rect{{c.x, box.lo.y}, {box.hi.x, c.y}},
                              Rect{{box.lo.x, c.y}, {c.x, box.hi.y}},
                              Rect{c, box.hi}};
    for (const Rect& q : quarters) {
      Node child;
      child.box = q;
      nodes_.push_back(std::move(child));
    }
    for (int q = 0; q < 4; ++q) subdivide(c0 + q, std::move(bucket[q]));
  }

  void query_recurse(std::size_t ni, const Rect& rect, std::vector<int>& out,
                     QueryStats& stats) const {
    const Node& n = nodes_[ni];
    ++stats.nodes_visited;
    if (!rect.intersects(n.box)) return;
    if (n.leaf()) {
      if (rect.contains(n.box)) {
        out.insert(out.end(), n.items.begin(), n.items.end());
      } else {
        for (int idx : n.items)
          if (rect.contains(points_[idx])) out.push_back(idx);
      }
      return;
    }
    for (int q = 0; q < 4; ++q) query_recurse(n.child0 + q, rect, out, stats);
  }

  std::vector<Vec2> points_;
  std::vector<Node> nodes_;
  int leaf_capacity_ = 32;
  double min_diameter_ = 0.0;
};

}  // namespace volpot
