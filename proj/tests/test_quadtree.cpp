#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "volpot/quadtree.hpp"

using namespace volpot;

namespace {

std::vector<int> linear_scan(const std::vector<Vec2>& pts, const Rect& r) {
  std::vector<int> out;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (r.contains(pts[i])) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("single point builds a single leaf") {
  auto t = Quadtree::build({{0, 0}}, 1);
  int leaves = 0, stored = 0;
  t.for_each_leaf([&](const Rect&, const std::vector<int>& items) {
    ++leaves;
    stored += static_cast<int>(items.size());
  });
  CHECK(leaves == 1);
  CHECK(stored == 1);
}

TEST_CASE("four corner points split once, one point per child") {
  std::vector<Vec2> pts = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  auto t = Quadtree::build(pts, 1);
  int nonempty_leaves = 0;
  t.for_each_leaf([&](const Rect& box, const std::vector<int>& items) {
    if (items.empty()) return;
    ++nonempty_leaves;
    CHECK(items.size() == 1);
    CHECK(box.contains(pts[items[0]]));
  });
  CHECK(nonempty_leaves == 4);
}

TEST_CASE("uniform points respect leaf capacity and are all stored") {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec2> pts(10000);
  for (auto& p : pts) p = {u(rng), u(rng)};
  auto t = Quadtree::build(pts, 8);
  std::size_t total = 0;
  t.for_each_leaf([&](const Rect& box, const std::vector<int>& items) {
    CHECK(items.size() <= 8);
    total += items.size();
    for (int i : items) CHECK(box.contains(pts[i]));
  });
  CHECK(total == pts.size());
}

TEST_CASE("coincident points overflow a leaf without infinite recursion") {
  std::vector<Vec2> pts(100, Vec2{0.25, 0.75});
  pts.push_back({0.9, 0.1});
  auto t = Quadtree::build(pts, 4);
  auto hits = t.query_rect(Rect{{0.2, 0.7}, {0.3, 0.8}});
  CHECK(hits.size() == 100);
}

TEST_CASE("build rejects empty input") {
  CHECK_THROWS_WITH(Quadtree::build({}, 4), Catch::Matchers::ContainsSubstring("empty input"));
}

TEST_CASE("query over the whole root box returns everything") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> u(-3.0, 5.0);
  std::vector<Vec2> pts(500);
  for (auto& p : pts) p = {u(rng), u(rng)};
  auto t = Quadtree::build(pts, 16);
  CHECK(t.query_rect(t.root_box()).size() == pts.size());
  CHECK(t.query_rect(Rect{{100, 100}, {101, 101}}).empty());
}

TEST_CASE("query matches linear scan on random rectangles") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec2> pts(10000);
  for (auto& p : pts) p = {u(rng), u(rng)};
  auto t = Quadtree::build(pts, 8);
  for (int k = 0; k < 100; ++k) {
    Vec2 a{u(rng), u(rng)}, b{u(rng), u(rng)};
    Rect r{{std::min(a.x, b.x), std::min(a.y, b.y)},
           {std::max(a.x, b.x), std::max(a.y, b.y)}};
    CHECK(sorted(t.query_rect(r)) == linear_scan(pts, r));
  }
}

TEST_CASE("query matches linear scan with duplicated and boundary points") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> g(0, 10);
  std::vector<Vec2> pts(2000);
  for (auto& p : pts) p = {g(rng) * 0.1, g(rng) * 0.1};  // heavy duplication
  auto t = Quadtree::build(pts, 4);
  for (int k = 0; k < 50; ++k) {
    Rect r{{g(rng) * 0.1, g(rng) * 0.1}, {1.0, 1.0}};
    if (!r.valid()) continue;
    CHECK(sorted(t.query_rect(r)) == linear_scan(pts, r));
  }
}

TEST_CASE("small queries visit few nodes", "[benchmark]") {
  std::mt19937 rng(5150);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec2> pts(100000);
  for (auto& p : pts) p = {u(rng), u(rng)};
  auto t = Quadtree::build(pts, 32);
  for (int k = 0; k < 200; ++k) {
    const double w = 0.01 + 0.09 * u(rng);  // rect area <= 1% of the root
    Vec2 lo{u(rng) * (1 - w), u(rng) * (1 - w)};
    Rect r{lo, lo + Vec2{w, w}};
    Quadtree::QueryStats stats;
    auto hits = t.query_rect(r, &stats);
    CHECK(stats.nodes_visited <= 64 * (hits.size() + 1));
  }
}
