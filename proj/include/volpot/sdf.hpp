#pragma once

#include <stdexcept>
#include <vector>

#include "volpot/curve.hpp"
#include "volpot/quadtree.hpp"

namespace volpot {

// Signed distance function backed by equidistant boundary samples in a
// quadtree, with optional Newton refinement against the exact curves.
// Sign convention: positive inside the domain, negative outside.
class SdfModel {
 public:
  struct Sample {
    int curve;
    double s;
    Vec2 p;
  };

  struct Closest {
    int curve = -1;
    double s = 0.0;
    Vec2 point;
    double distance = 0.0;
  };

  static SdfModel build(std::vector<ArcLengthCurve> curves, double h_samp) {
    if (curves.empty()) throw std::invalid_argument("sdf: no curves");
    if (h_samp <= 0) throw std::invalid_argument("sdf: sample spacing must be positive");
    SdfModel m;
    m.curves_ = std::move(curves);
    m.h_samp_ = h_samp;
    std::vector<Vec2> pts;
    for (std::size_t ci = 0; ci < m.curves_.size(); ++ci) {
      const ArcLengthCurve& c = m.curves_[ci];
      const double L = c.length();
      const int n = std::max(1, static_cast<int>(std::ceil(L / h_samp - 1e-9)));
      for (int j = 0; j < n; ++j) {
        const double s = j * L / n;
        Sample smp{static_cast<int>(ci), s, c.position(s)};
        pts.push_back(smp.p);
        m.samples_.push_back(smp);
      }
    }
    m.tree_ = Quadtree::build(pts, 32);
    return m;
  }

  const std::vector<ArcLengthCurve>& curves() const { return curves_; }
  const std::vector<Sample>& samples() const { return samples_; }
  double sample_spacing() const { return h_samp_; }
  const Quadtree& tree() const { return tree_; }

  Closest closest_point(const Vec2& x, bool refine = true) const {
    // grow the query window until at least one sample is captured
    double halfw = 2.0 * h_samp_;
    std::vector<int> hits;
    while (true) {
      hits = tree_.query_rect(Rect::centered(x, halfw));
      if (!hits.empty()) break;
      halfw *= 2.0;
    }
    int best = pick_nearest(hits, x);
    // the nearest captured sample may not be the global nearest; re-query a
    // window guaranteed to contain anything closer
    const double d0 = dist(samples_[best].p, x);
    hits = tree_.query_rect(Rect::centered(x, d0 * (1 + 1e-12)));
    if (!hits.empty()) best = pick_nearest(hits, x);

    Closest out;
    const Sample& smp = samples_[best];
    out.curve = smp.curve;
    out.s = smp.s;
    if (refine) out.s = newton_refine(curves_[smp.curve], x, smp.s);
    out.point = curves_[smp.curve].position(out.s);
    out.distance = dist(out.point, x);
    return out;
  }

  double signed_distance(const Vec2& x, bool refine = true) const {
    const Closest cp = closest_point(x, refine);
    const Vec2 n = curves_[cp.curve].normal(cp.s);
    const double sgn = dot(cp.point - x, n) >= 0 ? 1.0 : -1.0;
    return sgn * cp.distance;
  }

 private:
  int pick_nearest(const std::vector<int>& hits, const Vec2& x) const {
    int best = hits.front();
    double bd = norm2(samples_[best].p - x);
    for (int idx : hits) {
      const double d = norm2(samples_[idx].p - x);
      if (d < bd - 1e-30 || (d <= bd && idx < best)) {
        bd = d;
        best = idx;
      }
    }
    return best;
  }

  // Newton on the squared-distance objective F(s) = |gamma(s) - x|^2 / 2.
  static double newton_refine(const ArcLengthCurve& c, const Vec2& x, double s) {
    const double L = c.length();
    for (int it = 0; it < 10; ++it) {
      const Vec2 g = c.position(s);
      const Vec2 g1 = c.tangent(s);
      const Vec2 g2 = c.second_derivative(s);
      const double f1 = dot(g - x, g1);
      double f2 = 1.0 + dot(g - x, g2);
      if (std::abs(f2) < 1e-14) f2 = f2 >= 0 ? 1e-14 : -1e-14;
      double step = -f1 / f2;
      if (f2 < 0) step = -f1;  // descent direction past the focal point
      const double cap = 2.0;
      if (std::abs(step) > cap) step *= cap / std::abs(step);
      s = c.wrap(s + step);
      if (std::abs(step) < 1e-15 * L) break;
    }
    return s;
  }

  std::vector<ArcLengthCurve> curves_;
  std::vector<Sample> samples_;
  double h_samp_ = 0.0;
  Quadtree tree_;
};

}  // namespace volpot
