#pragma once

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "volpot/gauss.hpp"
#include "volpot/geom.hpp"

namespace volpot {

// Smooth closed curve with two derivatives, parametrized over t in [0,1].
class ParamCurve {
 public:
  virtual ~ParamCurve() = default;
  virtual Vec2 position(double t) const = 0;
  virtual Vec2 derivative(double t) const = 0;
  virtual Vec2 second_derivative(double t) const = 0;
};

class CircleCurve final : public ParamCurve {
 public:
  CircleCurve(Vec2 center, double radius) : c_(center), r_(radius) {}
  Vec2 position(double t) const override {
    const double a = 2 * pi_ * t;
    return c_ + Vec2{r_ * std::cos(a), r_ * std::sin(a)};
  }
  Vec2 derivative(double t) const override {
    const double a = 2 * pi_ * t, k = 2 * pi_ * r_;
    return {-k * std::sin(a), k * std::cos(a)};
  }
  Vec2 second_derivative(double t) const override {
    const double a = 2 * pi_ * t, k = 4 * pi_ * pi_ * r_;
    return {-k * std::cos(a), -k * std::sin(a)};
  }

 private:
  static constexpr double pi_ = 3.14159265358979323846;
  Vec2 c_;
  double r_;
};

class EllipseCurve final : public ParamCurve {
 public:
  EllipseCurve(double a, double b) : a_(a), b_(b) {}
  Vec2 position(double t) const override {
    const double u = 2 * pi_ * t;
    return {a_ * std::cos(u), b_ * std::sin(u)};
  }
  Vec2 derivative(double t) const override {
    const double u = 2 * pi_ * t;
    return {-2 * pi_ * a_ * std::sin(u), 2 * pi_ * b_ * std::cos(u)};
  }
  Vec2 second_derivative(double t) const override {
    const double u = 2 * pi_ * t, k = 4 * pi_ * pi_;
    return {-k * a_ * std::cos(u), -k * b_ * std::sin(u)};
  }

 private:
  static constexpr double pi_ = 3.14159265358979323846;
  double a_, b_;
};

// Polar r(theta) = a + b*cos(k*theta) traced counterclockwise.
class WobblyEllipseCurve final : public ParamCurve {
 public:
  WobblyEllipseCurve(double a, double b, int k) : a_(a), b_(b), k_(k) {
    if (a <= std::abs(b)) throw std::invalid_argument("wobbly: need a > |b|");
  }
  Vec2 position(double t) const override {
    const double u = 2 * pi_ * t, r = a_ + b_ * std::cos(k_ * u);
    return {r * std::cos(u), r * std::sin(u)};
  }
  Vec2 derivative(double t) const override {
    const double u = 2 * pi_ * t;
    const double r = a_ + b_ * std::cos(k_ * u);
    const double rp = -b_ * k_ * std::sin(k_ * u);
    return Vec2{rp * std::cos(u) - r * std::sin(u),
                rp * std::sin(u) + r * std::cos(u)} *
           (2 * pi_);
  }
  Vec2 second_derivative(double t) const override {
    const double u = 2 * pi_ * t;
    const double r = a_ + b_ * std::cos(k_ * u);
    const double rp = -b_ * k_ * std::sin(k_ * u);
    const double rpp = -b_ * k_ * k_ * std::cos(k_ * u);
    return Vec2{(rpp - r) * std::cos(u) - 2 * rp * std::sin(u),
                (rpp - r) * std::sin(u) + 2 * rp * std::cos(u)} *
           (4 * pi_ * pi_);
  }

 private:
  static constexpr double pi_ = 3.14159265358979323846;
  double a_, b_;
  int k_;
};

// Closed periodic cubic Hermite curve through (t_i, p_i) with tangents d_i,
// as read from the `t x y dx dy` text format.
class HermiteCurve final : public ParamCurve {
 public:
  HermiteCurve(std::vector<double> t, std::vector<Vec2> p, std::vector<Vec2> d)
      : t_(std::move(t)), p_(std::move(p)), d_(std::move(d)) {
    if (t_.size() < 3 || t_.size() != p_.size() || t_.size() != d_.size())
      throw std::invalid_argument("hermite curve: need >= 3 consistent samples");
    for (std::size_t i = 1; i < t_.size(); ++i)
      if (t_[i] <= t_[i - 1])
        throw std::invalid_argument("hermite curve: parameters must increase");
    if (t_.front() < 0 || t_.back() >= 1.0)
      throw std::invalid_argument("hermite curve: parameters must lie in [0,1)");
  }

  Vec2 position(double t) const override { return eval<0>(t); }
  Vec2 derivative(double t) const override { return eval<1>(t); }
  Vec2 second_derivative(double t) const override { return eval<2>(t); }

 private:
  template <int Order>
  Vec2 eval(double t) const {
    t -= std::floor(t);
    const std::size_t n = t_.size();
    // segment i spans [t_i, t_{i+1}), the last wraps around to t_0 + 1
    std::size_t i = std::upper_bound(t_.begin(), t_.end(), t) - t_.begin();
    i = (i == 0) ? n - 1 : i - 1;
    const double ta = t_[i];
    const double tb = (i + 1 < n) ? t_[i + 1] : t_[0] + 1.0;
    if (i == n - 1 && t < ta) t += 1.0;
    const double h = tb - ta;
    const double u = (t - ta) / h;
    const Vec2& pa = p_[i];
    const Vec2& pb = p_[(i + 1) % n];
    const Vec2 ma = d_[i] * h;
    const Vec2 mb = d_[(i + 1) % n] * h;
    if constexpr (Order == 0) {
      const double u2 = u * u, u3 = u2 * u;
      return pa * (2 * u3 - 3 * u2 + 1) + ma * (u3 - 2 * u2 + u) +
             pb * (-2 * u3 + 3 * u2) + mb * (u3 - u2);
    } else if constexpr (Order == 1) {
      const double u2 = u * u;
      return (pa * (6 * u2 - 6 * u) + ma * (3 * u2 - 4 * u + 1) +
              pb * (-6 * u2 + 6 * u) + mb * (3 * u2 - 2 * u)) /
             h;
    } else {
      return (pa * (12 * u - 6) + ma * (6 * u - 4) + pb * (-12 * u + 6) +
              mb * (6 * u - 2)) /
             (h * h);
    }
  }

  std::vector<double> t_;
  std::vector<Vec2> p_;
  std::vector<Vec2> d_;
};

inline std::shared_ptr<const ParamCurve> read_curve_samples(std::istream& in) {
  std::vector<double> t;
  std::vector<Vec2> p, d;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    double ti, x, y, dx, dy;
    if (!(ss >> ti >> x >> y >> dx >> dy))
      throw std::runtime_error("curve file: expected `t x y dx dy` per line");
    t.push_back(ti);
    p.push_back({x, y});
    d.push_back({dx, dy});
  }
  return std::make_shared<HermiteCurve>(std::move(t), std::move(p), std::move(d));
}

inline std::shared_ptr<const ParamCurve> read_curve_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("curve file: cannot open " + path);
  return read_curve_samples(in);
}

// Arc-length view of a closed curve: gamma(s) = base(t(s)) with |gamma'| = 1.
// The monotone map s -> t is stored as per-panel Chebyshev interpolants.
class ArcLengthCurve {
 public:
  static constexpr int kPanels = 64;
  static constexpr int kChebOrder = 16;

  double length() const { return length_; }
  bool counterclockwise() const { return ccw_; }
  const ParamCurve& base() const { return *base_; }

  double param(double s) const {  // s -> t
    s = wrap(s);
    int p = static_cast<int>(s / panel_width_);
    p = std::min(p, kPanels - 1);
    const double mid = (p + 0.5) * panel_width_;
    const double u = (s - mid) / (0.5 * panel_width_);
    return clenshaw(&coeff_[p * kChebOrder], u);
  }

  Vec2 position(double s) const { return base_->position(param(s)); }

  Vec2 tangent(double s) const {  // unit by construction
    const Vec2 d = base_->derivative(param(s));
    return d / norm(d);
  }

  Vec2 second_derivative(double s) const {
    const double t = param(s);
    const Vec2 d1 = base_->derivative(t);
    const Vec2 d2 = base_->second_derivative(t);
    const double n2 = norm2(d1);
    return d2 / n2 - d1 * (dot(d1, d2) / (n2 * n2));
  }

  // Outward normal under the domain-on-the-left convention.
  Vec2 normal(double s) const { return rot_cw(tangent(s)); }

  double curvature(double s) const { return cross(tangent(s), second_derivative(s)); }

  double wrap(double s) const {
    s -= length_ * std::floor(s / length_);
    if (s >= length_) s -= length_;
    return s;
  }

  // Reparametrize a closed curve by arc length.  The total length is computed
  // by composite Gauss-Legendre panels; tol is the relative target for the
  // inversion of s(t).
  static ArcLengthCurve reparametrize(std::shared_ptr<const ParamCurve> base,
                                      double tol = 1e-13) {
    ArcLengthCurve c;
    c.base_ = std::move(base);
    const int nf = 512;
    const Rule1d& gl = gauss_legendre_cached(16);

    std::vector<double> prefix(nf + 1, 0.0);
    double area2 = 0.0;
    for (int i = 0; i < nf; ++i) {
      const double a = static_cast<double>(i) / nf, b = static_cast<double>(i + 1) / nf;
      double len = 0.0;
      for (int k = 0; k < 16; ++k) {
        const double t = 0.5 * (a + b) + 0.5 * (b - a) * gl.x[k];
        const Vec2 d = c.base_->derivative(t);
        len += 0.5 * (b - a) * gl.w[k] * norm(d);
        area2 += 0.5 * (b - a) * gl.w[k] * cross(c.base_->position(t), d);
      }
      prefix[i + 1] = prefix[i] + len;
    }
    c.length_ = prefix[nf];
    c.ccw_ = area2 > 0.0;
    c.prefix_ = std::move(prefix);
    c.panel_width_ = c.length_ / kPanels;

    const double gap = dist(c.base_->position(0.0), c.base_->position(1.0));
    if (gap > 1e-8 * c.length_)
      throw std::invalid_argument("reparametrize: curve is not closed");

    // t(s) per panel at Chebyshev points, inverted by Newton
    c.coeff_.resize(kPanels * kChebOrder);
    std::vector<double> tv(kChebOrder);
    for (int p = 0; p < kPanels; ++p) {
      const double s0 = p * c.panel_width_, mid = s0 + 0.5 * c.panel_width_;
      for (int k = 0; k < kChebOrder; ++k) {
        const double u = std::cos(pi_ * (k + 0.5) / kChebOrder);
        tv[k] = c.invert(mid + 0.5 * c.panel_width_ * u, tol);
      }
      for (int j = 0; j < kChebOrder; ++j) {
        double sum = 0.0;
        for (int k = 0; k < kChebOrder; ++k)
          sum += tv[k] * std::cos(j * pi_ * (k + 0.5) / kChebOrder);
        c.coeff_[p * kChebOrder + j] = 2.0 / kChebOrder * sum;
      }
    }
    c.prefix_.clear();  // only needed during construction
    return c;
  }

 private:
  static constexpr double pi_ = 3.14159265358979323846;

  double arclen_to(double t) const {  // construction-time s(t), t in [0,1]
    const int nf = static_cast<int>(prefix_.size()) - 1;
    const double scaled = std::min(std::max(t, 0.0), 1.0) * nf;
    int i = std::min(static_cast<int>(scaled), nf - 1);
    const double a = static_cast<double>(i) / nf;
    const Rule1d& gl = gauss_legendre_cached(16);
    double len = 0.0;
    for (int k = 0; k < 16; ++k) {
      const double tt = 0.5 * (a + t) + 0.5 * (t - a) * gl.x[k];
      len += 0.5 * (t - a) * gl.w[k] * norm(base_->derivative(tt));
    }
    return prefix_[i] + len;
  }

  double invert(double s_target, double tol) const {
    const int nf = static_cast<int>(prefix_.size()) - 1;
    const auto it = std::upper_bound(prefix_.begin(), prefix_.end(), s_target);
    int i = static_cast<int>(it - prefix_.begin()) - 1;
    i = std::min(std::max(i, 0), nf - 1);
    double t = (i + (s_target - prefix_[i]) /
                        std::max(prefix_[i + 1] - prefix_[i], 1e-300)) /
               nf;
    for (int iter = 0; iter < 50; ++iter) {
      const double f = arclen_to(t) - s_target;
      const double df = norm(base_->derivative(t));
      const double dt = f / df;
      t -= dt;
      t = std::min(std::max(t, 0.0), 1.0);
      if (std::abs(dt) < tol) break;
    }
    return t;
  }

  static double clenshaw(const double* c, double u) {
    double b1 = 0.0, b2 = 0.0;
    for (int j = kChebOrder - 1; j >= 1; --j) {
      const double b0 = c[j] + 2 * u * b1 - b2;
      b2 = b1;
      b1 = b0;
    }
    return 0.5 * c[0] + u * b1 - b2;
  }

  std::shared_ptr<const ParamCurve> base_;
  double length_ = 0.0;
  double panel_width_ = 0.0;
  bool ccw_ = true;
  std::vector<double> coeff_;
  std::vector<double> prefix_;
};

}  // namespace volpot
