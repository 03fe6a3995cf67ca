#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "volpot/gauss.hpp"

namespace volpot {

// Radial generalized Gaussian rule on (0,1): N_g+1 nodes integrating both
// { r P_n(2r-1) } and { r log r P_n(2r-1) } for n = 0..N_g to near machine
// precision.  Built at runtime by Gauss-Newton moment fitting in the
// Legendre-conditioned formulation; an embedded table backs order 8.
struct RadialGGQ {
  int order = 0;  // N_g
  std::vector<double> r;
  std::vector<double> w;
  std::size_t size() const { return r.size(); }
};

namespace detail {

inline double dlegendre(int n, double x) {
  if (n == 0) return 0.0;
  return n * (legendre(n - 1, x) - x * legendre(n, x)) / (1.0 - x * x);
}

// target moments over [0,1]: b_n = int r P_n(2r-1) dr (exact Gauss-Legendre),
// c_n = int r log r P_n(2r-1) dr (dyadic panels toward the endpoint)
inline void ggq_moments(int ng, std::vector<double>& b, std::vector<double>& c) {
  b.assign(ng + 1, 0.0);
  c.assign(ng + 1, 0.0);
  const Rule1d gl = gauss_legendre(ng + 4, 0.0, 1.0);
  for (int n = 0; n <= ng; ++n)
    for (std::size_t i = 0; i < gl.x.size(); ++i)
      b[n] += gl.w[i] * gl.x[i] * legendre(n, 2 * gl.x[i] - 1);
  const Rule1d& g20 = gauss_legendre_cached(24);
  for (int k = 0; k < 80; ++k) {
    const double hi = std::ldexp(1.0, -k), lo = 0.5 * hi;
    for (std::size_t i = 0; i < g20.x.size(); ++i) {
      const double r = 0.5 * (lo + hi) + 0.5 * (hi - lo) * g20.x[i];
      const double w = 0.5 * (hi - lo) * g20.w[i];
      for (int n = 0; n <= ng; ++n)
        c[n] += w * r * std::log(r) * legendre(n, 2 * r - 1);
    }
  }
}

inline Eigen::VectorXd ggq_residual(int ng, const Eigen::VectorXd& rr,
                                    const Eigen::VectorXd& lw,
                                    const std::vector<double>& b,
                                    const std::vector<double>& c) {
  const int nq = ng + 1;
  Eigen::VectorXd res(2 * nq);
  for (int n = 0; n <= ng; ++n) {
    double s0 = 0.0, s1 = 0.0;
    for (int j = 0; j < nq; ++j) {
      const double w = std::exp(lw(j));
      const double p = legendre(n, 2 * rr(j) - 1);
      s0 += w * rr(j) * p;
      s1 += w * rr(j) * std::log(rr(j)) * p;
    }
    res(2 * n) = s0 - b[n];
    res(2 * n + 1) = s1 - c[n];
  }
  return res;
}

inline Eigen::MatrixXd ggq_jacobian(int ng, const Eigen::VectorXd& rr,
                                    const Eigen::VectorXd& lw) {
  const int nq = ng + 1;
  Eigen::MatrixXd J(2 * nq, 2 * nq);
  for (int n = 0; n <= ng; ++n) {
    for (int j = 0; j < nq; ++j) {
      const double w = std::exp(lw(j));
      const double r = rr(j);
      const double p = legendre(n, 2 * r - 1);
      const double dp = 2 * dlegendre(n, 2 * r - 1);
      J(2 * n, j) = w * (p + r * dp);
      J(2 * n, nq + j) = w * r * p;
      J(2 * n + 1, j) = w * (std::log(r) * p + p + r * std::log(r) * dp);
      J(2 * n + 1, nq + j) = w * r * std::log(r) * p;
    }
  }
  return J;
}

}  // namespace detail

// Precomputed order-8 rule (fallback when Gauss-Newton fails to converge).
inline RadialGGQ embedded_ggq8();

inline RadialGGQ build_ggq(int ng) {
  if (ng < 0 || ng > 20) throw std::invalid_argument("build_ggq: order must be in [0, 20]");
  const int nq = ng + 1;
  std::vector<double> b, c;
  detail::ggq_moments(ng, b, c);

  for (double alpha : {1.0, 1.5, 2.0}) {
    const Rule1d gl = gauss_legendre(nq, 0.0, 1.0);
    Eigen::VectorXd rr(nq), lw(nq);
    for (int j = 0; j < nq; ++j) {
      rr(j) = std::pow(gl.x[j], alpha);
      lw(j) = std::log(0.5 / nq);
    }
    Eigen::VectorXd res = detail::ggq_residual(ng, rr, lw, b, c);
    double cost = res.norm();
    double lam = 1e-3;
    for (int it = 0; it < 400; ++it) {
      if (res.cwiseAbs().maxCoeff() <= 1e-14) break;
      const Eigen::MatrixXd J = detail::ggq_jacobian(ng, rr, lw);
      const Eigen::MatrixXd JtJ = J.transpose() * J;
      bool stepped = false;
      for (int tries = 0; tries < 60; ++tries) {
        // Marquardt scaling: damp proportionally to the diagonal
        Eigen::MatrixXd A = JtJ;
        for (int d = 0; d < A.rows(); ++d) A(d, d) += lam * std::max(JtJ(d, d), 1e-12);
        const Eigen::VectorXd step = A.ldlt().solve(-J.transpose() * res);
        const Eigen::VectorXd tr = rr + step.head(nq);
        const Eigen::VectorXd tl = lw + step.tail(nq);
        if ((tr.array() > 0).all() && (tr.array() < 1).all()) {
          const Eigen::VectorXd tres = detail::ggq_residual(ng, tr, tl, b, c);
          if (tres.norm() < cost) {
            rr = tr;
            lw = tl;
            res = tres;
            cost = tres.norm();
            lam = std::max(lam * 0.2, 1e-15);
            stepped = true;
            break;
          }
        }
        lam *= 8;
      }
      if (!stepped) break;
    }
    // square system: finish with damped Newton once in the basin
    if (res.cwiseAbs().maxCoeff() < 1e-3) {
      for (int it = 0; it < 60; ++it) {
        if (res.cwiseAbs().maxCoeff() <= 1e-14) break;
        const Eigen::MatrixXd J = detail::ggq_jacobian(ng, rr, lw);
        const Eigen::VectorXd step = J.partialPivLu().solve(-res);
        double sigma = 1.0;
        bool stepped = false;
        for (int tries = 0; tries < 40; ++tries, sigma *= 0.5) {
          const Eigen::VectorXd tr = rr + sigma * step.head(nq);
          const Eigen::VectorXd tl = lw + sigma * step.tail(nq);
          if (!((tr.array() > 0).all() && (tr.array() < 1).all())) continue;
          const Eigen::VectorXd tres = detail::ggq_residual(ng, tr, tl, b, c);
          if (tres.norm() < cost) {
            rr = tr;
            lw = tl;
            res = tres;
            cost = tres.norm();
            stepped = true;
            break;
          }
        }
        if (!stepped) break;
      }
    }
    if (res.cwiseAbs().maxCoeff() <= 1e-13) {
      RadialGGQ out;
      out.order = ng;
      out.r.resize(nq);
      out.w.resize(nq);
      std::vector<int> idx(nq);
      for (int j = 0; j < nq; ++j) idx[j] = j;
      std::sort(idx.begin(), idx.end(), [&](int a, int bb) { return rr(a) < rr(bb); });
      for (int j = 0; j < nq; ++j) {
        out.r[j] = rr(idx[j]);
        out.w[j] = std::exp(lw(idx[j]));
      }
      return out;
    }
  }
  if (ng == 8) return embedded_ggq8();
  throw std::runtime_error("build_ggq: Gauss-Newton failed to converge");
}

inline RadialGGQ embedded_ggq8() {
  // frozen output of build_ggq(8); regenerated only if the construction changes
  RadialGGQ g;
  g.order = 8;
  g.r = {
      1.20267220595945755e-02, 7.45389898933069394e-02, 2.00998424376830318e-01,
      3.68825766822525786e-01, 5.51462979724855475e-01, 7.22045700094159166e-01,
      8.58965696656696947e-01, 9.48865189771147768e-01, 9.91356763644666303e-01,
  };
  g.w = {
      3.10663383730311491e-02, 9.31171096125771889e-02, 1.55950367906914675e-01,
      1.74722227453392977e-01, 1.64626569307427910e-01, 1.46814074296180575e-01,
      1.26877761440159690e-01, 7.59198704493999342e-02, 3.09056451507106192e-02,
  };
  return g;
}

}  // namespace volpot
