#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "volpot/geom.hpp"

namespace volpot {

// Orthonormal polynomial basis on the standard simplex
// {0 <= x, 0 <= y, x + y <= 1}.  Index ordering is graded: n outer from 0,
// m inner from 0..n, so (m,n) lives at n(n+1)/2 + m.
//
// K_mn(x,y) = c_mn * P_{n-m}^{(2m+1,0)}(2x-1) * (1-x)^m P_m(2y/(1-x) - 1),
// with the (1-x)^m factor absorbed into a homogenized Legendre recurrence so
// the x -> 1 limit is regular.

inline constexpr int koorn_size(int order) { return (order + 1) * (order + 2) / 2; }
inline constexpr int koorn_index(int m, int n) { return n * (n + 1) / 2 + m; }

namespace detail {

// first-order jet: value and gradient
struct Jet2 {
  double v = 0, dx = 0, dy = 0;
  Jet2() = default;
  Jet2(double v_) : v(v_) {}
  Jet2(double v_, double dx_, double dy_) : v(v_), dx(dx_), dy(dy_) {}
};
inline Jet2 operator+(const Jet2& a, const Jet2& b) { return {a.v + b.v, a.dx + b.dx, a.dy + b.dy}; }
inline Jet2 operator-(const Jet2& a, const Jet2& b) { return {a.v - b.v, a.dx - b.dx, a.dy - b.dy}; }
inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  return {a.v * b.v, a.dx * b.v + a.v * b.dx, a.dy * b.v + a.v * b.dy};
}
inline Jet2 operator*(double s, const Jet2& a) { return {s * a.v, s * a.dx, s * a.dy}; }
inline Jet2 operator/(const Jet2& a, double s) { return {a.v / s, a.dx / s, a.dy / s}; }

// second-order jet
struct Jet5 {
  double v = 0, dx = 0, dy = 0, dxx = 0, dxy = 0, dyy = 0;
  Jet5() = default;
  Jet5(double v_) : v(v_) {}
};
inline Jet5 operator+(const Jet5& a, const Jet5& b) {
  Jet5 r;
  r.v = a.v + b.v; r.dx = a.dx + b.dx; r.dy = a.dy + b.dy;
  r.dxx = a.dxx + b.dxx; r.dxy = a.dxy + b.dxy; r.dyy = a.dyy + b.dyy;
  return r;
}
inline Jet5 operator-(const Jet5& a, const Jet5& b) {
  Jet5 r;
  r.v = a.v - b.v; r.dx = a.dx - b.dx; r.dy = a.dy - b.dy;
  r.dxx = a.dxx - b.dxx; r.dxy = a.dxy - b.dxy; r.dyy = a.dyy - b.dyy;
  return r;
}
inline Jet5 operator*(const Jet5& a, const Jet5& b) {
  Jet5 r;
  r.v = a.v * b.v;
  r.dx = a.dx * b.v + a.v * b.dx;
  r.dy = a.dy * b.v + a.v * b.dy;
  r.dxx = a.dxx * b.v + 2 * a.dx * b.dx + a.v * b.dxx;
  r.dxy = a.dxy * b.v + a.dx * b.dy + a.dy * b.dx + a.v * b.dxy;
  r.dyy = a.dyy * b.v + 2 * a.dy * b.dy + a.v * b.dyy;
  return r;
}
inline Jet5 operator*(double s, const Jet5& a) {
  Jet5 r;
  r.v = s * a.v; r.dx = s * a.dx; r.dy = s * a.dy;
  r.dxx = s * a.dxx; r.dxy = s * a.dxy; r.dyy = s * a.dyy;
  return r;
}
inline Jet5 operator/(const Jet5& a, double s) { return (1.0 / s) * a; }

template <class T>
inline void koorn_eval_impl(int order, const T& x, const T& y, T* out) {
  const int np1 = order + 1;
  // homogenized inner factor: u = 2y - (1-x), v = 1-x;
  // L_0 = 1, L_1 = u, (m+1) L_{m+1} = (2m+1) u L_m - m v^2 L_{m-1}
  const T one(1.0);
  const T u = 2.0 * y - (one - x);
  const T v = one - x;
  const T v2 = v * v;
  std::vector<T> L(np1);
  L[0] = one;
  if (order >= 1) L[1] = u;
  for (int m = 1; m + 1 <= order; ++m)
    L[m + 1] = ((2 * m + 1) * (u * L[m]) - double(m) * (v2 * L[m - 1])) / double(m + 1);

  const T t = 2.0 * x - one;  // Jacobi argument
  for (int m = 0; m <= order; ++m) {
    const double a = 2 * m + 1;  // Jacobi alpha; beta = 0
    T p0 = one;
    T p1 = 0.5 * ((a * one) + (a + 2.0) * t);  // P_1^{(a,0)}
    for (int k = 0; m + k <= order; ++k) {
      const T& pk = (k == 0) ? p0 : p1;
      const int n = m + k;
      const double cmn = std::sqrt((2 * m + 1) * (2 * n + 2));
      out[koorn_index(m, n)] = cmn * (pk * L[m]);
      if (k >= 1 && m + k + 1 <= order) {
        const double nn = k, ab = a;
        const double c1 = 2 * (nn + 1) * (nn + ab + 1) * (2 * nn + ab);
        const double c2 = (2 * nn + ab + 1) * (ab * ab);
        const double c3 = (2 * nn + ab) * (2 * nn + ab + 1) * (2 * nn + ab + 2);
        const double c4 = 2 * (nn + ab) * nn * (2 * nn + ab + 2);
        T p2 = ((c2 * p1 + c3 * (t * p1)) - c4 * p0) / c1;
        p0 = p1;
        p1 = p2;
      }
    }
  }
}

}  // namespace detail

inline void check_in_simplex(double x, double y, double tol = 1e-9) {
  if (x < -tol || y < -tol || x + y > 1 + tol)
    throw std::domain_error("koornwinder: point outside the reference simplex");
}

// Values of all K_mn with m+n <= order at (x, y); out.size() >= koorn_size(order).
inline void koornwinder_eval(int order, double x, double y, std::span<double> out) {
  check_in_simplex(x, y);
  detail::koorn_eval_impl<double>(order, x, y, out.data());
}

inline std::vector<double> koornwinder_eval(int order, double x, double y) {
  std::vector<double> out(koorn_size(order));
  koornwinder_eval(order, x, y, out);
  return out;
}

// Values plus first derivatives.
inline void koornwinder_eval_grad(int order, double x, double y,
                                  std::span<double> val, std::span<double> ddx,
                                  std::span<double> ddy) {
  check_in_simplex(x, y);
  std::vector<detail::Jet2> out(koorn_size(order));
  const detail::Jet2 jx(x, 1, 0), jy(y, 0, 1);
  detail::koorn_eval_impl<detail::Jet2>(order, jx, jy, out.data());
  for (int i = 0; i < koorn_size(order); ++i) {
    val[i] = out[i].v;
    ddx[i] = out[i].dx;
    ddy[i] = out[i].dy;
  }
}

// Values plus first and second derivatives (for Laplacian spot checks).
inline void koornwinder_eval_hess(int order, double x, double y,
                                  std::span<double> val, std::span<double> ddx,
                                  std::span<double> ddy, std::span<double> dxx,
                                  std::span<double> dxy, std::span<double> dyy) {
  check_in_simplex(x, y);
  std::vector<detail::Jet5> out(koorn_size(order));
  detail::Jet5 jx(x), jy(y);
  jx.dx = 1;
  jy.dy = 1;
  detail::koorn_eval_impl<detail::Jet5>(order, jx, jy, out.data());
  for (int i = 0; i < koorn_size(order); ++i) {
    val[i] = out[i].v;
    ddx[i] = out[i].dx;
    ddy[i] = out[i].dy;
    dxx[i] = out[i].dxx;
    dxy[i] = out[i].dxy;
    dyy[i] = out[i].dyy;
  }
}

}  // namespace volpot
