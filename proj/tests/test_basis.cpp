#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "volpot/ggq.hpp"
#include "volpot/rules.hpp"

using namespace volpot;

namespace {

// test-only oracle: collapsed Gauss product rule on the simplex, exact for
// polynomials well past the orders used here
struct ProductRule {
  std::vector<Vec2> nodes;
  std::vector<double> weights;
};

ProductRule product_rule(int k) {
  const Rule1d g = gauss_legendre(k, 0.0, 1.0);
  ProductRule r;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const double u = g.x[i], v = g.x[j];
      r.nodes.push_back({u, v * (1 - u)});
      r.weights.push_back(g.w[i] * g.w[j] * (1 - u));
    }
  return r;
}

}  // namespace

TEST_CASE("K_00 is the constant sqrt(2)") {
  for (auto [x, y] : {std::pair{0.1, 0.3}, {0.0, 0.0}, {0.9999, 0.0}, {0.3, 0.7}}) {
    auto v = koornwinder_eval(12, x, y);
    CHECK(v[0] == Catch::Approx(std::sqrt(2.0)).margin(1e-14));
  }
}

TEST_CASE("Gram matrix is the identity under an exact product rule") {
  const int N = 12;
  const int d = koorn_size(N);
  auto pr = product_rule(2 * N + 4);
  std::vector<double> gram(d * d, 0.0), vals(d);
  for (std::size_t q = 0; q < pr.nodes.size(); ++q) {
    koornwinder_eval(N, pr.nodes[q].x, pr.nodes[q].y, vals);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j <= i; ++j) gram[i * d + j] += pr.weights[q] * vals[i] * vals[j];
  }
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j)
      worst = std::max(worst, std::abs(gram[i * d + j] - (i == j ? 1.0 : 0.0)));
  CHECK(worst <= 1e-12);
}

TEST_CASE("low-order moments vanish") {
  auto pr = product_rule(30);
  for (auto [m, n] : {std::pair{0, 1}, {1, 1}, {2, 3}}) {
    double acc = 0.0;
    std::vector<double> vals(koorn_size(n));
    for (std::size_t q = 0; q < pr.nodes.size(); ++q) {
      koornwinder_eval(n, pr.nodes[q].x, pr.nodes[q].y, vals);
      acc += pr.weights[q] * vals[koorn_index(m, n)];
    }
    CHECK(std::abs(acc) <= 1e-13);
  }
}

TEST_CASE("evaluation rejects points outside the simplex") {
  CHECK_THROWS_AS(koornwinder_eval(5, -1e-6, 0.2), std::domain_error);
  CHECK_THROWS_AS(koornwinder_eval(5, 0.6, 0.6), std::domain_error);
  CHECK_NOTHROW(koornwinder_eval(5, 0.0, 0.0));
  CHECK_NOTHROW(koornwinder_eval(5, 1.0, 0.0));  // x -> 1 limit is regular
}

TEST_CASE("gradients and hessians match finite differences") {
  const int N = 8;
  const int d = koorn_size(N);
  std::vector<double> v(d), dx(d), dy(d), xx(d), xy(d), yy(d);
  const double x = 0.31, y = 0.42, h = 1e-6;
  koornwinder_eval_hess(N, x, y, v, dx, dy, xx, xy, yy);
  auto vp = koornwinder_eval(N, x + h, y);
  auto vm = koornwinder_eval(N, x - h, y);
  auto wp = koornwinder_eval(N, x, y + h);
  auto wm = koornwinder_eval(N, x, y - h);
  for (int i = 0; i < d; ++i) {
    CHECK(dx[i] == Catch::Approx((vp[i] - vm[i]) / (2 * h)).margin(1e-5));
    CHECK(dy[i] == Catch::Approx((wp[i] - wm[i]) / (2 * h)).margin(1e-5));
    CHECK(xx[i] == Catch::Approx((vp[i] - 2 * v[i] + vm[i]) / (h * h)).margin(1e-3));
    CHECK(yy[i] == Catch::Approx((wp[i] - 2 * v[i] + wm[i]) / (h * h)).margin(1e-3));
  }
}

TEST_CASE("shipped far-field tables load and validate") {
  for (int order : {12, 20, 33, 40, 50}) {
    QuadRule r = load_far_rule(order);
    CHECK(r.order == order);
    CHECK(r.w_edge > 0.0);
    // observed for shipped tables: all weights bounded by 10 * w_edge
    for (double w : r.weights) CHECK(w <= 10.0 * r.w_edge);
  }
}

TEST_CASE("interp tables: length, condition number") {
  InterpRule r12 = load_interp_rule(12);
  CHECK(static_cast<int>(r12.size()) == 91);
  InterpRule r20 = load_interp_rule(20);
  CHECK(static_cast<int>(r20.size()) == 231);
  CHECK(r20.condition >= 150.0);
  CHECK(r20.condition <= 250.0);
}

TEST_CASE("malformed tables are rejected with the violated invariant") {
  {
    std::istringstream bad("V-R 1 3\n0.2 0.2 0.1\n0.6 0.2 -0.1\n0.2 0.6 0.5\n");
    CHECK_THROWS_WITH(load_rule(bad), Catch::Matchers::ContainsSubstring("weight"));
  }
  {
    std::istringstream bad("V-R 1 3\n0.2 0.2 0.1\n0.9 0.8 0.1\n0.2 0.6 0.3\n");
    CHECK_THROWS_WITH(load_rule(bad), Catch::Matchers::ContainsSubstring("outside"));
  }
  {
    // positive weights summing to 1/2 but not integrating K_01
    std::istringstream bad("V-R 1 2\n0.1 0.1 0.25\n0.3 0.3 0.25\n");
    CHECK_THROWS_WITH(load_rule(bad), Catch::Matchers::ContainsSubstring("exactness"));
  }
}

TEST_CASE("interpolation reproduces basis functions and constants") {
  InterpRule ir = load_interp_rule(12);
  const int d = koorn_size(12);
  Eigen::VectorXd values(d);
  // values of K_23 at the nodes -> unit coefficient at (2,3)
  std::vector<double> vals(d);
  for (int i = 0; i < d; ++i) {
    koornwinder_eval(12, ir.rule.nodes[i].x, ir.rule.nodes[i].y, vals);
    values(i) = vals[koorn_index(2, 3)];
  }
  Eigen::VectorXd coeffs = interp_coeffs(ir, values);
  for (int j = 0; j < d; ++j) {
    if (j == koorn_index(2, 3))
      CHECK(coeffs(j) == Catch::Approx(1.0).margin(1e-11));
    else
      CHECK(std::abs(coeffs(j)) <= 1e-11);
  }
  // constants: only the (0,0) coefficient survives, value 1/sqrt(2)
  coeffs = interp_coeffs(ir, Eigen::VectorXd::Ones(d));
  CHECK(coeffs(0) == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-12));
  for (int j = 1; j < d; ++j) CHECK(std::abs(coeffs(j)) <= 1e-12);

  CHECK_THROWS_AS(interp_coeffs(ir, Eigen::VectorXd::Ones(d + 1)), std::invalid_argument);
}

TEST_CASE("interpolate-then-evaluate reproduces random polynomials") {
  InterpRule ir = load_interp_rule(20);
  const int d = koorn_size(20);
  std::mt19937 rng(31337);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd truth(d);
  for (int j = 0; j < d; ++j) truth(j) = u(rng);
  Eigen::VectorXd values(d);
  for (int i = 0; i < d; ++i)
    values(i) =
        koorn_expansion_eval(20, truth, ir.rule.nodes[i].x, ir.rule.nodes[i].y);
  Eigen::VectorXd coeffs = interp_coeffs(ir, values);
  for (int k = 0; k < 50; ++k) {
    double x = u(rng) * 0.5 + 0.5, y = (u(rng) * 0.5 + 0.5) * (1 - x);
    const double a = koorn_expansion_eval(20, truth, x, y);
    const double b = koorn_expansion_eval(20, coeffs, x, y);
    CHECK(std::abs(a - b) <= ir.condition * 1e-13);
  }
}

TEST_CASE("radial rule: analytic moments") {
  RadialGGQ g = build_ggq(8);
  double m_r = 0.0, m_rlog = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    m_r += g.w[j] * g.r[j];
    m_rlog += g.w[j] * g.r[j] * std::log(g.r[j]);
  }
  CHECK(m_r == Catch::Approx(0.5).margin(1e-14));
  CHECK(m_rlog == Catch::Approx(-0.25).margin(1e-14));
}

TEST_CASE("radial rule matches a brute-force composite oracle") {
  RadialGGQ g = build_ggq(8);
  // oracle: 10^6-panel composite Gauss-Legendre of r log r P_8(2r-1)
  const Rule1d& g4 = gauss_legendre_cached(4);
  long double acc = 0.0;
  const int panels = 1000000;
  for (int p = 0; p < panels; ++p) {
    const double lo = static_cast<double>(p) / panels;
    const double hi = static_cast<double>(p + 1) / panels;
    for (int i = 0; i < 4; ++i) {
      const double r = 0.5 * (lo + hi) + 0.5 * (hi - lo) * g4.x[i];
      acc += 0.5 * (hi - lo) * g4.w[i] * r * std::log(r) * legendre(8, 2 * r - 1);
    }
  }
  double rule_val = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j)
    rule_val += g.w[j] * g.r[j] * std::log(g.r[j]) * legendre(8, 2 * g.r[j] - 1);
  CHECK(rule_val == Catch::Approx(static_cast<double>(acc)).margin(1e-12));
}

TEST_CASE("radial rule exactness across the product family and orders") {
  for (int ng : {2, 5, 8, 12, 16, 20}) {
    RadialGGQ g = build_ggq(ng);
    REQUIRE(static_cast<int>(g.size()) == ng + 1);
    for (std::size_t j = 0; j < g.size(); ++j) {
      CHECK(g.r[j] > 0.0);
      CHECK(g.r[j] < 1.0);
      CHECK(g.w[j] > 0.0);
    }
    std::vector<double> b, c;
    detail::ggq_moments(ng, b, c);
    for (int n = 0; n <= ng; ++n) {
      double s0 = 0.0, s1 = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double p = legendre(n, 2 * g.r[j] - 1);
        s0 += g.w[j] * g.r[j] * p;
        s1 += g.w[j] * g.r[j] * std::log(g.r[j]) * p;
      }
      CHECK(std::abs(s0 - b[n]) <= 1e-13);
      CHECK(std::abs(s1 - c[n]) <= 1e-13);
    }
  }
}

TEST_CASE("embedded fallback table is itself a valid rule") {
  RadialGGQ g = embedded_ggq8();
  double m_r = 0.0, m_rlog = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    m_r += g.w[j] * g.r[j];
    m_rlog += g.w[j] * g.r[j] * std::log(g.r[j]);
  }
  CHECK(m_r == Catch::Approx(0.5).margin(1e-13));
  CHECK(m_rlog == Catch::Approx(-0.25).margin(1e-13));
}
