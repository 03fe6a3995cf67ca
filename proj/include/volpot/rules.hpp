#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "volpot/geom.hpp"
#include "volpot/koornwinder.hpp"

namespace volpot {

enum class RuleKind { XiaoGimbutas, VioreanuRokhlin };

inline RuleKind parse_rule_kind(const std::string& s) {
  if (s == "X-G" || s == "XG" || s == "xiao-gimbutas") return RuleKind::XiaoGimbutas;
  if (s == "V-R" || s == "VR" || s == "vioreanu-rokhlin") return RuleKind::VioreanuRokhlin;
  throw std::runtime_error("rule table: unknown kind `" + s + "`");
}

// Quadrature rule on the standard simplex.  `order` is the polynomial
// exactness: all K_mn with m+n <= order integrate to their exact moments.
struct QuadRule {
  RuleKind kind = RuleKind::VioreanuRokhlin;
  int order = 0;
  std::vector<Vec2> nodes;
  std::vector<double> weights;
  // near-field calibration weight: max weight among nodes whose distance to
  // the nearest simplex edge is below the median such distance
  double w_edge = 0.0;

  std::size_t size() const { return nodes.size(); }
};

namespace detail {

inline double edge_distance(const Vec2& p) {
  return std::min({p.x, p.y, (1.0 - p.x - p.y) / std::sqrt(2.0)});
}

inline double compute_w_edge(const QuadRule& r) {
  std::vector<double> d(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) d[i] = edge_distance(r.nodes[i]);
  std::vector<double> sorted = d;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double median = sorted[sorted.size() / 2];
  double w = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (d[i] < median) w = std::max(w, r.weights[i]);
  return w;
}

}  // namespace detail

// Validates the full QuadRule contract and throws naming the violated
// invariant.
inline void validate_rule(const QuadRule& r) {
  if (r.nodes.empty()) throw std::runtime_error("rule table: empty rule");
  double wsum = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Vec2& p = r.nodes[i];
    if (r.weights[i] <= 0.0)
      throw std::runtime_error("rule table: non-positive weight (invariant: weights > 0)");
    if (p.x < 0 || p.y < 0 || p.x + p.y > 1)
      throw std::runtime_error("rule table: node outside the simplex");
    wsum += r.weights[i];
  }
  if (std::abs(wsum - 0.5) > 1e-13)
    throw std::runtime_error("rule table: weights do not sum to the simplex area");

  // exactness: sum_i w_i K_mn(y_i) vs the exact moments (only K_00 nonzero)
  const int d = koorn_size(r.order);
  std::vector<double> acc(d, 0.0), vals(d);
  for (std::size_t i = 0; i < r.size(); ++i) {
    koornwinder_eval(r.order, r.nodes[i].x, r.nodes[i].y, vals);
    for (int j = 0; j < d; ++j) acc[j] += r.weights[i] * vals[j];
  }
  acc[0] -= std::sqrt(2.0) * 0.5;
  for (int j = 0; j < d; ++j)
    if (std::abs(acc[j]) > 1e-12)
      throw std::runtime_error("rule table: exactness check failed at declared order");
}

// Text format: line 1 `kind N len`, then len lines `x y w`.
inline QuadRule load_rule(std::istream& in) {
  QuadRule r;
  std::string kind;
  int len = 0;
  if (!(in >> kind >> r.order >> len))
    throw std::runtime_error("rule table: malformed header (expected `kind N len`)");
  r.kind = parse_rule_kind(kind);
  r.nodes.resize(len);
  r.weights.resize(len);
  for (int i = 0; i < len; ++i)
    if (!(in >> r.nodes[i].x >> r.nodes[i].y >> r.weights[i]))
      throw std::runtime_error("rule table: truncated node list");
  validate_rule(r);
  r.w_edge = detail::compute_w_edge(r);
  return r;
}

inline QuadRule load_rule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("rule table: cannot open " + path);
  return load_rule(in);
}

inline std::string table_dir() {
  if (const char* env = std::getenv("VOLPOT_TABLE_DIR")) return env;
#ifdef VOLPOT_SOURCE_TABLE_DIR
  return VOLPOT_SOURCE_TABLE_DIR;
#else
  return "data/tables";
#endif
}

// Far-field rules shipped with the repo, by quadrature order.
inline QuadRule load_far_rule(int order) {
  char name[32];
  std::snprintf(name, sizeof(name), "/vr_o%02d.txt", order);
  return load_rule(table_dir() + name);
}

// Interpolation rule: a Vioreanu-Rokhlin rule whose length equals dim P_order,
// with the values-to-coefficients matrix.
struct InterpRule {
  QuadRule rule;
  Eigen::MatrixXd vandermonde;  // V(i,j) = K_j(node_i)
  Eigen::MatrixXd to_coeffs;    // V^{-1}
  double condition = 0.0;       // 2-norm condition number of V

  int order() const { return rule.order; }
  std::size_t size() const { return rule.size(); }
};

inline InterpRule make_interp_rule(QuadRule r) {
  const int d = koorn_size(r.order);
  if (static_cast<int>(r.size()) != d)
    throw std::runtime_error("interp rule: length must equal dim P_N");
  InterpRule ir;
  ir.vandermonde.resize(d, d);
  std::vector<double> vals(d);
  for (int i = 0; i < d; ++i) {
    koornwinder_eval(r.order, r.nodes[i].x, r.nodes[i].y, vals);
    for (int j = 0; j < d; ++j) ir.vandermonde(i, j) = vals[j];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(ir.vandermonde,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  ir.condition = svd.singularValues()(0) / svd.singularValues()(d - 1);
  ir.to_coeffs = ir.vandermonde.partialPivLu().inverse();
  ir.rule = std::move(r);
  return ir;
}

inline InterpRule load_interp_rule(int order) {
  char name[32];
  std::snprintf(name, sizeof(name), "/vr_i%02d.txt", order);
  return make_interp_rule(load_rule(table_dir() + name));
}

// values at the rule nodes -> Koornwinder coefficients
inline Eigen::VectorXd interp_coeffs(const InterpRule& ir,
                                     const Eigen::VectorXd& values) {
  if (values.size() != static_cast<Eigen::Index>(ir.size()))
    throw std::invalid_argument("interp_coeffs: value count must equal rule length");
  return ir.to_coeffs * values;
}

// Koornwinder expansion evaluated at a reference point.
inline double koorn_expansion_eval(int order, const Eigen::VectorXd& coeffs, double x,
                                   double y) {
  std::vector<double> vals(koorn_size(order));
  koornwinder_eval(order, x, y, vals);
  double s = 0.0;
  for (int j = 0; j < koorn_size(order); ++j) s += coeffs(j) * vals[j];
  return s;
}

}  // namespace volpot
