#pragma once

// p-curvatures of a hypersurface point, convexity predicates and the scalar
// curvature terms acting on p-forms that the eigenvalue estimates use.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "reilly/exterior.hpp"

namespace reilly {

class CurvatureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Principal data at one surface point, w.r.t. the inner unit normal.
struct ShapeData {
  std::vector<double> principal;  // ascending
  Eigen::MatrixXd shape_matrix;   // symmetric, in an orthonormal tangent frame
  double mean = 0.0;              // H = trace / n
  std::vector<double> sigma;      // sigma[p-1] = eta_1 + ... + eta_p

  int dim() const { return static_cast<int>(principal.size()); }

  // Lowest p-curvature, 1 <= p <= n.
  double sigma_p(int p) const {
    if (p < 1 || p > dim()) throw CurvatureError("sigma_p: degree out of range");
    return sigma[p - 1];
  }
};

inline ShapeData make_shape_data(const Eigen::MatrixXd& shape) {
  if (shape.rows() != shape.cols() || shape.rows() == 0)
    throw CurvatureError("shape matrix must be square and non-empty");
  ShapeData d;
  d.shape_matrix = 0.5 * (shape + shape.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d.shape_matrix, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  d.principal.assign(ev.data(), ev.data() + ev.size());
  d.mean = d.shape_matrix.trace() / static_cast<double>(ev.size());
  d.sigma.resize(d.principal.size());
  std::partial_sum(d.principal.begin(), d.principal.end(), d.sigma.begin());
  return d;
}

inline ShapeData make_shape_data(std::span<const double> principal) {
  const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(principal.data(),
                                                               static_cast<Eigen::Index>(principal.size()));
  return make_shape_data(Eigen::MatrixXd(v.asDiagonal()));
}

inline ShapeData make_shape_data(std::initializer_list<double> principal) {
  const std::vector<double> v(principal);
  return make_shape_data(std::span<const double>(v));
}

// All p-fold sums of distinct principal curvatures, ascending.
inline std::vector<double> p_curvature_list(std::span<const double> principal, int p) {
  const int n = static_cast<int>(principal.size());
  if (p < 1 || p > n) throw CurvatureError("p_curvature_list: p out of range");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(binomial(n, p)));
  for (const auto& idx : basis_indices(n, p)) {
    double s = 0.0;
    for (int i : idx) s += principal[i];
    out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<double> p_curvature_list(const std::vector<double>& principal, int p) {
  return p_curvature_list(std::span<const double>(principal), p);
}

// sigma_p over a sample of points: the minimum of the pointwise values.
inline double sigma_global(std::span<const ShapeData> points, int p) {
  if (points.empty()) throw CurvatureError("sigma_global: empty sample");
  double m = points.front().sigma_p(p);
  for (const auto& d : points) m = std::min(m, d.sigma_p(p));
  return m;
}

inline double sigma_global(const std::vector<ShapeData>& points, int p) {
  return sigma_global(std::span<const ShapeData>(points), p);
}

enum class Convexity { NonStrict, Strict };

inline bool is_p_convex(std::span<const ShapeData> points, int p, Convexity mode = Convexity::NonStrict) {
  const double s = sigma_global(points, p);
  return mode == Convexity::Strict ? s > 0.0 : s >= 0.0;
}

inline bool is_p_convex(const std::vector<ShapeData>& points, int p, Convexity mode = Convexity::NonStrict) {
  return is_p_convex(std::span<const ShapeData>(points), p, mode);
}

// ||S||_p^2: the largest sum of p squared principal curvatures.
inline double s_norm_p(std::span<const double> principal, int p) {
  const int n = static_cast<int>(principal.size());
  if (p < 1 || p > n) throw CurvatureError("s_norm_p: p out of range");
  std::vector<double> sq(principal.begin(), principal.end());
  for (auto& x : sq) x *= x;
  std::sort(sq.begin(), sq.end(), std::greater<>());
  return std::accumulate(sq.begin(), sq.begin() + p, 0.0);
}

inline double s_norm_p(const std::vector<double>& principal, int p) {
  return s_norm_p(std::span<const double>(principal), p);
}

// Lower bound p(n+1-p)gamma of the curvature term on p-forms of an
// (n+1)-manifold whose curvature operator is bounded below by gamma.
inline double gallot_meyer_bound(double gamma, int ambient_dim, int p) {
  const int n = ambient_dim - 1;
  if (p < 1 || p > n) throw CurvatureError("gallot_meyer_bound: p out of range");
  return p * (n + 1 - p) * gamma;
}

// Curvature term on middle-degree forms of a locally conformally flat
// 2m-manifold with scalar curvature R.
inline double bourguignon_w(double scalar_curvature, int m) {
  if (m < 1) throw CurvatureError("bourguignon_w: m must be positive");
  return m * scalar_curvature / (2.0 * (2 * m - 1));
}

struct ConstantCurvature {
  double kappa;
};
struct GallotMeyerLowerBound {
  double gamma;
};
struct LcfMiddleDegree {
  double scalar_curvature;
};

// Scalar rule for the Bochner curvature term on p-forms of an (n+1)-manifold.
class CurvatureTerm {
 public:
  using Kind = std::variant<ConstantCurvature, GallotMeyerLowerBound, LcfMiddleDegree>;

  explicit CurvatureTerm(Kind kind) : kind_(kind) {}

  static CurvatureTerm flat() { return CurvatureTerm(ConstantCurvature{0.0}); }

  const Kind& kind() const { return kind_; }

  // True when value() is the exact eigenvalue of W^[p], not a lower bound.
  bool is_exact() const { return !std::holds_alternative<GallotMeyerLowerBound>(kind_); }

  double value(int ambient_dim, int p) const {
    const int n = ambient_dim - 1;
    if (p < 0 || p > ambient_dim) throw CurvatureError("curvature term: p out of range");
    if (const auto* c = std::get_if<ConstantCurvature>(&kind_)) return p * (n + 1 - p) * c->kappa;
    if (const auto* g = std::get_if<GallotMeyerLowerBound>(&kind_))
      return gallot_meyer_bound(g->gamma, ambient_dim, p);
    const auto& l = std::get<LcfMiddleDegree>(kind_);
    if (ambient_dim % 2 != 0 || 2 * p != ambient_dim)
      throw CurvatureError("LCF curvature term is only defined in the middle degree");
    return bourguignon_w(l.scalar_curvature, p);
  }

  std::string name() const {
    return std::visit(
        [](const auto& k) -> std::string {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, ConstantCurvature>) return "constant_curvature";
          else if constexpr (std::is_same_v<T, GallotMeyerLowerBound>) return "gallot_meyer_lower_bound";
          else return "lcf_middle_degree";
        },
        kind_);
  }

 private:
  Kind kind_;
};

// One CSV row per sample point: index, eta_1..eta_n, H, sigma_1..sigma_n.
inline void write_curvature_csv(std::ostream& os, std::span<const ShapeData> points) {
  if (points.empty()) return;
  const int n = points.front().dim();
  os << "vertex";
  for (int i = 1; i <= n; ++i) os << ",eta" << i;
  os << ",H";
  for (int i = 1; i <= n; ++i) os << ",sigma" << i;
  os << '\n';
  os.precision(17);
  for (std::size_t v = 0; v < points.size(); ++v) {
    os << v;
    for (double e : points[v].principal) os << ',' << e;
    os << ',' << points[v].mean;
    for (double s : points[v].sigma) os << ',' << s;
    os << '\n';
  }
}

}  // namespace reilly
