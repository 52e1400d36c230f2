#pragma once

// Quadrature rules on tets, triangles and segments, and a deterministic
// pairwise summation.

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace reilly {

enum class TetRule { Midpoint, FourPoint };

struct QuadPoint {
  Eigen::Vector4d bary;  // tets use all four, triangles the first three
  double weight;         // fraction of the cell measure
};

inline std::vector<QuadPoint> tet_rule(TetRule r) {
  if (r == TetRule::Midpoint) return {{Eigen::Vector4d::Constant(0.25), 1.0}};
  // Degree-2 rule with points on the lines from the centroid to the vertices.
  const double a = 0.5854101966249685, b = 0.1381966011250105;
  std::vector<QuadPoint> q;
  for (int k = 0; k < 4; ++k) {
    Eigen::Vector4d l = Eigen::Vector4d::Constant(b);
    l(k) = a;
    q.push_back({l, 0.25});
  }
  return q;
}

// Degree-2 interior three-point rule.
inline std::vector<QuadPoint> triangle_rule() {
  std::vector<QuadPoint> q;
  for (int k = 0; k < 3; ++k) {
    Eigen::Vector4d l(1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0, 0.0);
    l(k) = 2.0 / 3.0;
    q.push_back({l, 1.0 / 3.0});
  }
  return q;
}

// Three-point Gauss-Legendre on [0, 1]: (parameter, weight).
inline std::array<std::pair<double, double>, 3> segment_rule() {
  const double r = std::sqrt(0.6);
  return {{{0.5 * (1 - r), 5.0 / 18.0}, {0.5, 8.0 / 18.0}, {0.5 * (1 + r), 5.0 / 18.0}}};
}

// Sum in a fixed binary-tree order, so the result depends only on the input
// order and carries O(log n) rounding growth.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(std::span<const double>(v)); }

}  // namespace reilly
