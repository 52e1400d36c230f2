#pragma once

// Hodge Laplacian spectra on 0-, 1- and 2-forms of closed surfaces, split
// into harmonic / exact / coexact families and multiplicity clusters.
//
// Weak forms (M_p the diagonal stars):
//   0-forms  A = d0' M1 d0                                B = M0
//   1-forms  A = M1 d0 M0^-1 d0' M1 + d1' M2 d1           B = M1
//   2-forms  A = M2 d1 M1^-1 d1' M2                       B = M2
// Nonzero 0-form eigenfunctions are coexact and nonzero 2-form
// eigenforms are exact, following the Hodge decomposition.

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "reilly/dec.hpp"
#include "reilly/eigensolver.hpp"
#include "reilly/exterior.hpp"
#include "reilly/mesh.hpp"

namespace reilly {

enum class Family { Harmonic, Exact, Coexact };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::Harmonic: return "harmonic";
    case Family::Exact: return "exact";
    case Family::Coexact: return "coexact";
  }
  return "unknown";
}

struct Cluster {
  double value = 0.0;  // mean of members
  int multiplicity = 0;
  int first = 0;       // index of the first member
};

struct SpectrumOptions {
  SolverOptions solver{};
  DecOptions dec{};
  double cluster_gap = 1e-3;        // relative gap separating clusters
  double harmonic_threshold = 1e-9; // relative to the mean diagonal of the operator
};

struct SpectrumReport {
  int degree = 0;
  std::vector<double> eigenvalues;
  std::vector<Family> families;
  std::vector<int> cluster_id;
  std::vector<Cluster> clusters;
  std::vector<double> residuals;
  double cluster_gap = 1e-3;
  double harmonic_cutoff = 0.0;
  std::string method;
  int clamped_weights = 0;

  int count(Family f) const { return static_cast<int>(std::count(families.begin(), families.end(), f)); }

  std::optional<double> first_of(Family f) const {
    for (std::size_t i = 0; i < eigenvalues.size(); ++i)
      if (families[i] == f) return eigenvalues[i];
    return std::nullopt;
  }

  std::optional<double> first_nonzero() const {
    for (std::size_t i = 0; i < eigenvalues.size(); ++i)
      if (families[i] != Family::Harmonic) return eigenvalues[i];
    return std::nullopt;
  }

  // Cluster holding the first non-harmonic eigenvalue.
  std::optional<Cluster> first_nonzero_cluster() const {
    for (std::size_t i = 0; i < eigenvalues.size(); ++i)
      if (families[i] != Family::Harmonic) return clusters[cluster_id[i]];
    return std::nullopt;
  }

  std::vector<double> values_of(Family f) const {
    std::vector<double> out;
    for (std::size_t i = 0; i < eigenvalues.size(); ++i)
      if (families[i] == f) out.push_back(eigenvalues[i]);
    return out;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["degree"] = degree;
    j["method"] = method;
    j["cluster_gap"] = cluster_gap;
    j["harmonic_cutoff"] = harmonic_cutoff;
    j["clamped_weights"] = clamped_weights;
    j["eigenvalues"] = eigenvalues;
    j["residuals"] = residuals;
    j["families"] = nlohmann::json::array();
    for (auto f : families) j["families"].push_back(to_string(f));
    j["cluster_id"] = cluster_id;
    j["clusters"] = nlohmann::json::array();
    for (const auto& c : clusters) j["clusters"].push_back({{"value", c.value}, {"multiplicity", c.multiplicity}});
    j["counts"] = {{"harmonic", count(Family::Harmonic)},
                   {"exact", count(Family::Exact)},
                   {"coexact", count(Family::Coexact)}};
    return j;
  }

  void write_csv(std::ostream& os) const {
    os << "index,value,family,cluster\n";
    os.precision(17);
    for (std::size_t i = 0; i < eigenvalues.size(); ++i)
      os << i << ',' << eigenvalues[i] << ',' << to_string(families[i]) << ',' << cluster_id[i] << '\n';
  }
};

// Groups ascending values: a new cluster starts when the gap to the previous
// value exceeds `gap` times its magnitude. Values at or below `zero` form one
// cluster.
inline std::pair<std::vector<int>, std::vector<Cluster>> cluster_values(const std::vector<double>& v, double gap,
                                                                        double zero) {
  std::vector<int> id(v.size());
  std::vector<Cluster> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const bool join = i > 0 && ((v[i] <= zero && v[i - 1] <= zero) ||
                                (v[i - 1] > zero && v[i] - v[i - 1] <= gap * std::max(std::abs(v[i]), zero)));
    if (!join) out.push_back({0.0, 0, static_cast<int>(i)});
    auto& c = out.back();
    c.value = (c.value * c.multiplicity + v[i]) / (c.multiplicity + 1);
    ++c.multiplicity;
    id[i] = static_cast<int>(out.size()) - 1;
  }
  return {id, out};
}

namespace detail {

inline SpectrumReport make_report(int degree, const EigenResult& r, const SpectrumOptions& opt) {
  SpectrumReport rep;
  rep.degree = degree;
  rep.method = r.method;
  rep.cluster_gap = opt.cluster_gap;
  rep.harmonic_cutoff = opt.harmonic_threshold * r.diagonal_scale;
  rep.eigenvalues.assign(r.values.data(), r.values.data() + r.values.size());
  rep.residuals.assign(r.residuals.data(), r.residuals.data() + r.residuals.size());
  for (auto& v : rep.eigenvalues)
    if (std::abs(v) <= rep.harmonic_cutoff) v = std::max(v, 0.0);
  return rep;
}

inline void finalize_clusters(SpectrumReport& rep) {
  std::tie(rep.cluster_id, rep.clusters) = cluster_values(rep.eigenvalues, rep.cluster_gap, rep.harmonic_cutoff);
}

}  // namespace detail

inline SpectrumReport spectrum_functions(const SurfaceComplex& c, int k, const SpectrumOptions& opt = {}) {
  const auto op = assemble_dec(c, opt.dec);
  const SpMat a = SpMat(op.d0.transpose()) * op.star1.asDiagonal() * op.d0;
  const auto r = smallest_eigenpairs(a, op.star0, k, opt.solver);
  auto rep = detail::make_report(0, r, opt);
  rep.clamped_weights = op.clamped_vertices + op.clamped_edges;
  for (double v : rep.eigenvalues) rep.families.push_back(v <= rep.harmonic_cutoff ? Family::Harmonic : Family::Coexact);
  detail::finalize_clusters(rep);
  return rep;
}

inline SpectrumReport spectrum_two_forms(const SurfaceComplex& c, int k, const SpectrumOptions& opt = {}) {
  const auto op = assemble_dec(c, opt.dec);
  const Eigen::VectorXd m2 = op.star2;
  const SpMat a = m2.asDiagonal() * op.d1 * op.star1.cwiseInverse().asDiagonal() * SpMat(op.d1.transpose()) *
                  m2.asDiagonal();
  const auto r = smallest_eigenpairs(a, m2, k, opt.solver);
  auto rep = detail::make_report(2, r, opt);
  rep.clamped_weights = op.clamped_vertices + op.clamped_edges;
  for (double v : rep.eigenvalues) rep.families.push_back(v <= rep.harmonic_cutoff ? Family::Harmonic : Family::Exact);
  detail::finalize_clusters(rep);
  return rep;
}

inline SpectrumReport spectrum_one_forms(const SurfaceComplex& c, int k, const SpectrumOptions& opt = {}) {
  const auto op = assemble_dec(c, opt.dec);
  const Eigen::VectorXd& m1 = op.star1;
  const SpMat g = m1.asDiagonal() * op.d0;  // M1 d0
  const SpMat a_ex = g * op.star0.cwiseInverse().asDiagonal() * SpMat(g.transpose());
  const SpMat a_co = SpMat(op.d1.transpose()) * op.star2.asDiagonal() * op.d1;
  const SpMat a = a_ex + a_co;
  auto r = smallest_eigenpairs(a, m1, k, opt.solver);
  auto rep = detail::make_report(1, r, opt);
  rep.clamped_weights = op.clamped_vertices + op.clamped_edges;
  std::tie(rep.cluster_id, rep.clusters) = cluster_values(rep.eigenvalues, rep.cluster_gap, rep.harmonic_cutoff);

  // Within each cluster, diagonalize the exact part of the energy so that
  // every vector is purely exact or purely coexact.
  rep.families.assign(rep.eigenvalues.size(), Family::Harmonic);
  for (const auto& cl : rep.clusters) {
    if (rep.eigenvalues[cl.first] <= rep.harmonic_cutoff) continue;
    const Eigen::MatrixXd y = r.vectors.middleCols(cl.first, cl.multiplicity);
    Eigen::MatrixXd q = y.transpose() * (a_ex * y);
    q = 0.5 * (q + q.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
    const Eigen::MatrixXd z = y * es.eigenvectors();
    const Eigen::MatrixXd az = a * z;
    std::vector<std::pair<double, Family>> members;
    for (int j = 0; j < cl.multiplicity; ++j) {
      const double lam = z.col(j).dot(az.col(j)) / z.col(j).dot(m1.asDiagonal() * z.col(j));
      members.emplace_back(lam, es.eigenvalues()(j) >= 0.5 * lam ? Family::Exact : Family::Coexact);
    }
    std::sort(members.begin(), members.end(), [](const auto& l, const auto& r2) { return l.first < r2.first; });
    for (int j = 0; j < cl.multiplicity; ++j) {
      rep.eigenvalues[cl.first + j] = members[j].first;
      rep.families[cl.first + j] = members[j].second;
    }
  }
  return rep;
}

// First eigenvalue of the Hodge Laplacian on exact p-forms of the unit
// n-sphere and its multiplicity.
inline std::pair<long long, long long> sphere_hodge_oracle(int n, int p) {
  if (n < 1 || p < 1 || p > n) throw std::invalid_argument("sphere_hodge_oracle: need 1 <= p <= n");
  return {static_cast<long long>(p) * (n - p + 1), binomial(n + 1, p)};
}

}  // namespace reilly
