#pragma once

// Smallest eigenpairs of A x = lambda B x with A symmetric positive
// semidefinite and B diagonal positive. Dense for small problems, block
// shift-invert Krylov with full reorthogonalization and restarts otherwise.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace reilly {

using SpMat = Eigen::SparseMatrix<double>;

struct SolverOptions {
  int dense_max = 1000;      // dense solve up to this many unknowns
  double tolerance = 1e-10;  // residual relative to the operator norm estimate
  int max_restarts = 300;
  int block_size = 0;        // 0: k + 10
  int krylov_blocks = 4;
  unsigned seed = 12345;
};

struct EigenResult {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // B-orthonormal columns
  Eigen::VectorXd residuals;  // ||A x - lambda B x||_{B^-1} per pair
  double operator_norm = 0.0;   // Gershgorin bound of B^-1/2 A B^-1/2
  double diagonal_scale = 0.0;  // mean diagonal of the same
  int restarts = 0;
  std::string method;
};

class EigenSolverError : public std::runtime_error {
 public:
  EigenSolverError(const std::string& what, Eigen::VectorXd residuals)
      : std::runtime_error(what), residuals_(std::move(residuals)) {}
  const Eigen::VectorXd& residuals() const { return residuals_; }

 private:
  Eigen::VectorXd residuals_;
};

namespace detail {

// Orthonormalizes the columns of z against q and among themselves (two
// passes of classical Gram-Schmidt, then Householder QR). Columns that
// collapse are replaced by fresh random directions.
inline Eigen::MatrixXd orthonormal_block(const Eigen::MatrixXd& q, Eigen::MatrixXd z, std::mt19937& rng) {
  std::normal_distribution<double> g;
  for (int attempt = 0; attempt < 3; ++attempt) {
    for (int pass = 0; pass < 2; ++pass)
      if (q.cols() > 0) z -= q * (q.transpose() * z);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(z.cols()).triangularView<Eigen::Upper>();
    const double scale = std::max(r.diagonal().cwiseAbs().maxCoeff(), 1e-300);
    bool ok = true;
    for (Eigen::Index j = 0; j < z.cols(); ++j)
      if (std::abs(r(j, j)) < 1e-10 * scale) {
        for (Eigen::Index i = 0; i < z.rows(); ++i) z(i, j) = g(rng);
        ok = false;
      }
    if (ok) {
      Eigen::MatrixXd out = qr.householderQ() * Eigen::MatrixXd::Identity(z.rows(), z.cols());
      for (int pass = 0; pass < 2; ++pass)
        if (q.cols() > 0) out -= q * (q.transpose() * out);
      return Eigen::HouseholderQR<Eigen::MatrixXd>(out).householderQ() * Eigen::MatrixXd::Identity(z.rows(), z.cols());
    }
  }
  throw EigenSolverError("could not extend the Krylov basis", Eigen::VectorXd());
}

inline double gershgorin_norm(const SpMat& c) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(c.rows());
  for (int k = 0; k < c.outerSize(); ++k)
    for (SpMat::InnerIterator it(c, k); it; ++it) rows(it.row()) += std::abs(it.value());
  return rows.size() ? rows.maxCoeff() : 0.0;
}

}  // namespace detail

inline EigenResult smallest_eigenpairs(const SpMat& a, const Eigen::VectorXd& b, int k, const SolverOptions& opt = {}) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b.size() != n) throw std::invalid_argument("eigensolver: dimension mismatch");
  if ((b.array() <= 0).any()) throw std::invalid_argument("eigensolver: mass matrix must be positive");
  k = static_cast<int>(std::min<Eigen::Index>(k, n));
  if (k < 1) throw std::invalid_argument("eigensolver: k must be positive");

  const Eigen::VectorXd bis = b.cwiseSqrt().cwiseInverse();
  SpMat c = bis.asDiagonal() * a * bis.asDiagonal();
  c = 0.5 * (c + SpMat(c.transpose()));
  EigenResult res;
  res.operator_norm = detail::gershgorin_norm(c);
  res.diagonal_scale = c.diagonal().mean();
  const double norm = std::max(res.operator_norm, 1e-300);

  auto finish = [&](const Eigen::VectorXd& vals, const Eigen::MatrixXd& y) {
    res.values = vals;
    res.vectors = bis.asDiagonal() * y;
    res.residuals.resize(y.cols());
    for (Eigen::Index j = 0; j < y.cols(); ++j) res.residuals(j) = (c * y.col(j) - vals(j) * y.col(j)).norm();
  };

  if (n <= opt.dense_max) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(c)};
    if (es.info() != Eigen::Success) throw EigenSolverError("dense eigensolver failed", Eigen::VectorXd());
    res.method = "dense";
    finish(es.eigenvalues().head(k), es.eigenvectors().leftCols(k));
    return res;
  }

  // Shift slightly below zero so that C - sigma I is positive definite.
  const double sigma = -1e-6 * std::max(c.diagonal().mean(), 1e-300);
  SpMat shifted = c;
  for (Eigen::Index i = 0; i < n; ++i) shifted.coeffRef(i, i) -= sigma;
  Eigen::SimplicialLDLT<SpMat> ldlt(shifted);
  if (ldlt.info() != Eigen::Success) throw EigenSolverError("factorization of the shifted operator failed", Eigen::VectorXd());

  const int bs = static_cast<int>(std::min<Eigen::Index>(opt.block_size > 0 ? opt.block_size : k + 10, n));
  const int blocks = std::max(2, opt.krylov_blocks);
  std::mt19937 rng(opt.seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd x0(n, bs);
  for (Eigen::Index i = 0; i < x0.size(); ++i) x0.data()[i] = g(rng);
  Eigen::MatrixXd y = detail::orthonormal_block(Eigen::MatrixXd(n, 0), x0, rng);

  Eigen::VectorXd last_res = Eigen::VectorXd::Constant(k, std::numeric_limits<double>::infinity());
  for (int restart = 0; restart < opt.max_restarts; ++restart) {
    const int maxdim = static_cast<int>(std::min<Eigen::Index>(static_cast<Eigen::Index>(bs) * blocks, n));
    Eigen::MatrixXd v(n, 0), w(n, 0);
    Eigen::MatrixXd block = y;
    while (true) {
      const Eigen::MatrixXd z = ldlt.solve(block);
      v.conservativeResize(n, v.cols() + block.cols());
      v.rightCols(block.cols()) = block;
      w.conservativeResize(n, w.cols() + z.cols());
      w.rightCols(z.cols()) = z;
      const Eigen::Index room = maxdim - v.cols();
      if (room <= 0) break;
      block = detail::orthonormal_block(v, z.leftCols(std::min<Eigen::Index>(room, z.cols())), rng);
    }
    Eigen::MatrixXd h = v.transpose() * w;
    h = 0.5 * (h + h.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    // Largest theta of the inverse are the smallest lambda.
    const Eigen::Index q = h.rows();
    Eigen::MatrixXd u = es.eigenvectors().rowwise().reverse();
    const Eigen::MatrixXd ritz = v * u.leftCols(std::min<Eigen::Index>(bs, q));

    // Rayleigh quotients and residuals in the original operator.
    Eigen::VectorXd lam(k), r(k);
    const Eigen::MatrixXd cx = c * ritz.leftCols(k);
    for (int j = 0; j < k; ++j) {
      lam(j) = ritz.col(j).dot(cx.col(j));
      r(j) = (cx.col(j) - lam(j) * ritz.col(j)).norm();
    }
    res.restarts = restart + 1;
    last_res = r;
    if (r.maxCoeff() <= opt.tolerance * norm) {
      // Final Rayleigh-Ritz on the converged block to sort and decouple clusters.
      Eigen::MatrixXd yk = ritz.leftCols(k);
      Eigen::MatrixXd hk = yk.transpose() * (c * yk);
      hk = 0.5 * (hk + hk.transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> fin(hk);
      res.method = "block_shift_invert_krylov";
      finish(fin.eigenvalues(), yk * fin.eigenvectors());
      return res;
    }
    y = ritz;
  }
  char worst[32];
  std::snprintf(worst, sizeof worst, "%.3e", last_res.maxCoeff());
  throw EigenSolverError("eigensolver did not converge after " + std::to_string(opt.max_restarts) +
                             " restarts; worst residual " + worst,
                         last_res);
}

}  // namespace reilly
