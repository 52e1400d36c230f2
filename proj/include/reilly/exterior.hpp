#pragma once

// Finite-dimensional exterior algebra over an oriented Euclidean space.
//
// A p-form on R^dim is stored by its coefficients on the orthonormal basis
// e^I = e^{i1} ^ ... ^ e^{ip}, i1 < ... < ip, in lexicographic order of I.
// Indices are 0-based throughout.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "reilly/autodiff.hpp"

namespace reilly {

class ExteriorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using MultiIndex = std::vector<int>;

inline std::int64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Lexicographic rank of an increasing multi-index among all C(dim, p) of them,
// via the combinatorial number system on the reflected indices.
inline int rank_of(std::span<const int> idx, int dim) {
  const int p = static_cast<int>(idx.size());
  std::int64_t colex = 0;
  for (int j = 0; j < p; ++j) colex += binomial(dim - 1 - idx[j], p - j);
  return static_cast<int>(binomial(dim, p) - 1 - colex);
}

inline MultiIndex unrank(int dim, int p, int rank) {
  if (p < 0 || p > dim || rank < 0 || rank >= binomial(dim, p))
    throw ExteriorError("unrank: rank " + std::to_string(rank) + " out of range for C(" +
                        std::to_string(dim) + "," + std::to_string(p) + ")");
  MultiIndex idx(p);
  int next = 0;
  std::int64_t r = rank;
  for (int j = 0; j < p; ++j) {
    // Count combinations that start with `next` at slot j; skip blocks until r falls inside.
    for (;; ++next) {
      const std::int64_t block = binomial(dim - 1 - next, p - 1 - j);
      if (r < block) break;
      r -= block;
    }
    idx[j] = next++;
  }
  return idx;
}

// All increasing multi-indices of length p, in rank order.
inline std::vector<MultiIndex> basis_indices(int dim, int p) {
  std::vector<MultiIndex> out;
  if (p < 0 || p > dim) return out;
  out.reserve(static_cast<std::size_t>(binomial(dim, p)));
  MultiIndex cur(p);
  std::iota(cur.begin(), cur.end(), 0);
  while (true) {
    out.push_back(cur);
    int j = p - 1;
    while (j >= 0 && cur[j] == dim - p + j) --j;
    if (j < 0) break;
    ++cur[j];
    for (int t = j + 1; t < p; ++t) cur[t] = cur[t - 1] + 1;
  }
  return out;
}

// Sorts `idx` in place and returns the sign of the sorting permutation,
// or 0 when an index repeats.
inline int sort_with_sign(MultiIndex& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return 0;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  }
  return sign;
}

template <class Scalar = double>
class BasicForm {
 public:
  using scalar_type = Scalar;

  BasicForm() : BasicForm(0, 0) {}

  BasicForm(int dim, int degree) : dim_(dim), degree_(degree) {
    check_shape(dim, degree);
    coeffs_.assign(static_cast<std::size_t>(binomial(dim, degree)), Scalar(0));
  }

  BasicForm(int dim, int degree, std::vector<Scalar> coeffs)
      : dim_(dim), degree_(degree), coeffs_(std::move(coeffs)) {
    check_shape(dim, degree);
    if (static_cast<std::int64_t>(coeffs_.size()) != binomial(dim, degree))
      throw ExteriorError("form of degree " + std::to_string(degree) + " on R^" +
                          std::to_string(dim) + " needs " +
                          std::to_string(binomial(dim, degree)) + " coefficients, got " +
                          std::to_string(coeffs_.size()));
  }

  static BasicForm scalar(int dim, Scalar value) { return BasicForm(dim, 0, {value}); }

  // e^{idx} with the sign of the sorting permutation applied.
  static BasicForm basis(int dim, MultiIndex idx) {
    BasicForm f(dim, static_cast<int>(idx.size()));
    for (int i : idx)
      if (i < 0 || i >= dim) throw ExteriorError("basis index out of range");
    const int s = sort_with_sign(idx);
    if (s != 0) f.coeffs_[rank_of(idx, dim)] = Scalar(s);
    return f;
  }

  // The 1-form v^flat.
  static BasicForm covector(std::span<const Scalar> v) {
    const int dim = static_cast<int>(v.size());
    return BasicForm(dim, 1, std::vector<Scalar>(v.begin(), v.end()));
  }

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  std::size_t size() const { return coeffs_.size(); }
  std::span<const Scalar> coeffs() const { return coeffs_; }
  std::span<Scalar> coeffs() { return coeffs_; }

  Scalar& operator[](std::size_t rank) { return coeffs_[rank]; }
  const Scalar& operator[](std::size_t rank) const { return coeffs_[rank]; }

  // Coefficient on e^{idx} for an arbitrary (unsorted) multi-index.
  Scalar component(MultiIndex idx) const {
    const int s = sort_with_sign(idx);
    if (s == 0) return Scalar(0);
    const Scalar c = coeffs_[rank_of(idx, dim_)];
    return s > 0 ? c : -c;
  }

  Scalar norm_squared() const {
    Scalar acc(0);
    for (const auto& c : coeffs_) acc += c * c;
    return acc;
  }

  BasicForm& operator+=(const BasicForm& o) {
    check_same(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  BasicForm& operator-=(const BasicForm& o) {
    check_same(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  BasicForm& operator*=(const Scalar& s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }

  friend BasicForm operator+(BasicForm a, const BasicForm& b) { return a += b; }
  friend BasicForm operator-(BasicForm a, const BasicForm& b) { return a -= b; }
  friend BasicForm operator*(BasicForm a, const Scalar& s) { return a *= s; }
  friend BasicForm operator*(const Scalar& s, BasicForm a) { return a *= s; }
  friend BasicForm operator-(BasicForm a) { return a *= Scalar(-1); }

 private:
  static void check_shape(int dim, int degree) {
    if (dim < 0) throw ExteriorError("negative dimension");
    if (degree < 0 || degree > dim)
      throw ExteriorError("degree " + std::to_string(degree) + " outside [0, " +
                          std::to_string(dim) + "]");
  }
  void check_same(const BasicForm& o) const {
    if (o.dim_ != dim_ || o.degree_ != degree_) throw ExteriorError("form shape mismatch");
  }

  int dim_;
  int degree_;
  std::vector<Scalar> coeffs_;
};

using Form = BasicForm<double>;

template <class S>
S inner(const BasicForm<S>& a, const BasicForm<S>& b) {
  if (a.dim() != b.dim() || a.degree() != b.degree())
    throw ExteriorError("inner product of forms with different shapes");
  S acc(0);
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

template <class S>
double max_abs(const BasicForm<S>& a) {
  double m = 0.0;
  for (const auto& c : a.coeffs()) m = std::max(m, std::abs(value_of(c)));
  return m;
}

template <class S>
BasicForm<S> wedge(const BasicForm<S>& a, const BasicForm<S>& b) {
  if (a.dim() != b.dim()) throw ExteriorError("wedge: dimension mismatch");
  const int dim = a.dim();
  const int p = a.degree() + b.degree();
  if (p > dim) throw ExteriorError("wedge: degree overflow");
  BasicForm<S> out(dim, p);
  const auto ia = basis_indices(dim, a.degree());
  const auto ib = basis_indices(dim, b.degree());
  MultiIndex joined(p);
  for (std::size_t i = 0; i < ia.size(); ++i) {
    if (value_of(a[i]) == 0.0 && deriv_of(a[i]) == 0.0) continue;
    for (std::size_t j = 0; j < ib.size(); ++j) {
      std::copy(ia[i].begin(), ia[i].end(), joined.begin());
      std::copy(ib[j].begin(), ib[j].end(), joined.begin() + a.degree());
      const int s = sort_with_sign(joined);
      if (s == 0) continue;
      const S term = a[i] * b[j];
      auto& slot = out[rank_of(joined, dim)];
      if (s > 0) slot += term; else slot -= term;
    }
  }
  return out;
}

// Sign making e^I ^ star(e^I) the volume form.
inline int hodge_sign(const MultiIndex& idx, int dim) {
  MultiIndex perm = idx;
  for (int k = 0; k < dim; ++k)
    if (!std::binary_search(idx.begin(), idx.end(), k)) perm.push_back(k);
  return sort_with_sign(perm);
}

template <class S>
BasicForm<S> hodge_star(const BasicForm<S>& a) {
  const int dim = a.dim();
  BasicForm<S> out(dim, dim - a.degree());
  const auto idx = basis_indices(dim, a.degree());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    MultiIndex comp;
    for (int k = 0; k < dim; ++k)
      if (!std::binary_search(idx[i].begin(), idx[i].end(), k)) comp.push_back(k);
    const int s = hodge_sign(idx[i], dim);
    auto& slot = out[rank_of(comp, dim)];
    slot = s > 0 ? a[i] : -a[i];
  }
  return out;
}

template <class S>
BasicForm<S> interior_product(std::span<const S> v, const BasicForm<S>& a) {
  if (static_cast<int>(v.size()) != a.dim())
    throw ExteriorError("interior_product: vector/form dimension mismatch");
  if (a.degree() == 0) throw ExteriorError("interior_product: contraction of a 0-form");
  const int dim = a.dim();
  const int p = a.degree();
  BasicForm<S> out(dim, p - 1);
  const auto idx = basis_indices(dim, p);
  MultiIndex rest(p - 1);
  for (std::size_t r = 0; r < idx.size(); ++r) {
    for (int j = 0; j < p; ++j) {
      int t = 0;
      for (int m = 0; m < p; ++m)
        if (m != j) rest[t++] = idx[r][m];
      const S term = v[idx[r][j]] * a[r];
      auto& slot = out[rank_of(rest, dim)];
      if (j % 2 == 0) slot += term; else slot -= term;
    }
  }
  return out;
}

template <class S>
BasicForm<S> interior_product(const std::vector<S>& v, const BasicForm<S>& a) {
  return interior_product(std::span<const S>(v), a);
}

// det of the p x p block: rows = ambient coordinates `rows`, cols = frame vectors `cols`.
template <class S>
S minor_det(const std::vector<std::vector<S>>& frame, const MultiIndex& rows, const MultiIndex& cols) {
  const std::size_t p = rows.size();
  if (p == 0) return S(1);
  if (p == 1) return frame[cols[0]][rows[0]];
  if (p == 2)
    return frame[cols[0]][rows[0]] * frame[cols[1]][rows[1]] -
           frame[cols[1]][rows[0]] * frame[cols[0]][rows[1]];
  // Laplace expansion along the first row; p stays small (<= ambient dim).
  S acc(0);
  for (std::size_t c = 0; c < p; ++c) {
    MultiIndex sub_rows(rows.begin() + 1, rows.end());
    MultiIndex sub_cols;
    for (std::size_t t = 0; t < p; ++t)
      if (t != c) sub_cols.push_back(cols[t]);
    const S term = frame[cols[c]][rows[0]] * minor_det(frame, sub_rows, sub_cols);
    if (c % 2 == 0) acc += term; else acc -= term;
  }
  return acc;
}

// Pullback of `a` along the linear map whose columns are `frame[0..m-1]`:
// (F^* a)(u_1..u_p) = a(F u_1, ..., F u_p). With an orthonormal frame of a
// subspace this is the restriction to that subspace in frame coordinates.
template <class S>
BasicForm<S> pullback(const BasicForm<S>& a, const std::vector<std::vector<S>>& frame) {
  const int m = static_cast<int>(frame.size());
  const int p = a.degree();
  if (p > m) throw ExteriorError("pullback: degree exceeds target dimension");
  for (const auto& col : frame)
    if (static_cast<int>(col.size()) != a.dim()) throw ExteriorError("pullback: frame size");
  BasicForm<S> out(m, p);
  const auto src = basis_indices(a.dim(), p);
  const auto dst = basis_indices(m, p);
  for (std::size_t j = 0; j < dst.size(); ++j) {
    S acc(0);
    for (std::size_t i = 0; i < src.size(); ++i)
      acc += a[i] * minor_det(frame, src[i], dst[j]);
    out[j] = acc;
  }
  return out;
}

// Push a form on an m-dimensional subspace, given in frame coordinates, back to
// the ambient space (the form vanishing on the orthogonal complement).
template <class S>
BasicForm<S> embed(const BasicForm<S>& a, const std::vector<std::vector<S>>& frame, int ambient_dim) {
  if (static_cast<int>(frame.size()) != a.dim()) throw ExteriorError("embed: frame size");
  const int p = a.degree();
  BasicForm<S> out(ambient_dim, p);
  const auto src = basis_indices(a.dim(), p);
  const auto dst = basis_indices(ambient_dim, p);
  for (std::size_t j = 0; j < dst.size(); ++j) {
    S acc(0);
    for (std::size_t i = 0; i < src.size(); ++i)
      acc += a[i] * minor_det(frame, dst[j], src[i]);
    out[j] = acc;
  }
  return out;
}

// Canonical derivation extension of a symmetric endomorphism to p-forms.
struct InducedEndomorphism {
  Eigen::MatrixXd base;
  int degree = 0;
  Eigen::MatrixXd matrix;

  template <class S>
  BasicForm<S> apply(const BasicForm<S>& a) const {
    if (a.degree() != degree || a.dim() != base.rows())
      throw ExteriorError("induced endomorphism applied to a form of the wrong shape");
    BasicForm<S> out(a.dim(), degree);
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
      S acc(0);
      for (Eigen::Index j = 0; j < matrix.cols(); ++j)
        if (matrix(i, j) != 0.0) acc += S(matrix(i, j)) * a[j];
      out[i] = acc;
    }
    return out;
  }
};

inline bool is_symmetric(const Eigen::MatrixXd& m, double tol = 1e-12) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

inline InducedEndomorphism induced_endomorphism(const Eigen::MatrixXd& base, int p) {
  if (!is_symmetric(base)) throw ExteriorError("induced_endomorphism: base map is not symmetric");
  const int dim = static_cast<int>(base.rows());
  if (p < 0 || p > dim) throw ExteriorError("induced_endomorphism: degree out of range");
  const auto idx = basis_indices(dim, p);
  const auto n = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  // (S^[p] e^J)(e_I) = sum_j sum_k S(k, I_j) e^J(e_I with slot j replaced by e_k)
  MultiIndex t;
  for (Eigen::Index r = 0; r < n; ++r) {
    for (int j = 0; j < p; ++j) {
      for (int k = 0; k < dim; ++k) {
        const double s_kj = base(k, idx[r][j]);
        if (s_kj == 0.0) continue;
        t = idx[r];
        t[j] = k;
        const int sign = sort_with_sign(t);
        if (sign == 0) continue;
        m(r, rank_of(t, dim)) += sign * s_kj;
      }
    }
  }
  return {base, p, std::move(m)};
}

// Orthonormal frame (e_1..e_n) of normal^perp with (e_1, .., e_n, normal)
// positively oriented. Gram-Schmidt over the coordinate axes, skipping the
// one most aligned with the normal.
template <class S>
std::vector<std::vector<S>> tangent_frame(const std::vector<S>& normal) {
  const int dim = static_cast<int>(normal.size());
  int skip = 0;
  for (int k = 1; k < dim; ++k)
    if (std::abs(value_of(normal[k])) > std::abs(value_of(normal[skip]))) skip = k;
  std::vector<std::vector<S>> basis{normal};
  for (int k = 0; k < dim; ++k) {
    if (k == skip) continue;
    std::vector<S> v(dim, S(0));
    v[k] = S(1);
    for (const auto& b : basis) {
      S proj(0);
      for (int t = 0; t < dim; ++t) proj += v[t] * b[t];
      for (int t = 0; t < dim; ++t) v[t] -= proj * b[t];
    }
    S nrm(0);
    for (const auto& x : v) nrm += x * x;
    using std::sqrt;
    nrm = sqrt(nrm);
    for (auto& x : v) x /= nrm;
    basis.push_back(std::move(v));
  }
  std::vector<std::vector<S>> frame(basis.begin() + 1, basis.end());
  if (dim >= 2) {
    Eigen::MatrixXd m(dim, dim);
    for (int c = 0; c < dim - 1; ++c)
      for (int r = 0; r < dim; ++r) m(r, c) = value_of(frame[c][r]);
    for (int r = 0; r < dim; ++r) m(r, dim - 1) = value_of(normal[r]);
    if (m.determinant() < 0)
      for (auto& x : frame.back()) x = -x;
  }
  return frame;
}

// Tangential and normal parts of an ambient form at a boundary point,
// both expressed in the orthonormal tangent frame.
struct SplitForm {
  std::optional<Form> tangential;          // J^* a, degree p (absent when p = dim)
  std::optional<Form> normal;              // i_N a, degree p-1 (absent when p = 0)
  std::vector<std::vector<double>> frame;  // tangent frame used
};

inline SplitForm split_at_boundary(const Form& a, const std::vector<double>& normal) {
  if (static_cast<int>(normal.size()) != a.dim()) throw ExteriorError("split: normal dimension");
  double nn = 0.0;
  for (double x : normal) nn += x * x;
  if (std::abs(std::sqrt(nn) - 1.0) > 1e-12) throw ExteriorError("split: normal is not a unit vector");
  SplitForm out;
  out.frame = tangent_frame(normal);
  if (a.degree() < a.dim()) out.tangential = pullback(a, out.frame);
  if (a.degree() > 0) out.normal = pullback(interior_product(normal, a), out.frame);
  return out;
}

// Operator-norm residual of star S^[p] + S^[n-p] star - tr(S) star on p-forms.
inline double duality_identity_residual(const Eigen::MatrixXd& shape, int p) {
  const int n = static_cast<int>(shape.rows());
  const auto sp = induced_endomorphism(shape, p);
  const auto sq = induced_endomorphism(shape, n - p);
  const auto idx = basis_indices(n, p);
  const auto m = static_cast<Eigen::Index>(idx.size());
  const auto mq = static_cast<Eigen::Index>(binomial(n, n - p));
  Eigen::MatrixXd star(mq, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    Form e(n, p);
    e[c] = 1.0;
    const Form s = hodge_star(e);
    for (Eigen::Index r = 0; r < mq; ++r) star(r, c) = s[r];
  }
  const Eigen::MatrixXd res = star * sp.matrix + sq.matrix * star - shape.trace() * star;
  if (res.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXd>(res).singularValues()(0);
}

}  // namespace reilly
