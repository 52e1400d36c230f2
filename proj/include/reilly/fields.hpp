#pragma once

// Form-valued and scalar fields on a Euclidean 3-space region, with exact
// derivatives through forward-mode AD when the field is written generically,
// and central differences otherwise.

#include <array>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "reilly/autodiff.hpp"
#include "reilly/exterior.hpp"
#include "reilly/mesh.hpp"

namespace reilly {

template <class T>
using Point3 = std::array<T, 3>;

class FieldError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

template <class T>
Form value_part(const BasicForm<T>& f) {
  Form out(f.dim(), f.degree());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = value_of(f[i]);
  return out;
}

inline Form deriv_part(const BasicForm<Dual<double>>& f) {
  Form out(f.dim(), f.degree());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i].d;
  return out;
}

inline Point3<Dual<double>> seed(const Vec3& x, const Vec3& v) {
  return {Dual<double>(x(0), v(0)), Dual<double>(x(1), v(1)), Dual<double>(x(2), v(2))};
}

}  // namespace detail

// Directional derivative of a generic form field along v at x.
template <class F>
Form directional_derivative(const F& f, const Vec3& x, const Vec3& v) {
  return detail::deriv_part(f(detail::seed(x, v)));
}

// A p-form field. derivatives(x)[k] is the coordinate derivative d/dx_k of
// the coefficients, which is the covariant derivative along e_k in flat space.
class SampledField {
 public:
  using ValueFn = std::function<Form(const Vec3&)>;
  using DerivFn = std::function<std::array<Form, 3>(const Vec3&)>;

  SampledField(int degree, ValueFn value, DerivFn deriv = {}, std::string name = "field")
      : degree_(degree), value_(std::move(value)), deriv_(std::move(deriv)), name_(std::move(name)) {
    if (degree < 0 || degree > 3) throw FieldError("field degree must be in [0, 3]");
  }

  // F is callable on Point3<double> and Point3<Dual<double>>.
  template <class F>
  static SampledField from_template(int degree, F f, std::string name) {
    return SampledField(
        degree, [f](const Vec3& x) { return detail::value_part(f(Point3<double>{x(0), x(1), x(2)})); },
        [f](const Vec3& x) {
          std::array<Form, 3> g;
          for (int k = 0; k < 3; ++k) g[k] = directional_derivative(f, x, Vec3::Unit(k));
          return g;
        },
        std::move(name));
  }

  int degree() const { return degree_; }
  const std::string& name() const { return name_; }
  bool has_analytic_derivatives() const { return static_cast<bool>(deriv_); }

  Form value(const Vec3& x) const {
    Form f = value_(x);
    if (f.dim() != 3 || f.degree() != degree_) throw FieldError("field '" + name_ + "' returned a form of the wrong shape");
    return f;
  }

  // fd_step <= 0 disables the finite-difference fallback.
  std::array<Form, 3> derivatives(const Vec3& x, double fd_step) const {
    if (deriv_) return deriv_(x);
    if (!(fd_step > 0)) throw FieldError("field '" + name_ + "' has no derivatives and finite differences are disabled");
    std::array<Form, 3> g;
    for (int k = 0; k < 3; ++k) {
      const Vec3 h = fd_step * Vec3::Unit(k);
      g[k] = (value(x + h) - value(x - h)) * (0.5 / fd_step);
    }
    return g;
  }

 private:
  int degree_;
  ValueFn value_;
  DerivFn deriv_;
  std::string name_;
};

// Scalar field with gradient and Hessian.
class ScalarField {
 public:
  using ValueFn = std::function<double(const Vec3&)>;
  using GradFn = std::function<Vec3(const Vec3&)>;
  using HessFn = std::function<Eigen::Matrix3d(const Vec3&)>;

  ScalarField(ValueFn v, GradFn g = {}, HessFn h = {}, std::string name = "scalar")
      : value_(std::move(v)), grad_(std::move(g)), hess_(std::move(h)), name_(std::move(name)) {}

  // F is callable on Point3<T> for T in {double, Dual<double>, Dual<Dual<double>>}.
  template <class F>
  static ScalarField from_template(F f, std::string name) {
    using D = Dual<double>;
    using DD = Dual<D>;
    return ScalarField(
        [f](const Vec3& x) { return f(Point3<double>{x(0), x(1), x(2)}); },
        [f](const Vec3& x) {
          Vec3 g;
          for (int k = 0; k < 3; ++k) g(k) = f(detail::seed(x, Vec3::Unit(k))).d;
          return g;
        },
        [f](const Vec3& x) {
          Eigen::Matrix3d h;
          for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
              Point3<DD> y;
              for (int i = 0; i < 3; ++i) y[i] = DD(D(x(i), i == j ? 1.0 : 0.0), D(i == k ? 1.0 : 0.0, 0.0));
              h(j, k) = f(y).d.d;
            }
          return h;
        },
        std::move(name));
  }

  const std::string& name() const { return name_; }
  bool has_analytic_derivatives() const { return grad_ && hess_; }
  double value(const Vec3& x) const { return value_(x); }

  Vec3 gradient(const Vec3& x, double fd_step) const {
    if (grad_) return grad_(x);
    if (!(fd_step > 0)) throw FieldError("scalar field '" + name_ + "' has no gradient and finite differences are disabled");
    Vec3 g;
    for (int k = 0; k < 3; ++k) {
      const Vec3 h = fd_step * Vec3::Unit(k);
      g(k) = (value_(x + h) - value_(x - h)) / (2 * fd_step);
    }
    return g;
  }

  Eigen::Matrix3d hessian(const Vec3& x, double fd_step) const {
    if (hess_) return hess_(x);
    if (!(fd_step > 0)) throw FieldError("scalar field '" + name_ + "' has no Hessian and finite differences are disabled");
    Eigen::Matrix3d h;
    for (int k = 0; k < 3; ++k) {
      const Vec3 s = fd_step * Vec3::Unit(k);
      h.col(k) = (gradient(x + s, fd_step) - gradient(x - s, fd_step)) / (2 * fd_step);
    }
    return 0.5 * (h + h.transpose());
  }

  // f as a 0-form field.
  SampledField as_form(double fd_step = 0.0) const {
    auto self = *this;
    SampledField::DerivFn d;
    if (grad_ || fd_step > 0)
      d = [self, fd_step](const Vec3& x) {
        const Vec3 g = self.gradient(x, fd_step);
        return std::array<Form, 3>{Form::scalar(3, g(0)), Form::scalar(3, g(1)), Form::scalar(3, g(2))};
      };
    return SampledField(0, [self](const Vec3& x) { return Form::scalar(3, self.value(x)); }, d, name_);
  }

  // The 1-form df.
  SampledField differential(double fd_step = 0.0) const {
    auto self = *this;
    SampledField::DerivFn d;
    if (has_analytic_derivatives() || fd_step > 0)
      d = [self, fd_step](const Vec3& x) {
        const Eigen::Matrix3d h = self.hessian(x, fd_step);
        std::array<Form, 3> g;
        for (int k = 0; k < 3; ++k) g[k] = Form(3, 1, {h(0, k), h(1, k), h(2, k)});
        return g;
      };
    return SampledField(
        1, [self, fd_step](const Vec3& x) {
          const Vec3 g = self.gradient(x, fd_step);
          return Form(3, 1, {g(0), g(1), g(2)});
        },
        d, "d(" + name_ + ")");
  }

 private:
  ValueFn value_;
  GradFn grad_;
  HessFn hess_;
  std::string name_;
};

// ---- built-in fields ---------------------------------------------------

// Names: zero, constant, linear-x1, radial-sq, cubic.
inline ScalarField builtin_scalar_field(const std::string& name) {
  if (name == "zero") return ScalarField::from_template([](const auto& y) { return y[0] * 0.0; }, name);
  if (name == "constant") return ScalarField::from_template([](const auto& y) { return y[0] * 0.0 + 1.5; }, name);
  if (name == "linear-x1") return ScalarField::from_template([](const auto& y) { return y[0]; }, name);
  if (name == "radial-sq")
    return ScalarField::from_template([](const auto& y) { return 0.5 * (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]); }, name);
  if (name == "cubic")
    return ScalarField::from_template([](const auto& y) { return y[0] * y[0] * y[1] + 0.5 * y[2] * y[0] - y[1] * y[2] * y[2]; }, name);
  throw FieldError("unknown scalar field '" + name + "'");
}

// Quadratic polynomial p-form with coefficients drawn from `seed`.
inline SampledField random_polynomial_form(int degree, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int m = static_cast<int>(binomial(3, degree));
  std::vector<std::array<double, 10>> c(m);
  for (auto& row : c)
    for (auto& x : row) x = u(rng);
  auto f = [c, degree](const auto& y) {
    using T = std::decay_t<decltype(y[0])>;
    BasicForm<T> w(3, degree);
    for (std::size_t i = 0; i < c.size(); ++i) {
      const auto& a = c[i];
      w[i] = T(a[0]) + a[1] * y[0] + a[2] * y[1] + a[3] * y[2] + a[4] * y[0] * y[0] + a[5] * y[1] * y[1] +
             a[6] * y[2] * y[2] + a[7] * y[0] * y[1] + a[8] * y[1] * y[2] + a[9] * y[0] * y[2];
    }
    return w;
  };
  return SampledField::from_template(degree, f, "poly" + std::to_string(degree) + "-seed" + std::to_string(seed));
}

// Names: zero1 zero2 zero3, x2dx1, parallel-dx1, parallel-dx12, parallel-dx123,
// poly1 poly2 poly3 (quadratic, seeded), d-<scalar name> (exact differentials).
inline SampledField builtin_form_field(const std::string& name, unsigned seed = 1) {
  auto constant = [](int deg, std::vector<double> coeffs, const std::string& nm) {
    return SampledField::from_template(
        deg,
        [deg, coeffs](const auto& y) {
          using T = std::decay_t<decltype(y[0])>;
          BasicForm<T> w(3, deg);
          for (std::size_t i = 0; i < coeffs.size(); ++i) w[i] = T(coeffs[i]);
          return w;
        },
        nm);
  };
  if (name == "zero1") return constant(1, {0, 0, 0}, name);
  if (name == "zero2") return constant(2, {0, 0, 0}, name);
  if (name == "zero3") return constant(3, {0}, name);
  if (name == "parallel-dx1") return constant(1, {1, 0, 0}, name);
  if (name == "parallel-dx12") return constant(2, {1, 0, 0}, name);
  if (name == "parallel-dx123") return constant(3, {1}, name);
  if (name == "x2dx1")
    return SampledField::from_template(
        1,
        [](const auto& y) {
          using T = std::decay_t<decltype(y[0])>;
          BasicForm<T> w(3, 1);
          w[0] = y[1];
          return w;
        },
        name);
  if (name == "poly1") return random_polynomial_form(1, seed);
  if (name == "poly2") return random_polynomial_form(2, seed);
  if (name == "poly3") return random_polynomial_form(3, seed);
  if (name.rfind("d-", 0) == 0) return builtin_scalar_field(name.substr(2)).differential();
  throw FieldError("unknown form field '" + name + "'");
}

}  // namespace reilly
