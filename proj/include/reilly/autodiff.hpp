#pragma once

#include <cmath>
#include <ostream>
#include <type_traits>

namespace reilly {

// Forward-mode dual number: value + one directional derivative.
template <class T>
struct Dual {
  T v{};
  T d{};

  constexpr Dual() = default;
  constexpr Dual(T value) : v(value) {}  // NOLINT: implicit lift of constants
  constexpr Dual(T value, T deriv) : v(value), d(deriv) {}
  // Nested duals: lift plain numbers through every level.
  template <class U>
    requires(std::is_arithmetic_v<U> && !std::is_same_v<T, U>)
  constexpr Dual(U value) : v(T(value)) {}  // NOLINT

  constexpr Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  constexpr Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  constexpr Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
  constexpr Dual& operator/=(const Dual& o) {
    d = (d * o.v - v * o.d) / (o.v * o.v);
    v /= o.v;
    return *this;
  }

  friend constexpr Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend constexpr Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend constexpr Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend constexpr Dual operator/(Dual a, const Dual& b) { return a /= b; }
  friend constexpr Dual operator-(const Dual& a) { return {-a.v, -a.d}; }

  friend constexpr bool operator<(const Dual& a, const Dual& b) { return a.v < b.v; }
  friend constexpr bool operator>(const Dual& a, const Dual& b) { return a.v > b.v; }

  friend std::ostream& operator<<(std::ostream& os, const Dual& a) {
    return os << a.v << "+" << a.d << "e";
  }
};

template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  const T s = sqrt(a.v);
  return {s, a.d / (T(2) * s)};
}

template <class T>
Dual<T> abs(const Dual<T>& a) {
  return a.v < T(0) ? -a : a;
}

// Value part of a plain or dual scalar.
inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& x) {
  return value_of(x.v);
}

inline double deriv_of(double) { return 0.0; }
template <class T>
T deriv_of(const Dual<T>& x) {
  return x.d;
}

}  // namespace reilly
