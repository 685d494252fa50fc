#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "aimspec/errors.hpp"

namespace aimspec {

// Scalar hooks. Coefficients are double (float64 mode), mpq_class (exact
// rational) or mpz_class (exact integer numerators under a shared scale).
inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(const mpq_class& x) { return sgn(x) == 0; }
inline bool is_zero(const mpz_class& x) { return sgn(x) == 0; }

inline double to_double(double x) { return x; }
inline double to_double(const mpq_class& x) { return x.get_d(); }
inline double to_double(const mpz_class& x) { return x.get_d(); }

/// Exact conversion: every finite double is a dyadic rational.
inline mpq_class to_exact(double x) { return mpq_class(x); }

/// Dense univariate polynomial, constant term first. Trailing zeros are
/// always stripped, so the zero polynomial has no coefficients.
template <class T>
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
  Poly(std::initializer_list<T> coeffs) : c_(coeffs) { trim(); }

  static Poly constant(T value) { return Poly(std::vector<T>{std::move(value)}); }
  static Poly monomial(T value, std::size_t power) {
    std::vector<T> c(power + 1, T(0));
    c[power] = std::move(value);
    return Poly(std::move(c));
  }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  std::span<const T> coeffs() const { return c_; }
  std::size_t size() const { return c_.size(); }

  /// Coefficient of x^i, zero beyond the degree.
  T coeff(std::size_t i) const { return i < c_.size() ? c_[i] : T(0); }

  template <class X>
  X operator()(const X& x) const {
    X acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + X(*it);
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<T> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * T(static_cast<long>(i));
    return Poly(std::move(d));
  }

  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  Poly& operator*=(const T& s) {
    for (auto& x : c_) x *= s;
    trim();
    return *this;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  friend Poly operator*(Poly a, const T& s) { return a *= s; }
  friend Poly operator*(const T& s, Poly a) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<T> r(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (aimspec::is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(r));
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  /// Coefficient-wise conversion to another scalar kind.
  template <class U, class Fn>
  Poly<U> map(Fn&& fn) const {
    std::vector<U> out;
    out.reserve(c_.size());
    for (const auto& x : c_) out.push_back(fn(x));
    return Poly<U>(std::move(out));
  }

 private:
  void trim() {
    while (!c_.empty() && aimspec::is_zero(c_.back())) c_.pop_back();
  }
  std::vector<T> c_;
};

enum class PolyOp { add, sub, mul };

template <class T>
Poly<T> poly_arith(const Poly<T>& a, const Poly<T>& b, PolyOp op) {
  switch (op) {
    case PolyOp::add:
      return a + b;
    case PolyOp::sub:
      return a - b;
    case PolyOp::mul:
      return a * b;
  }
  return Poly<T>();
}

template <class T>
Poly<T> poly_derivative(const Poly<T>& p) {
  return p.derivative();
}

template <class T>
Poly<T> poly_pow(const Poly<T>& p, unsigned n) {
  Poly<T> r = Poly<T>::constant(T(1));
  for (unsigned i = 0; i < n; ++i) r = r * p;
  return r;
}

/// num/den with a nonzero denominator. No gcd reduction is ever performed.
template <class T>
class RationalFn {
 public:
  RationalFn(Poly<T> num, Poly<T> den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw ParameterError("rational function with zero denominator");
  }
  explicit RationalFn(Poly<T> num) : RationalFn(std::move(num), Poly<T>::constant(T(1))) {}

  const Poly<T>& num() const { return num_; }
  const Poly<T>& den() const { return den_; }

  /// Quotient rule (num' den - num den') / den^2.
  RationalFn derivative() const {
    return RationalFn(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
  }

  /// Pole when |den(x)| <= pole_tol * sum|den_i x^i| (exact zero for rationals).
  T eval(const T& x, double pole_tol = 1e-14) const {
    T d = den_(x);
    if (is_pole(d, x, pole_tol)) throw PoleError("rational function evaluated at a pole");
    return num_(x) / d;
  }

 private:
  bool is_pole(const T& d, const T& x, double tol) const {
    if constexpr (std::is_same_v<T, double>) {
      double scale = 0.0, xp = 1.0;
      for (double c : den_.coeffs()) {
        scale += std::abs(c * xp);
        xp *= x;
      }
      return std::abs(d) <= tol * scale;
    } else {
      (void)x;
      (void)tol;
      return aimspec::is_zero(d);
    }
  }

  Poly<T> num_;
  Poly<T> den_;
};

template <class T>
RationalFn<T> rat_derivative(const RationalFn<T>& f) {
  return f.derivative();
}

template <class T>
T rat_eval(const RationalFn<T>& f, const T& x) {
  return f.eval(x);
}

}  // namespace aimspec
