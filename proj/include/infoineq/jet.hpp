#pragma once

// Truncated Taylor arithmetic in one variable. A Jet of order K carries the
// normalized coefficients c_i = f^(i)(t0) / i!, i = 0..K, and propagates them
// exactly through the elementary operations used by the catalog densities.
// This is how closed-form densities deliver exact parameter derivatives of
// any order up to kMaxOrder.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "infoineq/errors.hpp"

namespace infoineq {

class Jet {
 public:
  static constexpr int kMaxOrder = 8;

  Jet() = default;

  static Jet constant(double value, int order) {
    Jet j(order);
    j.c_[0] = value;
    return j;
  }

  /// The independent variable t evaluated at t0.
  static Jet variable(double t0, int order) {
    Jet j(order);
    j.c_[0] = t0;
    if (order >= 1) j.c_[1] = 1.0;
    return j;
  }

  int order() const noexcept { return order_; }
  double value() const noexcept { return c_[0]; }
  double coefficient(int i) const { return c_.at(static_cast<std::size_t>(i)); }

  /// i-th derivative with respect to the variable.
  double derivative(int i) const {
    double fact = 1.0;
    for (int m = 2; m <= i; ++m) fact *= m;
    return coefficient(i) * fact;
  }

  Jet operator-() const {
    Jet r(order_);
    for (int i = 0; i <= order_; ++i) r.c_[i] = -c_[i];
    return r;
  }

  Jet& operator+=(const Jet& o) {
    for (int i = 0; i <= order_; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int i = 0; i <= order_; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator+=(double v) {
    c_[0] += v;
    return *this;
  }
  Jet& operator-=(double v) {
    c_[0] -= v;
    return *this;
  }
  Jet& operator*=(double v) {
    for (int i = 0; i <= order_; ++i) c_[i] *= v;
    return *this;
  }
  Jet& operator/=(double v) {
    for (int i = 0; i <= order_; ++i) c_[i] /= v;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double b) { return a += b; }
  friend Jet operator+(double a, Jet b) { return b += a; }
  friend Jet operator-(Jet a, double b) { return a -= b; }
  friend Jet operator-(double a, const Jet& b) { return (-b) += a; }
  friend Jet operator*(Jet a, double b) { return a *= b; }
  friend Jet operator*(double a, Jet b) { return b *= a; }
  friend Jet operator/(Jet a, double b) { return a /= b; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(std::min(a.order_, b.order_));
    for (int k = 0; k <= r.order_; ++k) {
      double s = 0.0;
      for (int j = 0; j <= k; ++j) s += a.c_[j] * b.c_[k - j];
      r.c_[k] = s;
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r(std::min(a.order_, b.order_));
    for (int k = 0; k <= r.order_; ++k) {
      double s = a.c_[k];
      for (int j = 0; j < k; ++j) s -= r.c_[j] * b.c_[k - j];
      r.c_[k] = s / b.c_[0];
    }
    return r;
  }

  friend Jet operator/(double a, const Jet& b) { return constant(a, b.order_) / b; }

  friend Jet exp(const Jet& a) {
    Jet r(a.order_);
    r.c_[0] = std::exp(a.c_[0]);
    for (int k = 1; k <= a.order_; ++k) {
      double s = 0.0;
      for (int j = 1; j <= k; ++j) s += j * a.c_[j] * r.c_[k - j];
      r.c_[k] = s / k;
    }
    return r;
  }

  friend Jet log(const Jet& a) {
    if (!(a.c_[0] > 0.0)) throw DomainError("Jet log of non-positive value");
    Jet r(a.order_);
    r.c_[0] = std::log(a.c_[0]);
    for (int k = 1; k <= a.order_; ++k) {
      double s = a.c_[k];
      for (int j = 1; j < k; ++j) s -= j * r.c_[j] * a.c_[k - j] / k;
      r.c_[k] = s / a.c_[0];
    }
    return r;
  }

  /// Real power; integral exponents are exact for any base sign.
  friend Jet pow(const Jet& a, double p) {
    if (p == std::floor(p) && std::fabs(p) <= 64.0) {
      const int n = static_cast<int>(std::fabs(p));
      Jet r = constant(1.0, a.order_);
      Jet base = a;
      for (int m = n; m > 0; m >>= 1) {
        if (m & 1) r = r * base;
        if (m > 1) base = base * base;
      }
      return p < 0 ? 1.0 / r : r;
    }
    return exp(p * log(a));
  }

  friend Jet sqrt(const Jet& a) { return pow(a, 0.5); }

 private:
  explicit Jet(int order) : order_(order) {
    if (order < 0 || order > kMaxOrder) throw InvalidArgument("Jet order out of range");
  }

  int order_ = 0;
  std::array<double, kMaxOrder + 1> c_{};
};

// Overloads that let one generic lambda serve both double and Jet.
inline double exp(double v) { return std::exp(v); }
inline double log(double v) { return std::log(v); }
inline double pow(double v, double p) { return std::pow(v, p); }
inline double sqrt(double v) { return std::sqrt(v); }

}  // namespace infoineq
