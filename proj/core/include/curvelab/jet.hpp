#pragma once

// Bivariate truncated Taylor series ("jets").
//
// A Jet2 of order N carries every Taylor coefficient c_ij = d^{i+j}f/du^i dv^j
// / (i! j!) with i + j <= N at a fixed expansion point. Products are Cauchy
// products, and elementary functions are applied by composing their
// univariate Taylor series with the jet. Truncation is exact through the
// carried order, so partials extracted from a jet are exact up to rounding.

#include <array>
#include <cstddef>
#include <span>

#include <Eigen/Core>

#include "curvelab/errors.hpp"

namespace curvelab {

inline constexpr int kMinSeedOrder = 2;
inline constexpr int kMaxJetOrder = 4;
inline constexpr int kDefaultJetOrder = 3;

enum class Variable { u, v };

class Jet2 {
 public:
  static constexpr std::size_t kCapacity =
      (kMaxJetOrder + 1) * (kMaxJetOrder + 2) / 2;

  /// Order-0 jet with value 0.
  Jet2() = default;

  /// A constant: every derivative vanishes. Any order in [0, kMaxJetOrder]
  /// is accepted, so lower-order jets produced by differentiation can be
  /// combined with constants.
  static Jet2 constant(double value, int order);

  /// The independent variable `which` expanded at `value`. The order must be
  /// a user-facing order in [kMinSeedOrder, kMaxJetOrder].
  static Jet2 seed(Variable which, double value, int order);

  static constexpr std::size_t size_for(int order) noexcept {
    return static_cast<std::size_t>((order + 1) * (order + 2) / 2);
  }

  int order() const noexcept { return order_; }
  double value() const noexcept { return c_[0]; }

  /// Taylor-normalized coefficient c_ij.
  double coeff(int i, int j) const;
  void set_coeff(int i, int j, double value);

  /// d^{i+j} f / du^i dv^j = c_ij * i! * j!
  double partial(int i, int j) const;

  /// All (order+1)(order+2)/2 coefficients, grouped by total degree.
  std::span<const double> coefficients() const noexcept {
    return {c_.data(), size_for(order_)};
  }

  /// Exact derivative with respect to one variable; the order drops by one.
  Jet2 derivative(Variable which) const;

  /// Same expansion, carried to a lower order.
  Jet2 truncated(int order) const;

  bool is_finite() const noexcept;

  Jet2& operator+=(const Jet2& rhs);
  Jet2& operator-=(const Jet2& rhs);
  Jet2& operator*=(const Jet2& rhs);
  Jet2& operator/=(const Jet2& rhs);
  Jet2& operator+=(double rhs) noexcept;
  Jet2& operator-=(double rhs) noexcept;
  Jet2& operator*=(double rhs) noexcept;
  Jet2& operator/=(double rhs);

  friend Jet2 operator-(Jet2 a) noexcept;
  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
  friend Jet2 operator*(const Jet2& a, const Jet2& b);
  friend Jet2 operator/(const Jet2& a, const Jet2& b);
  friend Jet2 operator+(Jet2 a, double b) noexcept { return a += b; }
  friend Jet2 operator+(double a, Jet2 b) noexcept { return b += a; }
  friend Jet2 operator-(Jet2 a, double b) noexcept { return a -= b; }
  friend Jet2 operator-(double a, const Jet2& b) noexcept { return (-b) += a; }
  friend Jet2 operator*(Jet2 a, double b) noexcept { return a *= b; }
  friend Jet2 operator*(double a, Jet2 b) noexcept { return b *= a; }
  friend Jet2 operator/(Jet2 a, double b) { return a /= b; }
  friend Jet2 operator/(double a, const Jet2& b);

 private:
  static constexpr std::size_t index(int i, int j) noexcept {
    const int d = i + j;
    return static_cast<std::size_t>(d * (d + 1) / 2 + j);
  }

  friend Jet2 sqrt(const Jet2& x);
  friend Jet2 compose(const Jet2& x, std::span<const double> taylor);

  int order_ = 0;
  std::array<double, kCapacity> c_{};
};

Jet2 recip(const Jet2& x);
Jet2 sqrt(const Jet2& x);
Jet2 sin(const Jet2& x);
Jet2 cos(const Jet2& x);
Jet2 exp(const Jet2& x);
Jet2 cosh(const Jet2& x);
Jet2 sinh(const Jet2& x);
Jet2 pow(const Jet2& x, int exponent);

/// Applies the univariate series sum_k taylor[k] (x - x0)^k, where
/// taylor[k] = phi^{(k)}(x0) / k! and x0 = x.value(). Terms beyond the jet
/// order are ignored; missing terms are treated as zero.
Jet2 compose(const Jet2& x, std::span<const double> taylor);

/// Operation names accepted by jet_arith, matching the unary/binary helpers.
enum class JetOp { add, sub, mul, div, sqrt, sin, cos, pow_int, neg, recip };

/// Uniform entry point for the arithmetic above. Binary operations use
/// `a` and `b`; pow_int uses `exponent`.
Jet2 jet_arith(JetOp op, const Jet2& a, const Jet2& b = {}, int exponent = 0);

// ---------------------------------------------------------------------------
// Vector-valued jets

using JetVec3 = std::array<Jet2, 3>;

Jet2 dot(const JetVec3& a, const JetVec3& b);
JetVec3 cross(const JetVec3& a, const JetVec3& b);
JetVec3 operator+(const JetVec3& a, const JetVec3& b);
JetVec3 operator-(const JetVec3& a, const JetVec3& b);
JetVec3 operator*(const Jet2& s, const JetVec3& a);
JetVec3 operator*(double s, const JetVec3& a);
JetVec3 derivative(const JetVec3& a, Variable which);
JetVec3 constant_vector(const Eigen::Vector3d& value, int order);
Eigen::Vector3d value(const JetVec3& a);
Eigen::Vector3d partial(const JetVec3& a, int i, int j);
int order(const JetVec3& a);

}  // namespace curvelab
