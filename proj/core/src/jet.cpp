#include "curvelab/jet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace curvelab {

namespace {

constexpr std::array<double, kMaxJetOrder + 1> kFactorial = {1, 1, 2, 6, 24};

void check_order(int order) {
  if (order < 0 || order > kMaxJetOrder) {
    fail(ErrorKind::configuration,
         "jet order " + std::to_string(order) + " outside [0, " +
             std::to_string(kMaxJetOrder) + "]");
  }
}

}  // namespace

Jet2 Jet2::constant(double value, int order) {
  check_order(order);
  Jet2 j;
  j.order_ = order;
  j.c_[0] = value;
  return j;
}

Jet2 Jet2::seed(Variable which, double value, int order) {
  if (order < kMinSeedOrder || order > kMaxJetOrder) {
    fail(ErrorKind::configuration,
         "jet order " + std::to_string(order) + " outside [" +
             std::to_string(kMinSeedOrder) + ", " +
             std::to_string(kMaxJetOrder) + "]");
  }
  Jet2 j = constant(value, order);
  j.c_[which == Variable::u ? index(1, 0) : index(0, 1)] = 1.0;
  return j;
}

double Jet2::coeff(int i, int j) const {
  if (i < 0 || j < 0 || i + j > order_) {
    fail(ErrorKind::out_of_order,
         "coefficient (" + std::to_string(i) + ", " + std::to_string(j) +
             ") exceeds jet order " + std::to_string(order_));
  }
  return c_[index(i, j)];
}

void Jet2::set_coeff(int i, int j, double value) {
  if (i < 0 || j < 0 || i + j > order_) {
    fail(ErrorKind::out_of_order,
         "coefficient (" + std::to_string(i) + ", " + std::to_string(j) +
             ") exceeds jet order " + std::to_string(order_));
  }
  c_[index(i, j)] = value;
}

double Jet2::partial(int i, int j) const {
  return coeff(i, j) * kFactorial[i] * kFactorial[j];
}

Jet2 Jet2::derivative(Variable which) const {
  if (order_ == 0) {
    fail(ErrorKind::out_of_order, "cannot differentiate an order-0 jet");
  }
  Jet2 d;
  d.order_ = order_ - 1;
  for (int deg = 0; deg <= d.order_; ++deg) {
    for (int j = 0; j <= deg; ++j) {
      const int i = deg - j;
      d.c_[index(i, j)] = which == Variable::u
                              ? (i + 1) * c_[index(i + 1, j)]
                              : (j + 1) * c_[index(i, j + 1)];
    }
  }
  return d;
}

Jet2 Jet2::truncated(int order) const {
  if (order > order_) {
    fail(ErrorKind::out_of_order, "cannot raise jet order by truncation");
  }
  check_order(order);
  Jet2 t = *this;
  t.order_ = order;
  std::fill(t.c_.begin() + static_cast<std::ptrdiff_t>(size_for(order)),
            t.c_.end(), 0.0);
  return t;
}

bool Jet2::is_finite() const noexcept {
  const auto cs = coefficients();
  return std::all_of(cs.begin(), cs.end(),
                     [](double x) { return std::isfinite(x); });
}

// Binary operations on jets of different order are carried at the lower
// order: only those coefficients are known for both operands.

Jet2& Jet2::operator+=(const Jet2& rhs) {
  order_ = std::min(order_, rhs.order_);
  const std::size_t n = size_for(order_);
  for (std::size_t k = 0; k < n; ++k) c_[k] += rhs.c_[k];
  std::fill(c_.begin() + static_cast<std::ptrdiff_t>(n), c_.end(), 0.0);
  return *this;
}

Jet2& Jet2::operator-=(const Jet2& rhs) {
  order_ = std::min(order_, rhs.order_);
  const std::size_t n = size_for(order_);
  for (std::size_t k = 0; k < n; ++k) c_[k] -= rhs.c_[k];
  std::fill(c_.begin() + static_cast<std::ptrdiff_t>(n), c_.end(), 0.0);
  return *this;
}

Jet2& Jet2::operator*=(const Jet2& rhs) { return *this = *this * rhs; }
Jet2& Jet2::operator/=(const Jet2& rhs) { return *this = *this / rhs; }

Jet2& Jet2::operator+=(double rhs) noexcept {
  c_[0] += rhs;
  return *this;
}

Jet2& Jet2::operator-=(double rhs) noexcept {
  c_[0] -= rhs;
  return *this;
}

Jet2& Jet2::operator*=(double rhs) noexcept {
  for (auto& c : c_) c *= rhs;
  return *this;
}

Jet2& Jet2::operator/=(double rhs) {
  if (rhs == 0.0) fail(ErrorKind::singularity, "jet divided by zero");
  for (auto& c : c_) c /= rhs;
  return *this;
}

Jet2 operator-(Jet2 a) noexcept {
  for (auto& c : a.c_) c = -c;
  return a;
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.order_ = std::min(a.order_, b.order_);
  for (int deg = 0; deg <= r.order_; ++deg) {
    for (int j = 0; j <= deg; ++j) {
      const int i = deg - j;
      double sum = 0.0;
      for (int p = 0; p <= i; ++p) {
        for (int q = 0; q <= j; ++q) {
          sum += a.c_[Jet2::index(p, q)] * b.c_[Jet2::index(i - p, j - q)];
        }
      }
      r.c_[Jet2::index(i, j)] = sum;
    }
  }
  return r;
}

Jet2 operator/(const Jet2& a, const Jet2& b) {
  const double b0 = b.c_[0];
  if (b0 == 0.0) {
    fail(ErrorKind::singularity, "division by a jet with zero constant term");
  }
  // Solve b * r = a degree by degree.
  Jet2 r;
  r.order_ = std::min(a.order_, b.order_);
  for (int deg = 0; deg <= r.order_; ++deg) {
    for (int j = 0; j <= deg; ++j) {
      const int i = deg - j;
      double sum = a.c_[Jet2::index(i, j)];
      for (int p = 0; p <= i; ++p) {
        for (int q = 0; q <= j; ++q) {
          if (p == 0 && q == 0) continue;
          sum -= b.c_[Jet2::index(p, q)] * r.c_[Jet2::index(i - p, j - q)];
        }
      }
      r.c_[Jet2::index(i, j)] = sum / b0;
    }
  }
  return r;
}

Jet2 operator/(double a, const Jet2& b) {
  return Jet2::constant(a, b.order()) / b;
}

Jet2 recip(const Jet2& x) { return 1.0 / x; }

Jet2 sqrt(const Jet2& x) {
  const double x0 = x.c_[0];
  if (!(x0 > 0.0)) {
    fail(ErrorKind::domain, "sqrt of a jet with nonpositive constant term " +
                                std::to_string(x0));
  }
  // Solve r * r = x degree by degree.
  Jet2 r;
  r.order_ = x.order_;
  const double r0 = std::sqrt(x0);
  r.c_[0] = r0;
  for (int deg = 1; deg <= r.order_; ++deg) {
    for (int j = 0; j <= deg; ++j) {
      const int i = deg - j;
      double sum = x.c_[Jet2::index(i, j)];
      for (int p = 0; p <= i; ++p) {
        for (int q = 0; q <= j; ++q) {
          if ((p == 0 && q == 0) || (p == i && q == j)) continue;
          sum -= r.c_[Jet2::index(p, q)] * r.c_[Jet2::index(i - p, j - q)];
        }
      }
      r.c_[Jet2::index(i, j)] = sum / (2.0 * r0);
    }
  }
  return r;
}

Jet2 compose(const Jet2& x, std::span<const double> taylor) {
  Jet2 h = x;
  h.c_[0] = 0.0;
  Jet2 result = Jet2::constant(taylor.empty() ? 0.0 : taylor[0], x.order_);
  Jet2 power = Jet2::constant(1.0, x.order_);
  const std::size_t terms =
      std::min(taylor.size(), static_cast<std::size_t>(x.order_ + 1));
  for (std::size_t k = 1; k < terms; ++k) {
    power = power * h;
    result += taylor[k] * power;
  }
  return result;
}

Jet2 sin(const Jet2& x) {
  const double s = std::sin(x.value());
  const double c = std::cos(x.value());
  const std::array<double, kMaxJetOrder + 1> t = {s, c, -s / 2, -c / 6,
                                                  s / 24};
  return compose(x, t);
}

Jet2 cos(const Jet2& x) {
  const double s = std::sin(x.value());
  const double c = std::cos(x.value());
  const std::array<double, kMaxJetOrder + 1> t = {c, -s, -c / 2, s / 6,
                                                  c / 24};
  return compose(x, t);
}

Jet2 exp(const Jet2& x) {
  const double e = std::exp(x.value());
  const std::array<double, kMaxJetOrder + 1> t = {e, e, e / 2, e / 6, e / 24};
  return compose(x, t);
}

Jet2 cosh(const Jet2& x) {
  const double ch = std::cosh(x.value());
  const double sh = std::sinh(x.value());
  const std::array<double, kMaxJetOrder + 1> t = {ch, sh, ch / 2, sh / 6,
                                                  ch / 24};
  return compose(x, t);
}

Jet2 sinh(const Jet2& x) {
  const double ch = std::cosh(x.value());
  const double sh = std::sinh(x.value());
  const std::array<double, kMaxJetOrder + 1> t = {sh, ch, sh / 2, ch / 6,
                                                  sh / 24};
  return compose(x, t);
}

Jet2 pow(const Jet2& x, int exponent) {
  if (exponent < 0) return recip(pow(x, -exponent));
  Jet2 result = Jet2::constant(1.0, x.order());
  Jet2 base = x;
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

Jet2 jet_arith(JetOp op, const Jet2& a, const Jet2& b, int exponent) {
  switch (op) {
    case JetOp::add: return a + b;
    case JetOp::sub: return a - b;
    case JetOp::mul: return a * b;
    case JetOp::div: return a / b;
    case JetOp::sqrt: return sqrt(a);
    case JetOp::sin: return sin(a);
    case JetOp::cos: return cos(a);
    case JetOp::pow_int: return pow(a, exponent);
    case JetOp::neg: return -a;
    case JetOp::recip: return recip(a);
  }
  fail(ErrorKind::configuration, "unknown jet operation");
}

// ---------------------------------------------------------------------------

Jet2 dot(const JetVec3& a, const JetVec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

JetVec3 cross(const JetVec3& a, const JetVec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

JetVec3 operator+(const JetVec3& a, const JetVec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

JetVec3 operator-(const JetVec3& a, const JetVec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

JetVec3 operator*(const Jet2& s, const JetVec3& a) {
  return {s * a[0], s * a[1], s * a[2]};
}

JetVec3 operator*(double s, const JetVec3& a) {
  return {s * a[0], s * a[1], s * a[2]};
}

JetVec3 derivative(const JetVec3& a, Variable which) {
  return {a[0].derivative(which), a[1].derivative(which),
          a[2].derivative(which)};
}

JetVec3 constant_vector(const Eigen::Vector3d& value, int order) {
  return {Jet2::constant(value.x(), order), Jet2::constant(value.y(), order),
          Jet2::constant(value.z(), order)};
}

Eigen::Vector3d value(const JetVec3& a) {
  return {a[0].value(), a[1].value(), a[2].value()};
}

Eigen::Vector3d partial(const JetVec3& a, int i, int j) {
  return {a[0].partial(i, j), a[1].partial(i, j), a[2].partial(i, j)};
}

int order(const JetVec3& a) {
  return std::min({a[0].order(), a[1].order(), a[2].order()});
}

}  // namespace curvelab
