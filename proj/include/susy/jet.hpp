#pragma once

// Truncated Taylor series in one variable with complex coefficients.
// Used to carry exact parametric derivatives through compositions.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace susy {

class Jet {
 public:
  using value_type = std::complex<double>;

  Jet() = default;
  /// Zero series through t^order.
  explicit Jet(int order) : c_(static_cast<std::size_t>(order + 1)) {
    if (order < 0) throw std::invalid_argument("jet order must be non-negative");
  }
  explicit Jet(std::vector<value_type> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) throw std::invalid_argument("jet needs at least one coefficient");
  }

  static Jet constant(int order, value_type a) {
    Jet j(order);
    j.c_[0] = a;
    return j;
  }
  /// a + t
  static Jet variable(int order, value_type a) {
    Jet j = constant(order, a);
    if (order >= 1) j.c_[1] = 1.0;
    return j;
  }
  /// Coefficients from derivative values f, f', f'', ... (divided by n!).
  static Jet from_derivatives(const std::vector<value_type>& d, int order) {
    Jet j(order);
    double fact = 1.0;
    for (int n = 0; n <= order && n < static_cast<int>(d.size()); ++n) {
      if (n > 0) fact *= n;
      j.c_[static_cast<std::size_t>(n)] = d[static_cast<std::size_t>(n)] / fact;
    }
    return j;
  }

  int order() const noexcept { return static_cast<int>(c_.size()) - 1; }
  value_type& operator[](int n) { return c_.at(static_cast<std::size_t>(n)); }
  const value_type& operator[](int n) const { return c_.at(static_cast<std::size_t>(n)); }
  const std::vector<value_type>& coefficients() const noexcept { return c_; }

  /// n-th derivative at t = 0.
  value_type derivative(int n) const {
    double fact = 1.0;
    for (int i = 2; i <= n; ++i) fact *= i;
    return (*this)[n] * fact;
  }

  /// d/dt of the series, one order lower.
  Jet differentiated() const {
    if (order() == 0) return constant(0, 0.0);
    Jet d(order() - 1);
    for (int n = 0; n < order(); ++n) d[n] = static_cast<double>(n + 1) * (*this)[n + 1];
    return d;
  }

  /// f(-t)
  Jet reflected() const {
    Jet r = *this;
    for (int n = 1; n <= order(); n += 2) r[n] = -r[n];
    return r;
  }

  Jet truncated(int order) const {
    Jet r(order);
    for (int n = 0; n <= order && n <= this->order(); ++n) r[n] = (*this)[n];
    return r;
  }

  Jet& operator+=(const Jet& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator*=(value_type a) {
    for (auto& x : c_) x *= a;
    return *this;
  }
  Jet& operator+=(value_type a) {
    c_[0] += a;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, value_type s) { return a *= s; }
  friend Jet operator*(value_type s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, value_type s) { return a += s; }
  friend Jet operator-(Jet a) { return a *= value_type(-1.0); }

  friend Jet operator*(const Jet& a, const Jet& b) {
    a.check(b);
    Jet r(a.order());
    for (int n = 0; n <= a.order(); ++n) {
      value_type s{};
      for (int i = 0; i <= n; ++i) s += a[i] * b[n - i];
      r[n] = s;
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    a.check(b);
    if (b[0] == value_type{}) throw std::domain_error("jet division by a series vanishing at 0");
    Jet r(a.order());
    for (int n = 0; n <= a.order(); ++n) {
      value_type s = a[n];
      for (int i = 1; i <= n; ++i) s -= b[i] * r[n - i];
      r[n] = s / b[0];
    }
    return r;
  }

 private:
  void check(const Jet& o) const {
    if (o.c_.size() != c_.size()) throw std::invalid_argument("jet order mismatch");
  }
  std::vector<value_type> c_;
};

/// exp of a series: b' = a' b.
inline Jet exp(const Jet& a) {
  Jet b(a.order());
  b[0] = std::exp(a[0]);
  for (int n = 1; n <= a.order(); ++n) {
    Jet::value_type s{};
    for (int k = 1; k <= n; ++k) s += static_cast<double>(k) * a[k] * b[n - k];
    b[n] = s / static_cast<double>(n);
  }
  return b;
}

/// Principal square root of a series with a[0] != 0.
inline Jet sqrt(const Jet& a) {
  if (a[0] == Jet::value_type{}) throw std::domain_error("jet sqrt at a branch point");
  Jet b(a.order());
  b[0] = std::sqrt(a[0]);
  for (int n = 1; n <= a.order(); ++n) {
    Jet::value_type s = a[n];
    for (int i = 1; i < n; ++i) s -= b[i] * b[n - i];
    b[n] = s / (2.0 * b[0]);
  }
  return b;
}

/// outer(inner(t)) where `outer` is expanded about inner(0): only the
/// increment inner(t) - inner(0) is substituted.
inline Jet compose(const Jet& outer, const Jet& inner) {
  const int N = inner.order();
  Jet h = inner;
  h[0] = 0.0;
  Jet result = Jet::constant(N, outer[0]);
  Jet power = Jet::constant(N, 1.0);
  for (int n = 1; n <= outer.order() && n <= N; ++n) {
    power = power * h;
    result += power * outer[n];
  }
  return result;
}

/// Series s(t), s(0) = 0, solving P(s(t)) - P(0) = rhs(t) - rhs(0), where P
/// is expanded about 0 with P[1] != 0.
inline Jet invert_series(const Jet& P, const Jet& rhs) {
  if (P[1] == Jet::value_type{}) throw std::domain_error("series inversion with vanishing slope");
  const int N = rhs.order();
  Jet target = rhs;
  target[0] = 0.0;
  Jet s(N);
  Jet Pt = P.truncated(N);
  for (int it = 0; it < N; ++it) {
    Jet Ps = compose(Pt, s) - Jet::constant(N, Pt[0]);
    Jet nonlinear = Ps - s * Pt[1];
    s = (target - nonlinear) * (1.0 / Pt[1]);
  }
  return s;
}

}  // namespace susy
