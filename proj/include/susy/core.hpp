#pragma once

// Grids, sampled complex functions, chain parameters and zero bracketing.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace susy {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;

/// Uniform one-dimensional sample domain.
class Grid {
 public:
  /// Smallest grid accepted; wide enough for an 8-point one-sided stencil.
  static constexpr std::size_t min_points = 9;

  Grid(double x_min, double x_max, std::size_t n_points)
      : x_min_(x_min), x_max_(x_max), n_(n_points) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max))
      throw std::invalid_argument("grid bounds must be finite");
    if (x_min == x_max) throw std::invalid_argument("empty interval");
    if (x_min > x_max) throw std::invalid_argument("reversed bounds");
    if (n_points < min_points)
      throw std::invalid_argument("too few points (need at least 9)");
    h_ = (x_max - x_min) / static_cast<double>(n_points - 1);
  }

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return h_; }
  double x(std::size_t i) const noexcept {
    return x_min_ + static_cast<double>(i) * h_;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double x_min_;
  double x_max_;
  std::size_t n_;
  double h_;
};

inline Grid make_grid(double x_min, double x_max, std::size_t n_points) {
  return Grid(x_min, x_max, n_points);
}

inline void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw std::invalid_argument("grid mismatch");
}

/// Complex samples of a function on a Grid, one value per point.
class SampledFunction {
 public:
  explicit SampledFunction(Grid grid)
      : grid_(grid), values_(grid.size(), cplx{}) {}

  SampledFunction(Grid grid, std::vector<cplx> values)
      : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
      throw std::invalid_argument("sample count does not match grid size");
  }

  template <class F>
  static SampledFunction generate(const Grid& grid, F&& f) {
    std::vector<cplx> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = cplx(f(grid.x(i)));
    return SampledFunction(grid, std::move(v));
  }

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const cplx> values() const noexcept { return values_; }
  std::span<cplx> values() noexcept { return values_; }
  const cplx& operator[](std::size_t i) const noexcept { return values_[i]; }
  cplx& operator[](std::size_t i) noexcept { return values_[i]; }

  bool all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](const cplx& z) {
      return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
  }

  void require_finite(const char* what) const {
    if (!all_finite())
      throw std::domain_error(std::string(what) + ": non-finite input values");
  }

  double max_abs() const noexcept {
    double m = 0.0;
    for (const auto& z : values_) m = std::max(m, std::abs(z));
    return m;
  }

  double max_imag() const noexcept {
    double m = 0.0;
    for (const auto& z : values_) m = std::max(m, std::abs(z.imag()));
    return m;
  }

  std::vector<double> real_parts() const {
    std::vector<double> r(values_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = values_[i].real();
    return r;
  }

  SampledFunction& operator+=(const SampledFunction& o) {
    require_same_grid(grid_, o.grid_);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  SampledFunction& operator-=(const SampledFunction& o) {
    require_same_grid(grid_, o.grid_);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  SampledFunction& operator*=(const SampledFunction& o) {
    require_same_grid(grid_, o.grid_);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= o.values_[i];
    return *this;
  }
  SampledFunction& operator/=(const SampledFunction& o) {
    require_same_grid(grid_, o.grid_);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] /= o.values_[i];
    return *this;
  }
  SampledFunction& operator*=(cplx c) {
    for (auto& z : values_) z *= c;
    return *this;
  }
  SampledFunction& operator+=(cplx c) {
    for (auto& z : values_) z += c;
    return *this;
  }

  friend SampledFunction operator+(SampledFunction a, const SampledFunction& b) { return a += b; }
  friend SampledFunction operator-(SampledFunction a, const SampledFunction& b) { return a -= b; }
  friend SampledFunction operator*(SampledFunction a, const SampledFunction& b) { return a *= b; }
  friend SampledFunction operator/(SampledFunction a, const SampledFunction& b) { return a /= b; }
  friend SampledFunction operator*(SampledFunction a, cplx c) { return a *= c; }
  friend SampledFunction operator*(cplx c, SampledFunction a) { return a *= c; }
  friend SampledFunction operator+(SampledFunction a, cplx c) { return a += c; }
  friend SampledFunction operator-(SampledFunction a) { return a *= cplx(-1.0); }

 private:
  Grid grid_;
  std::vector<cplx> values_;
};

/// Pointwise map over one or two sampled functions.
template <class F>
SampledFunction map(const SampledFunction& a, F&& f) {
  SampledFunction out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a[i]);
  return out;
}

template <class F>
SampledFunction map(const SampledFunction& a, const SampledFunction& b, F&& f) {
  require_same_grid(a.grid(), b.grid());
  SampledFunction out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a[i], b[i]);
  return out;
}

/// Factorization energy and the constants C_1..C_{k-1}, D_1..D_{k-1}
/// of a length-k Jordan chain. C_{k-1} multiplies u in u_k and never
/// reaches the k-function Wronskian.
struct ChainParameters {
  cplx epsilon{};
  int k = 2;
  std::vector<double> C;
  std::vector<double> D;

  void validate() const {
    if (k < 2) throw std::invalid_argument("chain order k must be at least 2");
    const auto need = static_cast<std::size_t>(k - 1);
    if (C.size() != need || D.size() != need)
      throw std::invalid_argument("C and D must each hold exactly k-1 constants");
    for (double c : C)
      if (!std::isfinite(c)) throw std::invalid_argument("non-finite C constant");
    for (double d : D)
      if (!std::isfinite(d)) throw std::invalid_argument("non-finite D constant");
  }

  /// 1-based accessors matching C_i, D_i.
  double c(int i) const { return C.at(static_cast<std::size_t>(i - 1)); }
  double d(int i) const { return D.at(static_cast<std::size_t>(i - 1)); }

  static ChainParameters zeros(cplx epsilon, int k) {
    ChainParameters p;
    p.epsilon = epsilon;
    p.k = k;
    p.C.assign(static_cast<std::size_t>(std::max(k - 1, 0)), 0.0);
    p.D.assign(static_cast<std::size_t>(std::max(k - 1, 0)), 0.0);
    return p;
  }

  friend bool operator==(const ChainParameters&, const ChainParameters&) = default;
};

/// Interval [left, right] on the grid known to contain a zero of W.
struct ZeroBracket {
  double left = 0.0;
  double right = 0.0;
  friend bool operator==(const ZeroBracket&, const ZeroBracket&) = default;
};

/// Thrown when a Wronskian vanishes inside the sample window.
class ZeroCrossingError : public std::runtime_error {
 public:
  explicit ZeroCrossingError(std::vector<ZeroBracket> brackets)
      : std::runtime_error(describe(brackets)), brackets_(std::move(brackets)) {}

  const std::vector<ZeroBracket>& brackets() const noexcept { return brackets_; }

 private:
  static std::string describe(const std::vector<ZeroBracket>& b) {
    std::string s = "Wronskian vanishes inside the window";
    if (!b.empty())
      s += " near [" + std::to_string(b.front().left) + ", " +
           std::to_string(b.front().right) + "]";
    return s;
  }
  std::vector<ZeroBracket> brackets_;
};

struct IdentityCheck {
  std::string name;
  double deviation;  // max deviation, relative to the local scale
};

/// Relative size below which an imaginary part counts as round-off.
inline constexpr double realness_floor = 1e-8;

/// Sliding-window maximum of mag over +-w samples.
inline std::vector<double> local_envelope(const std::vector<double>& mag, std::size_t w) {
  const std::size_t n = mag.size();
  std::vector<double> env(n);
  std::vector<std::size_t> dq;
  dq.reserve(n);
  std::size_t head = 0;
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t hi = std::min(n - 1, i + w);
    while (next <= hi) {
      while (dq.size() > head && mag[dq.back()] <= mag[next]) dq.pop_back();
      dq.push_back(next);
      ++next;
    }
    const std::size_t lo = i >= w ? i - w : 0;
    while (dq[head] < lo) ++head;
    env[i] = mag[dq[head]];
  }
  return env;
}

inline std::size_t window_points(const Grid& g, double radius) {
  return static_cast<std::size_t>(std::max(1.0, std::floor(radius / g.spacing())));
}

/// Zeros of a sampled function, bracketed between grid points: neighbouring
/// samples more than a quarter turn apart in phase, plus interior
/// local minima of |W| below rel_threshold times the largest |W| within a
/// unit distance (tangential zeros). Measuring against the local size keeps
/// exponentially growing Wronskians from tripping the test.
inline std::vector<ZeroBracket> find_zero_brackets(const SampledFunction& W,
                                                   double rel_threshold = 1e-12) {
  const Grid& g = W.grid();
  const std::size_t n = W.size();
  std::vector<ZeroBracket> out;
  auto push = [&](std::size_t a, std::size_t b) {
    ZeroBracket br{g.x(a), g.x(b)};
    if (!out.empty() && out.back().right >= br.left) {
      out.back().right = std::max(out.back().right, br.right);
    } else {
      out.push_back(br);
    }
  };

  std::vector<double> mag(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::abs(W[i]);
    mag[i] = std::isfinite(a) ? a : 0.0;
  }
  const auto env = local_envelope(mag, window_points(g, 1.0));

  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::abs(W[i]);
    if (!std::isfinite(a) || a == 0.0) {
      push(i == 0 ? 0 : i - 1, std::min(i + 1, n - 1));
      continue;
    }
    if (i > 0 && i + 1 < n && a <= mag[i - 1] && a <= mag[i + 1] && a <= rel_threshold * env[i])
      push(i - 1, i + 1);
    // A sign change up to a common phase: neighbours pointing in opposite
    // directions. Covers real W and W = i^k * real alike.
    if (i + 1 < n && std::isfinite(std::abs(W[i + 1])) && (W[i] * std::conj(W[i + 1])).real() < 0.0)
      push(i, i + 1);
  }
  return out;
}

/// max_i |a_i - b_i| / s_i, where s_i is the larger of |a_i|, |b_i| and
/// floor_fraction times the largest |a|, |b| within `radius` of x_i.
/// Pointwise relative away from zeros; near an isolated zero it measures
/// against the local size of the function instead.
inline double local_relative_deviation(const SampledFunction& a,
                                       const SampledFunction& b,
                                       double radius = 1.0,
                                       double floor_fraction = 1e-2) {
  require_same_grid(a.grid(), b.grid());
  const std::size_t n = a.size();
  std::vector<double> mag(n);
  for (std::size_t i = 0; i < n; ++i) mag[i] = std::max(std::abs(a[i]), std::abs(b[i]));
  const auto env = local_envelope(mag, window_points(a.grid(), radius));

  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = std::max(mag[i], floor_fraction * env[i]);
    if (s == 0.0) continue;
    worst = std::max(worst, std::abs(a[i] - b[i]) / s);
  }
  return worst;
}

/// Sup-norm of a - b.
inline double sup_difference(const SampledFunction& a, const SampledFunction& b) {
  require_same_grid(a.grid(), b.grid());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace susy
