#pragma once

// Finite-difference stencils on uniform grids.

#include <span>
#include <stdexcept>
#include <vector>

#include "susy/core.hpp"

namespace susy {

/// Fornberg's recursion: weights[j][d] multiplies f(nodes[j]) in the
/// approximation of the d-th derivative at x0, for d = 0..max_order.
inline std::vector<std::vector<double>> fornberg_weights(double x0,
                                                         std::span<const double> nodes,
                                                         int max_order) {
  const std::size_t n = nodes.size();
  if (n == 0) throw std::invalid_argument("fornberg_weights: no nodes");
  const auto m = static_cast<std::size_t>(max_order);
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k)
          c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  return c;
}

/// Derivative weights in units of the grid spacing: centered in the
/// interior, one-sided of the same accuracy order near the two ends.
struct DerivativeStencil {
  int order = 1;
  int accuracy = 6;
  int half_width = 3;
  std::vector<double> central;             // offsets -half_width..half_width
  std::vector<std::vector<double>> left;   // left[i]: point i, nodes 0..left_width-1
  int left_width = 0;

  std::size_t min_points() const noexcept {
    return static_cast<std::size_t>(std::max(left_width, 2 * half_width + 1));
  }
};

inline DerivativeStencil make_stencil(int order, int accuracy = 6) {
  if (order != 1 && order != 2)
    throw std::invalid_argument("stencil order must be 1 or 2");
  if (accuracy < 4 || accuracy % 2 != 0)
    throw std::invalid_argument("stencil accuracy must be an even integer >= 4");
  DerivativeStencil s;
  s.order = order;
  s.accuracy = accuracy;
  s.half_width = accuracy / 2;

  std::vector<double> nodes;
  for (int j = -s.half_width; j <= s.half_width; ++j) nodes.push_back(j);
  auto w = fornberg_weights(0.0, nodes, order);
  for (auto& row : w) s.central.push_back(row[static_cast<std::size_t>(order)]);

  s.left_width = order + accuracy;
  std::vector<double> side;
  for (int j = 0; j < s.left_width; ++j) side.push_back(j);
  for (int i = 0; i < s.half_width; ++i) {
    auto wi = fornberg_weights(static_cast<double>(i), side, order);
    std::vector<double> col;
    for (auto& row : wi) col.push_back(row[static_cast<std::size_t>(order)]);
    s.left.push_back(std::move(col));
  }
  return s;
}

/// Default accuracy-6 stencils, built once.
inline const DerivativeStencil& default_stencil(int order) {
  static const DerivativeStencil first = make_stencil(1, 6);
  static const DerivativeStencil second = make_stencil(2, 6);
  if (order == 1) return first;
  if (order == 2) return second;
  throw std::invalid_argument("stencil order must be 1 or 2");
}

/// d^order f / dx^order on the full grid. The outermost half_width points
/// use one-sided weights and carry the largest truncation error.
inline SampledFunction differentiate(const SampledFunction& f, int order,
                                     const DerivativeStencil& st) {
  if (order != st.order)
    throw std::invalid_argument("differentiate: order does not match stencil");
  f.require_finite("differentiate");
  const Grid& g = f.grid();
  const std::size_t n = f.size();
  if (n < st.min_points())
    throw std::invalid_argument("differentiate: grid too small for stencil");
  const double scale = 1.0 / std::pow(g.spacing(), order);
  SampledFunction out(g);
  const auto hw = static_cast<std::size_t>(st.half_width);
  const auto lw = static_cast<std::size_t>(st.left_width);
  const double mirror = (order % 2 == 1) ? -1.0 : 1.0;

  for (std::size_t i = hw; i + hw < n; ++i) {
    cplx acc{};
    for (std::size_t j = 0; j < st.central.size(); ++j) acc += st.central[j] * f[i - hw + j];
    out[i] = acc * scale;
  }
  for (std::size_t i = 0; i < hw; ++i) {
    cplx acc_l{};
    cplx acc_r{};
    for (std::size_t j = 0; j < lw; ++j) {
      acc_l += st.left[i][j] * f[j];
      acc_r += st.left[i][j] * f[n - 1 - j];
    }
    out[i] = acc_l * scale;
    out[n - 1 - i] = mirror * acc_r * scale;
  }
  return out;
}

inline SampledFunction differentiate(const SampledFunction& f, int order) {
  return differentiate(f, order, default_stencil(order));
}

/// Default zero threshold for Wronskians, relative to max|W|.
inline constexpr double default_zero_threshold = 1e-12;

/// (W'' W - W'^2) / W^2 from supplied first and second derivatives.
inline SampledFunction second_log_derivative(const SampledFunction& W,
                                             const SampledFunction& dW,
                                             const SampledFunction& d2W,
                                             double zero_threshold = default_zero_threshold) {
  require_same_grid(W.grid(), dW.grid());
  require_same_grid(W.grid(), d2W.grid());
  W.require_finite("second_log_derivative");
  auto zeros = find_zero_brackets(W, zero_threshold);
  if (!zeros.empty()) throw ZeroCrossingError(std::move(zeros));
  SampledFunction out(W.grid());
  for (std::size_t i = 0; i < W.size(); ++i) {
    const cplx r = dW[i] / W[i];
    out[i] = d2W[i] / W[i] - r * r;
  }
  return out;
}

/// Same, with W' and W'' from the default stencils.
inline SampledFunction second_log_derivative(const SampledFunction& W,
                                             double zero_threshold = default_zero_threshold) {
  W.require_finite("second_log_derivative");
  return second_log_derivative(W, differentiate(W, 1), differentiate(W, 2), zero_threshold);
}

}  // namespace susy
