#pragma once

// Generalized eigenfunctions u_1..u_k of a confluent Jordan block,
//   u_j = sum_{l=1}^{j-1} [C_{j-l} d^{l-1}u + D_{j-l} d^{l-1}v] / (l-1)!
//         + d^{j-1}u / (j-1)!,      d = d/d eps.

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "susy/core.hpp"
#include "susy/seeds.hpp"
#include "susy/stencil.hpp"

namespace susy {

struct JordanChain {
  ChainParameters params;
  std::vector<SampledFunction> members;    // u_1..u_k
  std::vector<SampledFunction> members_x;  // their x-derivatives
  std::vector<double> residuals;           // filled by verify_chain, one per link 1..k

  int k() const noexcept { return static_cast<int>(members.size()); }
  const Grid& grid() const { return members.at(0).grid(); }
};

namespace detail {

/// Neumaier summation of complex addends, component-wise.
class CompensatedSum {
 public:
  void add(cplx z) {
    add_part(re_, cre_, z.real());
    add_part(im_, cim_, z.imag());
  }
  cplx value() const { return {re_ + cre_, im_ + cim_}; }

 private:
  static void add_part(double& s, double& c, double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x)) c += (s - t) + x;
    else c += (x - t) + s;
    s = t;
  }
  double re_ = 0.0, cre_ = 0.0, im_ = 0.0, cim_ = 0.0;
};

struct ChainTerm {
  double weight;
  bool from_v;
  int order;  // d/d eps order
};

/// Terms of u_j (1-based j).
inline std::vector<ChainTerm> chain_terms(const ChainParameters& p, int j) {
  std::vector<ChainTerm> terms;
  double fact = 1.0;  // (l-1)!
  for (int l = 1; l <= j - 1; ++l) {
    if (l > 1) fact *= (l - 1);
    terms.push_back({p.c(j - l) / fact, false, l - 1});
    terms.push_back({p.d(j - l) / fact, true, l - 1});
  }
  double last = 1.0;
  for (int i = 2; i <= j - 1; ++i) last *= i;
  terms.push_back({1.0 / last, false, j - 1});
  return terms;
}

inline SampledFunction combine(const std::vector<ChainTerm>& terms,
                               const std::vector<SampledFunction>& us,
                               const std::vector<SampledFunction>& vs) {
  const Grid& g = us.at(0).grid();
  SampledFunction out(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CompensatedSum s;
    for (const auto& t : terms) {
      if (t.weight == 0.0) continue;
      const auto o = static_cast<std::size_t>(t.order);
      s.add(t.weight * (t.from_v ? vs[o][i] : us[o][i]));
    }
    out[i] = s.value();
  }
  return out;
}

}  // namespace detail

inline JordanChain build_chain(const SeedEvaluation& seed, const ChainParameters& params) {
  params.validate();
  if (seed.orders() < params.k)
    throw std::invalid_argument("seed provides " + std::to_string(seed.orders()) +
                                " parametric derivatives, chain of length " +
                                std::to_string(params.k) + " needs " + std::to_string(params.k));
  if (std::abs(seed.epsilon - params.epsilon) > 1e-14 * std::max(1.0, std::abs(seed.epsilon)))
    throw std::invalid_argument("chain energy differs from the seed energy");
  JordanChain ch;
  ch.params = params;
  for (int j = 1; j <= params.k; ++j) {
    const auto terms = detail::chain_terms(params, j);
    ch.members.push_back(detail::combine(terms, seed.u_derivs, seed.v_derivs));
    ch.members_x.push_back(detail::combine(terms, seed.ux_derivs, seed.vx_derivs));
  }
  return ch;
}

/// ||(-d2 + V0 - eps) u_j - u_{j-1}|| / max(||u_j||, ||u_{j-1}||) per link
/// j = 1..k (u_0 = 0), with the default second-derivative stencil.
inline std::vector<double> chain_residuals(const JordanChain& ch, const SampledFunction& V0) {
  require_same_grid(ch.grid(), V0.grid());
  std::vector<double> out;
  const cplx eps = ch.params.epsilon;
  for (int j = 0; j < ch.k(); ++j) {
    const auto& f = ch.members[static_cast<std::size_t>(j)];
    const auto f2 = differentiate(f, 2);
    double num = 0.0;
    double scale = f.max_abs();
    for (std::size_t i = 0; i < f.size(); ++i) {
      cplx r = -f2[i] + (V0[i] - eps) * f[i];
      if (j > 0) r -= ch.members[static_cast<std::size_t>(j - 1)][i];
      num = std::max(num, std::abs(r));
    }
    if (j > 0) scale = std::max(scale, ch.members[static_cast<std::size_t>(j - 1)].max_abs());
    out.push_back(scale > 0.0 ? num / scale : num);
  }
  return out;
}

struct ChainReport {
  std::vector<double> residuals;  // links 1..k
  double tolerance = 1e-6;
  std::vector<int> failing;       // 1-based link indices

  bool passed() const noexcept { return failing.empty(); }
};

inline ChainReport verify_chain(JordanChain& ch, const SampledFunction& V0, double tolerance = 1e-6) {
  ChainReport rep;
  rep.tolerance = tolerance;
  rep.residuals = chain_residuals(ch, V0);
  for (std::size_t j = 0; j < rep.residuals.size(); ++j)
    if (!(rep.residuals[j] < tolerance)) rep.failing.push_back(static_cast<int>(j) + 1);
  ch.residuals = rep.residuals;
  return rep;
}

}  // namespace susy
