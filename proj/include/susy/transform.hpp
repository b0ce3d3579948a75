#pragma once

// V_k = V0 - 2 (ln W_k)'' and the added state psi_k = W_{k-1} / W_k.

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "susy/chain.hpp"
#include "susy/core.hpp"
#include "susy/seeds.hpp"
#include "susy/stencil.hpp"
#include "susy/wronskian.hpp"

namespace susy {

struct TransformDiagnostics {
  std::vector<double> chain_residuals;  // links 1..k, when a chain was supplied
  double crosscheck = 0.0;              // Wronskian method spread
  std::string method;
  double psi_residual = 0.0;            // ||(-d2 + Vk - eps) psi|| / ||psi||
  double max_imag_Vk = 0.0;             // relative to max|Vk|
  double max_imag_psi = 0.0;            // relative to max|psi|
};

struct TransformResult {
  SampledFunction V0, Vk, psi_k, W_k;
  std::vector<ZeroBracket> singularities;
  TransformDiagnostics diagnostics;

  bool singular() const noexcept { return !singularities.empty(); }
};

/// Relative size of the imaginary part, max|Im f| / max|f|.
inline double relative_imag(const SampledFunction& f) {
  const double s = f.max_abs();
  return s > 0.0 ? f.max_imag() / s : 0.0;
}

/// Pointwise quotient W_{k-1} / W_k.
inline SampledFunction added_state(const WronskianBundle& b) {
  require_same_grid(b.W_k.grid(), b.W_km1.grid());
  SampledFunction psi(b.W_k.grid());
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = b.W_km1[i] / b.W_k[i];
  return psi;
}

/// ||(-psi'' + (V - eps) psi)|| / ||psi|| with the default stencil.
inline double schrodinger_residual(const SampledFunction& psi, const SampledFunction& V, cplx eps) {
  require_same_grid(psi.grid(), V.grid());
  const auto d2 = differentiate(psi, 2);
  double r = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) r = std::max(r, std::abs(-d2[i] + (V[i] - eps) * psi[i]));
  const double s = psi.max_abs();
  return s > 0.0 ? r / s : r;
}

/// Builds V_k and psi_k from a bundle carrying W, W', W''. A vanishing W_k
/// is reported through `singularities`; V_k and psi_k are still filled in
/// pointwise so the data can be inspected.
inline TransformResult transform(const SampledFunction& V0, const WronskianBundle& b, cplx epsilon,
                                 double zero_threshold = default_zero_threshold) {
  require_same_grid(V0.grid(), b.W_k.grid());
  TransformResult r{V0, SampledFunction(V0.grid()), SampledFunction(V0.grid()), b.W_k, {}, {}};
  r.diagnostics.crosscheck = b.crosscheck;
  r.diagnostics.method = to_string(b.method);
  b.W_k.require_finite("transform");
  r.singularities = find_zero_brackets(b.W_k, zero_threshold);
  for (std::size_t i = 0; i < V0.size(); ++i) {
    const cplx q = b.dW_k[i] / b.W_k[i];
    r.Vk[i] = V0[i] - 2.0 * (b.d2W_k[i] / b.W_k[i] - q * q);
  }
  r.psi_k = added_state(b);
  r.diagnostics.max_imag_Vk = relative_imag(r.Vk);
  r.diagnostics.max_imag_psi = relative_imag(r.psi_k);
  if (!r.singular() && r.psi_k.all_finite() && r.Vk.all_finite())
    r.diagnostics.psi_residual = schrodinger_residual(r.psi_k, r.Vk, epsilon);
  else
    r.diagnostics.psi_residual = std::numeric_limits<double>::infinity();
  return r;
}

enum class StateKind { Physical, Mathematical };

inline const char* to_string(StateKind k) { return k == StateKind::Physical ? "physical" : "mathematical"; }

struct NormalizabilityReport {
  StateKind kind = StateKind::Mathematical;
  double tail_fraction = 1.0;  // share of the window's |psi|^2 outside the inner 80%
  double edge_ratio = 1.0;     // max |psi| at the two ends over max |psi|
};

/// Square-integrability judged on the window: the outer 20% must carry a
/// small share of the trapezoid integral of |psi|^2 and the ends must sit
/// well below the peak.
inline NormalizabilityReport normalizability_check(const SampledFunction& psi, double tail_tol = 0.2,
                                                   double edge_tol = 0.5) {
  psi.require_finite("normalizability_check");
  const Grid& g = psi.grid();
  const std::size_t n = psi.size();
  const double a = g.x_min() + 0.1 * (g.x_max() - g.x_min());
  const double b = g.x_max() - 0.1 * (g.x_max() - g.x_min());
  double total = 0.0, inner = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double seg = 0.5 * g.spacing() * (std::norm(psi[i]) + std::norm(psi[i + 1]));
    total += seg;
    const double mid = 0.5 * (g.x(i) + g.x(i + 1));
    if (mid >= a && mid <= b) inner += seg;
  }
  NormalizabilityReport rep;
  const double peak = psi.max_abs();
  if (total <= 0.0 || peak <= 0.0) return rep;
  rep.tail_fraction = (total - inner) / total;
  rep.edge_ratio = std::max(std::abs(psi[0]), std::abs(psi[n - 1])) / peak;
  rep.kind = (rep.tail_fraction < tail_tol && rep.edge_ratio < edge_tol) ? StateKind::Physical
                                                                         : StateKind::Mathematical;
  return rep;
}

/// psi / sqrt(int |psi|^2) over the window (trapezoid).
inline SampledFunction l2_normalized(const SampledFunction& psi) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < psi.size(); ++i)
    total += 0.5 * psi.grid().spacing() * (std::norm(psi[i]) + std::norm(psi[i + 1]));
  if (!(total > 0.0) || !std::isfinite(total)) return psi;
  return psi * cplx(1.0 / std::sqrt(total));
}

/// Seed, chain, Wronskians and transform for one parameter set.
struct Pipeline {
  SeedEvaluation seed;
  JordanChain chain;
  WronskianBundle bundle;
  TransformResult result;
};

inline double default_chain_tolerance(SeedFamily f) { return f == SeedFamily::Lame ? 1e-4 : 1e-6; }

inline Pipeline run_pipeline(const SeedEvaluation& seed, const ChainParameters& params, bool crosscheck = true) {
  auto chain = build_chain(seed, params);
  auto bundle = compute_wronskians(seed, chain, crosscheck);
  auto result = transform(seed.V0(), bundle, params.epsilon);
  chain.residuals = chain_residuals(chain, seed.V0());
  result.diagnostics.chain_residuals = chain.residuals;
  return Pipeline{seed, std::move(chain), std::move(bundle), std::move(result)};
}

inline Pipeline run_pipeline(SeedRequest req, const ChainParameters& params, bool crosscheck = true) {
  req.k = params.k;
  req.epsilon = params.epsilon;
  return run_pipeline(make_seed(req), params, crosscheck);
}

}  // namespace susy
