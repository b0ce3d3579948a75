#pragma once

// Wronskians of Jordan chains evaluated three ways: generic determinant,
// expanded sums of seed Wronskians (k = 3, 4) and reduced two-function
// forms (k = 2, 3, 4). Also the identity suite for seed pairs.

#include <algorithm>
#include <array>
#include <span>
#include <string>
#include <vector>

#include "susy/chain.hpp"
#include "susy/core.hpp"
#include "susy/seeds.hpp"
#include "susy/stencil.hpp"

namespace susy {

/// Successive x-derivatives of one sampled function: d[r] = f^(r).
struct FunctionJet {
  std::vector<SampledFunction> d;

  int max_order() const noexcept { return static_cast<int>(d.size()) - 1; }
  const Grid& grid() const { return d.at(0).grid(); }
};

/// Derivatives by repeated stencil differentiation. Accuracy degrades with
/// each order; only for inputs without a known differential equation.
inline FunctionJet stencil_jet(const SampledFunction& f, int order) {
  FunctionJet j;
  j.d.push_back(f);
  for (int r = 1; r <= order; ++r) j.d.push_back(differentiate(j.d.back(), 1));
  return j;
}

/// Derivatives of f with f'' = (V0 - eps) f - weight * g, from f, f' and the
/// jet of g (may be null). V holds V0, V0', ...; order r needs V0^(r-2).
inline FunctionJet schrodinger_jet(const SampledFunction& f, const SampledFunction& fx,
                                   const std::vector<SampledFunction>& V, cplx eps,
                                   const FunctionJet* lower, cplx weight, int order) {
  FunctionJet j;
  j.d.push_back(f);
  if (order >= 1) j.d.push_back(fx);
  if (order >= 2 && static_cast<int>(V.size()) < order - 1)
    throw std::invalid_argument("schrodinger_jet: not enough potential derivatives");
  if (lower && lower->max_order() < order - 2)
    throw std::invalid_argument("schrodinger_jet: lower jet too short");
  const std::size_t n = f.size();
  for (int r = 2; r <= order; ++r) {
    const int q = r - 2;  // differentiate f'' = (V - eps) f - w g q times
    SampledFunction out(f.grid());
    double binom = 1.0;
    for (int i = 0; i <= q; ++i) {
      if (i > 0) binom = binom * (q - i + 1) / i;
      const auto& Vi = V[static_cast<std::size_t>(i)];
      const auto& fq = j.d[static_cast<std::size_t>(q - i)];
      for (std::size_t p = 0; p < n; ++p) out[p] += binom * Vi[p] * fq[p];
    }
    const auto& fq = j.d[static_cast<std::size_t>(q)];
    for (std::size_t p = 0; p < n; ++p) out[p] -= eps * fq[p];
    if (lower && weight != cplx{}) {
      const auto& gq = lower->d[static_cast<std::size_t>(q)];
      for (std::size_t p = 0; p < n; ++p) out[p] -= weight * gq[p];
    }
    j.d.push_back(std::move(out));
  }
  return j;
}

namespace detail {

/// Determinant of a small dense complex matrix (row-major, overwritten) by
/// LU with partial pivoting.
inline cplx determinant(std::vector<cplx>& a, std::size_t k) {
  cplx det = 1.0;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    double best = std::abs(a[c * k + c]);
    for (std::size_t r = c + 1; r < k; ++r) {
      const double v = std::abs(a[r * k + c]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != c) {
      for (std::size_t q = 0; q < k; ++q) std::swap(a[c * k + q], a[piv * k + q]);
      det = -det;
    }
    const cplx d = a[c * k + c];
    det *= d;
    for (std::size_t r = c + 1; r < k; ++r) {
      const cplx f = a[r * k + c] / d;
      if (f == cplx{}) continue;
      for (std::size_t q = c + 1; q < k; ++q) a[r * k + q] -= f * a[c * k + q];
    }
  }
  return det;
}

}  // namespace detail

/// det[f_j^(rows[i])] pointwise; rows = {0, 1, ..., k-1} gives the Wronskian.
inline SampledFunction wronskian_det(std::span<const FunctionJet> fs, std::span<const int> rows) {
  const std::size_t k = fs.size();
  if (k == 0) throw std::invalid_argument("wronskian_det: no functions");
  if (rows.size() != k) throw std::invalid_argument("wronskian_det: row count differs from function count");
  const Grid& g = fs[0].grid();
  for (const auto& f : fs) {
    require_same_grid(g, f.grid());
    for (int r : rows)
      if (r > f.max_order()) throw std::invalid_argument("wronskian_det: derivative order unavailable");
  }
  for (const auto& f : fs)
    for (int r : rows) f.d[static_cast<std::size_t>(r)].require_finite("wronskian_det");
  SampledFunction out(g);
  std::vector<cplx> a(k * k);
  for (std::size_t p = 0; p < g.size(); ++p) {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) a[i * k + j] = fs[j].d[static_cast<std::size_t>(rows[i])][p];
    out[p] = detail::determinant(a, k);
  }
  return out;
}

inline SampledFunction wronskian_det(std::span<const FunctionJet> fs) {
  std::vector<int> rows(fs.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<int>(i);
  return wronskian_det(fs, rows);
}

/// Wronskian of plain samples with stencil derivatives.
inline SampledFunction wronskian_det(const std::vector<SampledFunction>& fs) {
  std::vector<FunctionJet> jets;
  for (const auto& f : fs) jets.push_back(stencil_jet(f, static_cast<int>(fs.size()) - 1));
  return wronskian_det(std::span<const FunctionJet>(jets));
}

/// W together with W' and W''.
struct WronskianValues {
  SampledFunction W, dW, d2W;
};

/// W' replaces the last row by order k; W'' = det(0..k-2, k+1) + det(0..k-3, k-1, k).
inline WronskianValues wronskian_with_derivatives(std::span<const FunctionJet> fs) {
  const int k = static_cast<int>(fs.size());
  std::vector<int> rows(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) rows[static_cast<std::size_t>(i)] = i;
  WronskianValues w{wronskian_det(fs, rows), SampledFunction(fs[0].grid()), SampledFunction(fs[0].grid())};
  rows.back() = k;
  w.dW = wronskian_det(fs, rows);
  rows.back() = k + 1;
  w.d2W = wronskian_det(fs, rows);
  if (k >= 2) {
    rows[static_cast<std::size_t>(k - 2)] = k - 1;
    rows.back() = k;
    w.d2W = w.d2W + wronskian_det(fs, rows);
  }
  return w;
}

// ---------------------------------------------------------------------------
// Jets of seeds and chain members.

/// Jets of d^j u and d^j v for j = 0..orders-1. These satisfy
/// (H - eps) d^j f = j d^{j-1} f.
struct SeedJets {
  std::vector<FunctionJet> u, v;
};

inline SeedJets seed_jets(const SeedEvaluation& s, int order) {
  SeedJets out;
  for (int j = 0; j < s.orders(); ++j) {
    const auto J = static_cast<std::size_t>(j);
    out.u.push_back(schrodinger_jet(s.u_derivs[J], s.ux_derivs[J], s.potential, s.epsilon,
                                    j > 0 ? &out.u[J - 1] : nullptr, static_cast<double>(j), order));
    out.v.push_back(schrodinger_jet(s.v_derivs[J], s.vx_derivs[J], s.potential, s.epsilon,
                                    j > 0 ? &out.v[J - 1] : nullptr, static_cast<double>(j), order));
  }
  return out;
}

/// Jets of u_1..u_k, using (H - eps) u_j = u_{j-1}.
inline std::vector<FunctionJet> chain_jets(const JordanChain& ch, const std::vector<SampledFunction>& V,
                                           int order) {
  std::vector<FunctionJet> out;
  out.reserve(static_cast<std::size_t>(ch.k()));
  for (int j = 0; j < ch.k(); ++j) {
    const auto J = static_cast<std::size_t>(j);
    out.push_back(schrodinger_jet(ch.members[J], ch.members_x[J], V, ch.params.epsilon,
                                  j > 0 ? &out[J - 1] : nullptr, 1.0, order));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Expanded forms.

/// A seed function d^order u (from_v = false) or d^order v.
struct SeedFunction {
  bool from_v = false;
  int order = 0;
  friend bool operator==(const SeedFunction&, const SeedFunction&) = default;
};

struct ExpandedTerm {
  double coefficient;
  std::vector<SeedFunction> args;
};

namespace detail {

/// Row j-1 holds the coefficients of u_j over the seed functions ordered
/// u, v, du, dv, d2u, d2v, ...
inline std::vector<std::vector<double>> chain_coefficient_matrix(const ChainParameters& p) {
  const auto k = static_cast<std::size_t>(p.k);
  std::vector<std::vector<double>> M(k, std::vector<double>(2 * k, 0.0));
  for (int j = 1; j <= p.k; ++j)
    for (const auto& t : chain_terms(p, j))
      M[static_cast<std::size_t>(j - 1)][2 * static_cast<std::size_t>(t.order) + (t.from_v ? 1 : 0)] += t.weight;
  return M;
}

inline double real_minor(const std::vector<std::vector<double>>& M, const std::vector<std::size_t>& cols) {
  const std::size_t k = cols.size();
  std::vector<cplx> a(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) a[i * k + j] = M[i][cols[j]];
  return determinant(a, k).real();
}

}  // namespace detail

/// W(u_1, ..., u_k) as a weighted sum of seed Wronskians (Cauchy-Binet over
/// the chain's coefficient matrix). Only column sets whose minor is not
/// identically zero in the constants are kept: 5 terms for k = 3, 14 for
/// k = 4. Coefficients are evaluated at p.
inline std::vector<ExpandedTerm> expanded_terms(const ChainParameters& p) {
  p.validate();
  const auto k = static_cast<std::size_t>(p.k);
  // generic constants detect structurally vanishing minors
  ChainParameters generic = p;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    generic.C[i] = std::sqrt(2.0 + 3.0 * static_cast<double>(i)) - 0.9;
    generic.D[i] = std::sqrt(5.0 + 7.0 * static_cast<double>(i)) - 1.7;
  }
  const auto M = detail::chain_coefficient_matrix(p);
  const auto G = detail::chain_coefficient_matrix(generic);

  std::vector<ExpandedTerm> out;
  std::vector<std::size_t> cols(k);
  for (std::size_t i = 0; i < k; ++i) cols[i] = i;
  const std::size_t n = 2 * k;
  while (true) {
    if (std::abs(detail::real_minor(G, cols)) > 1e-12) {
      ExpandedTerm t{detail::real_minor(M, cols), {}};
      for (std::size_t c : cols) t.args.push_back({c % 2 == 1, static_cast<int>(c / 2)});
      out.push_back(std::move(t));
    }
    // next k-combination of {0..n-1}
    std::size_t i = k;
    while (i > 0 && cols[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++cols[i - 1];
    for (std::size_t j = i; j < k; ++j) cols[j] = cols[j - 1] + 1;
  }
  return out;
}

inline SampledFunction evaluate_expanded(const SeedJets& jets, const std::vector<ExpandedTerm>& terms) {
  const Grid& g = jets.u.at(0).grid();
  SampledFunction sum(g);
  std::vector<FunctionJet> args;
  for (const auto& t : terms) {
    if (t.coefficient == 0.0) continue;
    args.clear();
    for (const auto& a : t.args) {
      const auto& src = a.from_v ? jets.v : jets.u;
      if (a.order >= static_cast<int>(src.size()))
        throw std::invalid_argument("expanded form needs more parametric derivatives");
      args.push_back(src[static_cast<std::size_t>(a.order)]);
    }
    sum = sum + wronskian_det(std::span<const FunctionJet>(args)) * cplx(t.coefficient);
  }
  return sum;
}

inline SampledFunction w3_expanded(const SeedEvaluation& s, const ChainParameters& p) {
  if (p.k != 3) throw std::invalid_argument("w3_expanded needs k = 3");
  if (s.orders() < 3) throw std::invalid_argument("w3_expanded needs two parametric derivatives");
  return evaluate_expanded(seed_jets(s, 2), expanded_terms(p));
}

inline SampledFunction w4_expanded(const SeedEvaluation& s, const ChainParameters& p) {
  if (p.k != 4) throw std::invalid_argument("w4_expanded needs k = 4");
  if (s.orders() < 4) throw std::invalid_argument("w4_expanded needs three parametric derivatives");
  return evaluate_expanded(seed_jets(s, 3), expanded_terms(p));
}

// ---------------------------------------------------------------------------
// Reduced forms with closed W', W''. Along a chain,
//   W(u_a, u_b)' = u_{a-1} u_b - u_a u_{b-1},  u_0 = 0.

namespace detail {

inline cplx w2(const JordanChain& ch, std::size_t a, std::size_t b, std::size_t p) {
  return ch.members[a][p] * ch.members_x[b][p] - ch.members_x[a][p] * ch.members[b][p];
}

}  // namespace detail

/// W_k with W_k', W_k'' and the Wronskian of the first k-1 members.
struct ReducedWronskian {
  WronskianValues values;
  SampledFunction W_km1;
};

inline ReducedWronskian w2_reduced(const JordanChain& ch, const SampledFunction& V0) {
  if (ch.k() != 2) throw std::invalid_argument("w2_reduced needs k = 2");
  const Grid& g = ch.grid();
  ReducedWronskian r{{SampledFunction(g), SampledFunction(g), SampledFunction(g)}, ch.members[0]};
  (void)V0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    const cplx u = ch.members[0][p], ux = ch.members_x[0][p];
    r.values.W[p] = detail::w2(ch, 0, 1, p);
    r.values.dW[p] = -u * u;
    r.values.d2W[p] = -2.0 * u * ux;
  }
  return r;
}

/// W3 = u1 W(u1,u3) - u2 W(u1,u2).
inline ReducedWronskian w3_reduced(const JordanChain& ch, const SampledFunction& V0) {
  if (ch.k() != 3) throw std::invalid_argument("w3_reduced needs k = 3");
  const Grid& g = ch.grid();
  require_same_grid(g, V0.grid());
  const cplx eps = ch.params.epsilon;
  ReducedWronskian r{{SampledFunction(g), SampledFunction(g), SampledFunction(g)}, SampledFunction(g)};
  for (std::size_t p = 0; p < g.size(); ++p) {
    const cplx u1 = ch.members[0][p], u2 = ch.members[1][p];
    const cplx u1x = ch.members_x[0][p], u2x = ch.members_x[1][p];
    const cplx W12 = detail::w2(ch, 0, 1, p);
    const cplx W13 = detail::w2(ch, 0, 2, p);
    const cplx q = V0[p] - eps;
    const cplx u1xx = q * u1;
    const cplx u2xx = q * u2 - u1;
    r.values.W[p] = u1 * W13 - u2 * W12;
    r.values.dW[p] = u1x * W13 - u2x * W12;
    r.values.d2W[p] = u1xx * W13 - u1x * u1 * u2 - u2xx * W12 + u2x * u1 * u1;
    r.W_km1[p] = W12;
  }
  return r;
}

/// W4 = W(u1,u2) [W(u1,u4) + W(u2,u3)] - W(u1,u3)^2.
inline ReducedWronskian w4_reduced(const JordanChain& ch, const SampledFunction& V0) {
  if (ch.k() != 4) throw std::invalid_argument("w4_reduced needs k = 4");
  const Grid& g = ch.grid();
  require_same_grid(g, V0.grid());
  ReducedWronskian r{{SampledFunction(g), SampledFunction(g), SampledFunction(g)}, SampledFunction(g)};
  for (std::size_t p = 0; p < g.size(); ++p) {
    const cplx u1 = ch.members[0][p], u2 = ch.members[1][p];
    const cplx u1x = ch.members_x[0][p], u2x = ch.members_x[1][p];
    const cplx W12 = detail::w2(ch, 0, 1, p);
    const cplx W13 = detail::w2(ch, 0, 2, p);
    const cplx S = detail::w2(ch, 0, 3, p) + detail::w2(ch, 1, 2, p);
    r.values.W[p] = W12 * S - W13 * W13;
    r.values.dW[p] = -u1 * u1 * S - u2 * u2 * W12 + 2.0 * u1 * u2 * W13;
    r.values.d2W[p] = -2.0 * u1 * u1x * S - 2.0 * u2 * u2x * W12 + 2.0 * (u1x * u2 + u1 * u2x) * W13;
    r.W_km1[p] = u1 * W13 - u2 * W12;
  }
  return r;
}

// Coefficient-level reduced forms in terms of seed Wronskians.

namespace detail {

inline cplx seed_w(const SeedEvaluation& s, SeedFunction a, SeedFunction b, std::size_t p) {
  const auto& fa = a.from_v ? s.v_derivs : s.u_derivs;
  const auto& fax = a.from_v ? s.vx_derivs : s.ux_derivs;
  const auto& fb = b.from_v ? s.v_derivs : s.u_derivs;
  const auto& fbx = b.from_v ? s.vx_derivs : s.ux_derivs;
  const auto ia = static_cast<std::size_t>(a.order), ib = static_cast<std::size_t>(b.order);
  return fa.at(ia)[p] * fbx.at(ib)[p] - fax.at(ia)[p] * fb.at(ib)[p];
}

}  // namespace detail

/// W3 = [D2 - C1 D1 + D1 W(u,dv) + W(u,d2u)/2] u - D1^2 v - D1 du
///      - (D1 v + du) W(u,du).
inline SampledFunction w3_coefficient_form(const SeedEvaluation& s, const ChainParameters& p) {
  if (p.k != 3) throw std::invalid_argument("w3_coefficient_form needs k = 3");
  if (s.orders() < 3) throw std::invalid_argument("w3_coefficient_form needs two parametric derivatives");
  const double C1 = p.c(1), D1 = p.d(1), D2 = p.d(2);
  const SeedFunction u{false, 0}, eu{false, 1}, ev{true, 1}, e2u{false, 2};
  SampledFunction out(s.grid);
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    const cplx U = s.u_derivs[0][i], V = s.v_derivs[0][i], dU = s.u_derivs[1][i];
    const cplx bracket = D2 - C1 * D1 + D1 * detail::seed_w(s, u, ev, i) + 0.5 * detail::seed_w(s, u, e2u, i);
    out[i] = bracket * U - D1 * D1 * V - D1 * dU - (D1 * V + dU) * detail::seed_w(s, u, eu, i);
  }
  return out;
}

/// The three two-function blocks of the k = 4 reduction, written in seed
/// Wronskians: W(u1,u2), W(u1,u4) + W(u2,u3), W(u1,u3).
struct W4Blocks {
  SampledFunction W12, S, W13;
};

inline W4Blocks w4_blocks(const SeedEvaluation& s, const ChainParameters& p) {
  if (p.k != 4) throw std::invalid_argument("w4_blocks needs k = 4");
  if (s.orders() < 4) throw std::invalid_argument("w4_blocks needs three parametric derivatives");
  const double C1 = p.c(1), C2 = p.c(2), D1 = p.d(1), D2 = p.d(2), D3 = p.d(3);
  const SeedFunction u{false, 0}, v{true, 0}, eu{false, 1}, ev{true, 1}, e2u{false, 2},
      e3u{false, 3};
  W4Blocks b{SampledFunction(s.grid), SampledFunction(s.grid), SampledFunction(s.grid)};
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    auto w = [&](SeedFunction a, SeedFunction c) { return detail::seed_w(s, a, c, i); };
    const cplx w_u_eu = w(u, eu);
    b.W12[i] = D1 + w_u_eu;
    b.S[i] = C1 * D2 - C2 * D1 + D3 + C1 * C1 * w_u_eu + 2.0 * C1 * D1 * w(u, ev) + C1 * w(u, e2u) +
             D1 * w(v, e2u) + w(u, e3u) / 6.0 + D1 * D1 * w(v, ev) + 0.5 * w(eu, e2u);
    b.W13[i] = D2 + C1 * w_u_eu + D1 * w(u, ev) + 0.5 * w(u, e2u);
  }
  return b;
}

inline SampledFunction w4_block_form(const SeedEvaluation& s, const ChainParameters& p) {
  const auto b = w4_blocks(s, p);
  SampledFunction out(s.grid);
  for (std::size_t i = 0; i < s.grid.size(); ++i) out[i] = b.W12[i] * b.S[i] - b.W13[i] * b.W13[i];
  return out;
}

// ---------------------------------------------------------------------------
// Bundles.

enum class WronskianMethod { Determinant, Expanded, Reduced };

inline const char* to_string(WronskianMethod m) {
  switch (m) {
    case WronskianMethod::Determinant: return "determinant";
    case WronskianMethod::Expanded: return "expanded";
    case WronskianMethod::Reduced: return "reduced";
  }
  return "?";
}

struct WronskianBundle {
  SampledFunction W_k, dW_k, d2W_k;  // W(u_1..u_k) and its x-derivatives
  SampledFunction W_km1;             // W(u_1..u_{k-1})
  WronskianMethod method = WronskianMethod::Determinant;
  double crosscheck = 0.0;           // max pairwise deviation between methods run
  std::vector<WronskianMethod> methods_run;
};

/// Largest pairwise local relative deviation among the given evaluations.
inline double method_spread(const std::vector<SampledFunction>& ws) {
  double worst = 0.0;
  for (std::size_t a = 0; a < ws.size(); ++a)
    for (std::size_t b = a + 1; b < ws.size(); ++b)
      worst = std::max(worst, local_relative_deviation(ws[a], ws[b]));
  return worst;
}

/// W_k of a chain with W', W''. The reduced form is used for k <= 4 and the
/// determinant otherwise; with crosscheck set, every available method runs
/// and their spread is recorded.
inline WronskianBundle compute_wronskians(const SeedEvaluation& seed, const JordanChain& ch,
                                          bool crosscheck = true) {
  const int k = ch.k();
  const auto& V0 = seed.V0();
  WronskianBundle b{SampledFunction(ch.grid()), SampledFunction(ch.grid()), SampledFunction(ch.grid()),
                    SampledFunction(ch.grid()), WronskianMethod::Determinant, 0.0, {}};
  std::vector<SampledFunction> evaluations;

  auto use_reduced = [&](ReducedWronskian r) {
    b.W_k = r.values.W;
    b.dW_k = r.values.dW;
    b.d2W_k = r.values.d2W;
    b.W_km1 = r.W_km1;
    b.method = WronskianMethod::Reduced;
  };
  if (k == 2) use_reduced(w2_reduced(ch, V0));
  else if (k == 3) use_reduced(w3_reduced(ch, V0));
  else if (k == 4) use_reduced(w4_reduced(ch, V0));

  if (k <= 4) {
    b.methods_run.push_back(WronskianMethod::Reduced);
    evaluations.push_back(b.W_k);
  }
  if (k > 4 || crosscheck) {
    const auto jets = chain_jets(ch, seed.potential, k + 1);
    const auto w = wronskian_with_derivatives(std::span<const FunctionJet>(jets));
    if (k > 4) {
      b.W_k = w.W;
      b.dW_k = w.dW;
      b.d2W_k = w.d2W;
      b.W_km1 = wronskian_det(std::span<const FunctionJet>(jets.data(), jets.size() - 1));
      b.method = WronskianMethod::Determinant;
    }
    b.methods_run.push_back(WronskianMethod::Determinant);
    evaluations.push_back(w.W);
  }
  if (crosscheck && (k == 3 || k == 4)) {
    evaluations.push_back(evaluate_expanded(seed_jets(seed, k - 1), expanded_terms(ch.params)));
    b.methods_run.push_back(WronskianMethod::Expanded);
  }
  b.crosscheck = method_spread(evaluations);
  return b;
}

// ---------------------------------------------------------------------------
// Identity suite.

/// W(u,v) = 1; W(f, h f) = h' f^2 with f = u, h = x^2 + 1; the k = 3 and
/// k = 4 reductions on a sample chain; and the two eps-derivatives of
/// W(u,v) = 1: W(u, dv) = W(v, du) and W(du, dv) = [W(v, d2u) - W(u, d2v)] / 2.
inline std::vector<IdentityCheck> identity_suite(const SeedEvaluation& s) {
  if (s.orders() < 3) throw std::invalid_argument("identity suite needs seeds with two parametric derivatives");
  const Grid& g = s.grid;
  std::vector<IdentityCheck> out;

  {
    const auto w = wronskian2(s.u_derivs[0], s.ux_derivs[0], s.v_derivs[0], s.vx_derivs[0]);
    SampledFunction one(g, std::vector<cplx>(g.size(), 1.0));
    out.push_back({"W(u,v)=1", local_relative_deviation(w, one)});
  }
  {
    // f = u, h = x^2 + 1: W(f, h f) = h' f^2, with h f' + h' f as derivative
    const auto& f = s.u_derivs[0];
    const auto& fx = s.ux_derivs[0];
    SampledFunction hf(g), hfx(g), rhs(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = g.x(i);
      const double h = x * x + 1.0, hx = 2.0 * x;
      hf[i] = h * f[i];
      hfx[i] = hx * f[i] + h * fx[i];
      rhs[i] = hx * f[i] * f[i];
    }
    out.push_back({"W(f,hf)=h'f^2", local_relative_deviation(wronskian2(f, fx, hf, hfx), rhs)});
  }
  {
    // chains with fixed non-trivial constants
    ChainParameters p3{s.epsilon, 3, {0.3, -0.2}, {0.25, -0.4}};
    const auto ch3 = build_chain(s, p3);
    const auto jets3 = chain_jets(ch3, s.potential, 2);
    out.push_back({"W3=u1*W13-u2*W12", local_relative_deviation(wronskian_det(std::span<const FunctionJet>(jets3)),
                                                    w3_reduced(ch3, s.V0()).values.W)});
    if (s.orders() >= 4) {
      ChainParameters p4{s.epsilon, 4, {0.3, -0.2, 0.7}, {0.25, -0.4, 0.15}};
      const auto ch4 = build_chain(s, p4);
      const auto jets4 = chain_jets(ch4, s.potential, 3);
      out.push_back({"W4=W12*(W14+W23)-W13^2", local_relative_deviation(wronskian_det(std::span<const FunctionJet>(jets4)),
                                                      w4_reduced(ch4, s.V0()).values.W)});
    }
  }
  {
    const SeedFunction u{false, 0}, v{true, 0}, eu{false, 1}, ev{true, 1}, e2u{false, 2}, e2v{true, 2};
    SampledFunction a(g), b(g), c(g), d(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      a[i] = detail::seed_w(s, u, ev, i);
      b[i] = detail::seed_w(s, v, eu, i);
      c[i] = detail::seed_w(s, eu, ev, i);
      d[i] = 0.5 * (detail::seed_w(s, v, e2u, i) - detail::seed_w(s, u, e2v, i));
    }
    out.push_back({"W(u,dv)=W(v,du)", local_relative_deviation(a, b)});
    out.push_back({"W(du,dv)=[W(v,d2u)-W(u,d2v)]/2", local_relative_deviation(c, d)});
  }
  return out;
}

}  // namespace susy
