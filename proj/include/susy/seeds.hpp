#pragma once

// Seed solutions u, v of (H - eps) f = 0 with W(u, v) = 1, together with
// their parametric derivatives d^j/d eps^j and the x-derivatives of those.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "susy/core.hpp"
#include "susy/elliptic.hpp"
#include "susy/jet.hpp"
#include "susy/stencil.hpp"

namespace susy {

enum class SeedFamily { FreeParticle, Lame, NumericPotential };

inline const char* to_string(SeedFamily f) {
  switch (f) {
    case SeedFamily::FreeParticle: return "free";
    case SeedFamily::Lame: return "lame";
    case SeedFamily::NumericPotential: return "numeric";
  }
  return "?";
}

class SeedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SeedRequest {
  SeedFamily family = SeedFamily::FreeParticle;
  cplx epsilon{-1.0};
  double m = 0.5;   // Lame modulus
  int k = 2;        // chain length; derivatives 0..k-1 are produced
  Grid grid{-15.0, 15.0, 4001};
  std::optional<SampledFunction> potential_samples;  // NumericPotential only
  double band_margin = 1e-3;
};

struct SeedEvaluation {
  SeedFamily family = SeedFamily::FreeParticle;
  Grid grid{-1.0, 1.0, Grid::min_points};
  cplx epsilon{};
  // index j holds d^j/d eps^j of the seed and of its x-derivative
  std::vector<SampledFunction> u_derivs, v_derivs, ux_derivs, vx_derivs;
  // V0 and its x-derivatives V0', V0'', ...
  std::vector<SampledFunction> potential;
  std::optional<LatticeData> lattice;
  std::optional<cplx> delta;

  int orders() const noexcept { return static_cast<int>(u_derivs.size()); }
  const SampledFunction& V0() const { return potential.at(0); }
};

/// u v' - u' v from values and x-derivatives.
inline SampledFunction wronskian2(const SampledFunction& f, const SampledFunction& fx,
                                  const SampledFunction& g, const SampledFunction& gx) {
  require_same_grid(f.grid(), g.grid());
  SampledFunction w(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) w[i] = f[i] * gx[i] - fx[i] * g[i];
  return w;
}

/// max |W(u, v) - 1| over the grid.
inline double seed_wronskian_error(const SeedEvaluation& s) {
  const auto w = wronskian2(s.u_derivs[0], s.ux_derivs[0], s.v_derivs[0], s.vx_derivs[0]);
  double e = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) e = std::max(e, std::abs(w[i] - 1.0));
  return e;
}

// ---------------------------------------------------------------------------
// Free particle: u = e^{kx}, v = -e^{-kx}/(2k), eps = -k^2.

namespace detail {

/// sum c x^a kappa^p times exp(sign kappa x); exact rational coefficients.
struct ExpPolynomial {
  int sign = 1;
  std::map<std::pair<int, int>, double> terms;

  void add(int a, int p, double c) {
    if (c == 0.0) return;
    auto& slot = terms[{a, p}];
    slot += c;
    if (slot == 0.0) terms.erase({a, p});
  }

  /// d/d eps = -(1/(2 kappa)) d/d kappa
  ExpPolynomial d_epsilon() const {
    ExpPolynomial r{sign, {}};
    for (const auto& [key, c] : terms) {
      const auto [a, p] = key;
      r.add(a, p - 2, -0.5 * p * c);
      r.add(a + 1, p - 1, -0.5 * sign * c);
    }
    return r;
  }

  ExpPolynomial d_x() const {
    ExpPolynomial r{sign, {}};
    for (const auto& [key, c] : terms) {
      const auto [a, p] = key;
      if (a > 0) r.add(a - 1, p, a * c);
      r.add(a, p + 1, sign * c);
    }
    return r;
  }

  double operator()(double x, double kappa) const {
    double s = 0.0;
    for (const auto& [key, c] : terms) s += c * std::pow(x, key.first) * std::pow(kappa, key.second);
    return s * std::exp(sign * kappa * x);
  }
};

}  // namespace detail

inline SeedEvaluation free_seed(const SeedRequest& req) {
  if (req.k < 1) throw std::invalid_argument("seed order k must be at least 1");
  if (req.epsilon.imag() != 0.0 || !(req.epsilon.real() < 0.0))
    throw std::domain_error("free-particle seed needs a real, negative factorization energy");
  const double kappa = std::sqrt(-req.epsilon.real());

  SeedEvaluation s;
  s.family = SeedFamily::FreeParticle;
  s.grid = req.grid;
  s.epsilon = req.epsilon;

  detail::ExpPolynomial u{+1, {}};
  u.add(0, 0, 1.0);
  detail::ExpPolynomial v{-1, {}};
  v.add(0, -1, -0.5);

  for (int j = 0; j < req.k; ++j) {
    const auto ux = u.d_x();
    const auto vx = v.d_x();
    s.u_derivs.push_back(SampledFunction::generate(req.grid, [&](double x) { return u(x, kappa); }));
    s.v_derivs.push_back(SampledFunction::generate(req.grid, [&](double x) { return v(x, kappa); }));
    s.ux_derivs.push_back(SampledFunction::generate(req.grid, [&](double x) { return ux(x, kappa); }));
    s.vx_derivs.push_back(SampledFunction::generate(req.grid, [&](double x) { return vx(x, kappa); }));
    u = u.d_epsilon();
    v = v.d_epsilon();
  }
  for (int i = 0; i <= std::max(req.k + 1, 2); ++i) s.potential.emplace_back(req.grid);
  return s;
}

// ---------------------------------------------------------------------------
// Single-gap Lame potential V0 = 2 m sn^2(x|m) = 2 p(x + omega') + 2(m+1)/3.

enum class LameRegion { LowerGap, ValenceBand, BandGap, ConductionBand };

/// Real segment of the fundamental rectangle on which p(delta) hits a given
/// real value, with p monotone along it.
struct DeltaSegment {
  cplx origin;     // delta(0)
  cplx direction;  // d delta / d param
  double length;
};

inline LameRegion lame_region_of_target(double target, const LatticeData& lat) {
  if (target > lat.e1) return LameRegion::LowerGap;
  if (target > lat.e2) return LameRegion::ValenceBand;
  if (target > lat.e3) return LameRegion::BandGap;
  return LameRegion::ConductionBand;
}

inline DeltaSegment delta_segment(LameRegion r, const LatticeData& lat) {
  const double Kp = lat.omega_prime.imag();
  switch (r) {
    case LameRegion::LowerGap: return {cplx(0.0), cplx(1.0), lat.omega};
    case LameRegion::ValenceBand: return {cplx(lat.omega), cplx(0.0, 1.0), Kp};
    case LameRegion::BandGap: return {lat.omega_prime, cplx(1.0), lat.omega};
    case LameRegion::ConductionBand: return {cplx(0.0), cplx(0.0, 1.0), Kp};
  }
  return {};
}

inline cplx epsilon_from_delta(cplx delta, const LatticeData& lat) {
  return 2.0 / 3.0 * (lat.m + 1.0) - weierstrass_p(delta, lat);
}

/// delta with p(delta) = 2(m+1)/3 - E for any real E, on the segment of the
/// fundamental rectangle where p is real: (0, omega] below the valence band,
/// omega + i(0, K'] inside it, omega' + (0, omega] in the band gap and
/// i(0, K'] in the conduction band.
inline cplx delta_for_energy(double energy, const LatticeData& lat) {
  const double target = 2.0 / 3.0 * (lat.m + 1.0) - energy;
  const auto region = lame_region_of_target(target, lat);
  const auto seg = delta_segment(region, lat);
  auto f = [&](double p) { return weierstrass_p(seg.origin + p * seg.direction, lat).real() - target; };
  auto df = [&](double p) {
    return (weierstrass_p_prime(seg.origin + p * seg.direction, lat) * seg.direction).real();
  };

  // p runs monotonically along the segment; bracket the root and bisect
  // with Newton steps where they stay inside the bracket.
  double lo = 0.0;
  double hi = seg.length;
  double flo, fhi;
  const double tiny = 1e-6 * seg.length;
  if (region == LameRegion::LowerGap || region == LameRegion::ConductionBand) {
    lo = tiny;  // p has its pole at 0
    flo = f(lo);
  } else {
    flo = f(lo);
  }
  fhi = f(hi);
  // Targets at a band edge sit on a segment end; accept round-off there.
  const double end_tol = 1e-13 * std::max(1.0, std::abs(target));
  if (std::abs(flo) <= end_tol) return seg.origin + lo * seg.direction;
  if (std::abs(fhi) <= end_tol) return seg.origin + hi * seg.direction;
  if ((flo > 0.0) == (fhi > 0.0)) {
    // Target beyond the representable end of the segment (energies far
    // below the band); shrink towards the pole.
    double p = lo;
    for (int it = 0; it < 12 && (flo > 0.0) == (fhi > 0.0); ++it) {
      p *= 0.5;
      flo = f(p);
      lo = p;
    }
    if ((flo > 0.0) == (fhi > 0.0)) throw SeedError("delta search failed to bracket the root");
  }
  double p = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double fp = f(p);
    if (fp == 0.0) break;
    if ((fp > 0.0) == (flo > 0.0)) {
      lo = p;
      flo = fp;
    } else {
      hi = p;
    }
    const double d = df(p);
    double next = (d != 0.0) ? p - fp / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - p) < 1e-16 * std::max(1.0, std::abs(p))) {
      p = next;
      break;
    }
    p = next;
  }
  cplx delta = seg.origin + p * seg.direction;
  // Complex Newton polish.
  for (int it = 0; it < 3; ++it) {
    const cplx r = weierstrass_p(delta, lat) - target;
    const cplx d = weierstrass_p_prime(delta, lat);
    if (d == cplx{} || std::abs(r) == 0.0) break;
    const cplx next = delta - r / d;
    if (std::abs(weierstrass_p(next, lat) - target) < std::abs(r)) delta = next; else break;
  }
  return delta;
}

/// delta for a factorization energy in one of the two forbidden bands,
/// at least band_margin away from every band edge.
inline cplx lame_delta_from_epsilon(cplx epsilon, const LatticeData& lat, double band_margin = 1e-3) {
  if (std::abs(epsilon.imag()) > 1e-14)
    throw std::domain_error("Lame seed needs a real factorization energy");
  const double e = epsilon.real();
  const double m = lat.m;
  const bool lower_gap = e < m - band_margin;
  const bool band_gap = e > 1.0 + band_margin && e < 1.0 + m - band_margin;
  if (!lower_gap && !band_gap) {
    if ((e >= m && e <= 1.0) || e >= 1.0 + m)
      throw std::domain_error("factorization energy lies inside an allowed band");
    throw std::domain_error("factorization energy is too close to a band edge");
  }
  const cplx delta = delta_for_energy(e, lat);
  const double target = 2.0 / 3.0 * (m + 1.0) - e;
  const double resid = std::abs(weierstrass_p(delta, lat) - target);
  if (resid > 1e-12 * std::max(1.0, std::abs(target)))
    throw SeedError("delta Newton iteration did not converge (residual " + std::to_string(resid) + ")");
  return delta;
}

/// kappa = 2i [omega zeta(delta) - delta zeta(omega)], so that the Bloch
/// multiplier over one period 2 omega is exp(i kappa).
inline cplx quasimomentum(cplx delta, const LatticeData& lat) {
  return cplx(0.0, 2.0) * (lat.omega * weierstrass_zeta(delta, lat) - delta * lat.eta);
}

/// Bloch multiplier u(x + 2 omega) / u(x) of the seed u.
inline cplx bloch_multiplier(cplx delta, const LatticeData& lat) {
  return std::exp(2.0 * delta * lat.eta - 2.0 * lat.omega * weierstrass_zeta(delta, lat));
}

inline SampledFunction lame_potential(const Grid& grid, const LatticeData& lat, int derivative = 0) {
  return SampledFunction::generate(grid, [&](double x) {
    const auto d = weierstrass_p_derivatives(cplx(x) + lat.omega_prime, lat, std::max(derivative, 1));
    cplx val = 2.0 * d[static_cast<std::size_t>(derivative)];
    if (derivative == 0) val += 2.0 * (lat.m + 1.0) / 3.0;
    return cplx(val.real(), 0.0);
  });
}

/// Bloch seeds
///   u = sigma(x+w'+d) sigma(w') / (sigma(x+w') sigma(w'+d)) e^{-x zeta(d)},
///   v = (e3 - p(d)) / p'(d) * u(x, -d),
/// normalised so u(0) = 1 and W(u, v) = 1; both real for real eps in a gap.
/// d is minus the representative returned by lame_delta_from_epsilon, so u
/// grows to the right like the free-particle e^{kappa x}; the sign
/// conventions for C and D then carry over between families.
/// Parametric derivatives to any order come from Taylor series in delta,
/// composed with the inverse series of eps(delta) = 2(m+1)/3 - p(delta).
inline SeedEvaluation lame_bloch_seed(const SeedRequest& req) {
  if (req.k < 1) throw std::invalid_argument("seed order k must be at least 1");
  const LatticeData lat = make_lattice(req.m);
  const cplx d0 = -lame_delta_from_epsilon(req.epsilon, lat, req.band_margin);
  const int N = req.k - 1;
  const cplx wp = lat.omega_prime;

  // Series in s = delta - d0.
  const auto p_d = weierstrass_p_derivatives(d0, lat, N + 2);
  Jet P(N + 1);
  {
    double fact = 1.0;
    for (int n = 0; n <= N + 1; ++n) {
      if (n > 0) fact *= n;
      P[n] = p_d[static_cast<std::size_t>(n)] / fact;
    }
  }
  // eps = eps0 + t  <=>  p(d0 + s) = p(d0) - t
  Jet rhs = Jet::constant(N, p_d[0]);
  if (N >= 1) rhs[1] = -1.0;
  const Jet s_of_t = (N >= 1) ? invert_series(P, rhs) : Jet(0);

  auto log_sigma_series = [&](cplx z0) {
    // derivatives of log sigma: zeta, -p, -p', ...
    Jet L(N);
    L[0] = weierstrass_log_sigma(z0, lat);
    if (N >= 1) {
      L[1] = weierstrass_zeta(z0, lat);
      const auto pd = weierstrass_p_derivatives(z0, lat, std::max(N - 2, 1));
      double fact = 1.0;
      for (int n = 2; n <= N; ++n) {
        fact *= n;
        L[n] = -pd[static_cast<std::size_t>(n - 2)] / fact;
      }
    }
    return L;
  };
  const Jet Lplus = log_sigma_series(wp + d0);
  const Jet Lminus = log_sigma_series(wp - d0).reflected();
  Jet Z(N);
  Z[0] = weierstrass_zeta(d0, lat);
  {
    double fact = 1.0;
    for (int n = 1; n <= N; ++n) {
      fact *= n;
      Z[n] = -p_d[static_cast<std::size_t>(n - 1)] / fact;
    }
  }
  Jet Pd(N);  // p'(d0 + s)
  {
    double fact = 1.0;
    for (int n = 0; n <= N; ++n) {
      if (n > 0) fact *= n;
      Pd[n] = p_d[static_cast<std::size_t>(n + 1)] / fact;
    }
  }
  const Jet c_of_s = (Jet::constant(N, lat.e3) - P.truncated(N)) / Pd;
  const cplx log_sigma_wp = weierstrass_log_sigma(wp, lat);

  SeedEvaluation s;
  s.family = SeedFamily::Lame;
  s.grid = req.grid;
  s.epsilon = req.epsilon;
  s.lattice = lat;
  s.delta = d0;
  const std::size_t n = req.grid.size();
  for (int j = 0; j <= N; ++j) {
    s.u_derivs.emplace_back(req.grid);
    s.v_derivs.emplace_back(req.grid);
    s.ux_derivs.emplace_back(req.grid);
    s.vx_derivs.emplace_back(req.grid);
  }

  auto to_eps = [&](const Jet& in_s) { return N >= 1 ? compose(in_s, s_of_t) : in_s; };

  for (std::size_t i = 0; i < n; ++i) {
    const double x = req.grid.x(i);
    const cplx zx = cplx(x) + wp;
    const cplx logA = weierstrass_log_sigma(zx, lat);
    const cplx zetaA = weierstrass_zeta(zx, lat);

    // u
    const auto sp = sigma_jet(zx + d0, N + 1, lat);
    const Jet sig_p = sp.jet.truncated(N);
    const Jet dsig_p = sp.jet.differentiated();
    Jet Phi = Jet::constant(N, -logA + log_sigma_wp) - Lplus - Z * cplx(x);
    const cplx phi0 = Phi[0];
    Phi[0] = 0.0;
    const Jet E = exp(Phi);
    const cplx su = std::exp(sp.log_scale + phi0);
    const Jet u_s = sig_p * E * su;
    const Jet ux_s = (dsig_p * E + sig_p * E * (Jet::constant(N, -zetaA) - Z)) * su;

    // u(x, -delta)
    const auto sm = sigma_jet(zx - d0, N + 1, lat);
    const Jet sig_m = sm.jet.truncated(N).reflected();
    const Jet dsig_m = sm.jet.differentiated().reflected();
    Jet Psi = Jet::constant(N, -logA + log_sigma_wp) - Lminus + Z * cplx(x);
    const cplx psi0 = Psi[0];
    Psi[0] = 0.0;
    const Jet F = exp(Psi);
    const cplx sv = std::exp(sm.log_scale + psi0);
    const Jet ut_s = sig_m * F * sv;
    const Jet utx_s = (dsig_m * F + sig_m * F * (Jet::constant(N, -zetaA) + Z)) * sv;

    const Jet u_t = to_eps(u_s);
    const Jet ux_t = to_eps(ux_s);
    const Jet v_t = to_eps(c_of_s * ut_s);
    const Jet vx_t = to_eps(c_of_s * utx_s);
    for (int j = 0; j <= N; ++j) {
      const auto J = static_cast<std::size_t>(j);
      s.u_derivs[J][i] = u_t.derivative(j);
      s.ux_derivs[J][i] = ux_t.derivative(j);
      s.v_derivs[J][i] = v_t.derivative(j);
      s.vx_derivs[J][i] = vx_t.derivative(j);
    }
  }
  for (int d = 0; d <= std::max(req.k + 1, 2); ++d) s.potential.push_back(lame_potential(req.grid, lat, d));

  const double werr = seed_wronskian_error(s);
  if (!(werr <= 1e-8))
    throw SeedError("Bloch seed Wronskian deviates from 1 by " + std::to_string(werr));
  return s;
}

// ---------------------------------------------------------------------------
// Arbitrary sampled potential: RK4 integration of the parametric-derivative
// chain f_j'' = (V0 - eps) f_j - j f_{j-1}.

namespace detail {

/// V0 at the midpoints x_i + h/2 by 6-point Lagrange interpolation.
inline std::vector<cplx> midpoint_values(const SampledFunction& V) {
  const std::size_t n = V.size();
  std::vector<cplx> mid(n - 1);
  // weights for nodes at offsets -2..3 evaluated at +1/2
  constexpr double w[6] = {3.0 / 256.0, -25.0 / 256.0, 150.0 / 256.0,
                           150.0 / 256.0, -25.0 / 256.0, 3.0 / 256.0};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (i >= 2 && i + 3 < n) {
      cplx s{};
      for (int j = 0; j < 6; ++j) s += w[j] * V[i - 2 + static_cast<std::size_t>(j)];
      mid[i] = s;
    } else {
      // one-sided 6-node interpolation near the ends
      const std::size_t start = (i < 2) ? 0 : n - 6;
      std::vector<double> nodes;
      for (std::size_t j = 0; j < 6; ++j) nodes.push_back(static_cast<double>(start + j));
      auto wts = fornberg_weights(static_cast<double>(i) + 0.5, nodes, 0);
      cplx s{};
      for (std::size_t j = 0; j < 6; ++j) s += wts[j][0] * V[start + j];
      mid[i] = s;
    }
  }
  return mid;
}

struct ChainTrajectory {
  // values[j][i], slopes[j][i]
  std::vector<std::vector<cplx>> values, slopes;
};

/// Integrates the chain over the grid, forward (from index 0) or backward.
inline ChainTrajectory integrate_chain(const SampledFunction& V, const std::vector<cplx>& Vmid,
                                       cplx eps, const std::vector<cplx>& f0,
                                       const std::vector<cplx>& df0, bool forward) {
  const std::size_t n = V.size();
  const std::size_t m = f0.size();
  const double h = (forward ? 1.0 : -1.0) * V.grid().spacing();
  ChainTrajectory tr;
  tr.values.assign(m, std::vector<cplx>(n));
  tr.slopes.assign(m, std::vector<cplx>(n));
  std::vector<cplx> y(2 * m);
  for (std::size_t j = 0; j < m; ++j) {
    y[2 * j] = f0[j];
    y[2 * j + 1] = df0[j];
  }
  auto rhs = [&](const std::vector<cplx>& s, cplx pot, std::vector<cplx>& out) {
    for (std::size_t j = 0; j < m; ++j) {
      out[2 * j] = s[2 * j + 1];
      out[2 * j + 1] = (pot - eps) * s[2 * j] - (j > 0 ? static_cast<double>(j) * s[2 * (j - 1)] : cplx{});
    }
  };
  std::vector<cplx> k1(2 * m), k2(2 * m), k3(2 * m), k4(2 * m), tmp(2 * m);
  auto store = [&](std::size_t idx) {
    for (std::size_t j = 0; j < m; ++j) {
      tr.values[j][idx] = y[2 * j];
      tr.slopes[j][idx] = y[2 * j + 1];
    }
  };
  std::size_t idx = forward ? 0 : n - 1;
  store(idx);
  for (std::size_t step = 0; step + 1 < n; ++step) {
    const std::size_t next = forward ? idx + 1 : idx - 1;
    const cplx Va = V[idx];
    const cplx Vm = Vmid[std::min(idx, next)];
    const cplx Vb = V[next];
    rhs(y, Va, k1);
    for (std::size_t q = 0; q < y.size(); ++q) tmp[q] = y[q] + 0.5 * h * k1[q];
    rhs(tmp, Vm, k2);
    for (std::size_t q = 0; q < y.size(); ++q) tmp[q] = y[q] + 0.5 * h * k2[q];
    rhs(tmp, Vm, k3);
    for (std::size_t q = 0; q < y.size(); ++q) tmp[q] = y[q] + h * k3[q];
    rhs(tmp, Vb, k4);
    for (std::size_t q = 0; q < y.size(); ++q)
      y[q] += h / 6.0 * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]);
    idx = next;
    store(idx);
  }
  return tr;
}

inline bool trajectory_finite(const ChainTrajectory& tr) {
  for (const auto& row : tr.values)
    for (const auto& z : row)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > 1e290) return false;
  return true;
}

}  // namespace detail

/// Seeds for a sampled potential. u is integrated left to right from WKB
/// data u = exp(k (x_min - x_ref)), u' = k u with k = sqrt(V0(x_min) - eps);
/// v right to left from data fixing W(u, v) = 1 at x_max with v' = -k v.
/// For V0 = 0 and x_ref = 0 this reproduces the free-particle pair exactly.
inline SeedEvaluation numeric_seed(const SeedRequest& req) {
  if (req.k < 1) throw std::invalid_argument("seed order k must be at least 1");
  if (!req.potential_samples) throw std::invalid_argument("numeric seed requires potential samples");
  const SampledFunction& V = *req.potential_samples;
  require_same_grid(V.grid(), req.grid);
  V.require_finite("numeric_seed");
  const int N = req.k - 1;
  const cplx eps = req.epsilon;
  const std::size_t n = V.size();

  const cplx gap_left = V[0] - eps;
  const cplx gap_right = V[n - 1] - eps;
  if (!(gap_left.real() > 0.0) || !(gap_right.real() > 0.0))
    throw std::domain_error("factorization energy must lie below the potential at both window edges");

  const auto Vmid = detail::midpoint_values(V);
  const double xa = req.grid.x_min();
  const double xb = req.grid.x_max();

  auto attempt = [&](double x_ref) {
    // u data at x_min as series in t = eps - eps0
    Jet kl = Jet::constant(N, gap_left);
    if (N >= 1) kl[1] = -1.0;
    kl = sqrt(kl);
    const Jet ul = exp(kl * cplx(xa - x_ref));
    const Jet dul = kl * ul;
    std::vector<cplx> f0(static_cast<std::size_t>(N + 1)), df0(static_cast<std::size_t>(N + 1));
    for (int j = 0; j <= N; ++j) {
      f0[static_cast<std::size_t>(j)] = ul.derivative(j);
      df0[static_cast<std::size_t>(j)] = dul.derivative(j);
    }
    auto fw = detail::integrate_chain(V, Vmid, eps, f0, df0, true);
    if (!detail::trajectory_finite(fw)) return std::optional<std::pair<detail::ChainTrajectory, detail::ChainTrajectory>>{};

    // v data at x_max: a = -1/(k u + u'), v' = -k a
    std::vector<cplx> U(static_cast<std::size_t>(N + 1)), dU(static_cast<std::size_t>(N + 1));
    for (int j = 0; j <= N; ++j) {
      U[static_cast<std::size_t>(j)] = fw.values[static_cast<std::size_t>(j)][n - 1];
      dU[static_cast<std::size_t>(j)] = fw.slopes[static_cast<std::size_t>(j)][n - 1];
    }
    const Jet Uj = Jet::from_derivatives(U, N);
    const Jet dUj = Jet::from_derivatives(dU, N);
    Jet kr = Jet::constant(N, gap_right);
    if (N >= 1) kr[1] = -1.0;
    kr = sqrt(kr);
    const Jet a = Jet::constant(N, -1.0) / (kr * Uj + dUj);
    const Jet b = -(kr * a);
    std::vector<cplx> g0(static_cast<std::size_t>(N + 1)), dg0(static_cast<std::size_t>(N + 1));
    for (int j = 0; j <= N; ++j) {
      g0[static_cast<std::size_t>(j)] = a.derivative(j);
      dg0[static_cast<std::size_t>(j)] = b.derivative(j);
    }
    auto bw = detail::integrate_chain(V, Vmid, eps, g0, dg0, false);
    if (!detail::trajectory_finite(bw)) return std::optional<std::pair<detail::ChainTrajectory, detail::ChainTrajectory>>{};
    return std::optional(std::make_pair(std::move(fw), std::move(bw)));
  };

  auto result = attempt(0.0);
  if (!result) result = attempt(0.5 * (xa + xb));
  if (!result) throw SeedError("numeric seed overflowed after rescaling");

  SeedEvaluation s;
  s.family = SeedFamily::NumericPotential;
  s.grid = req.grid;
  s.epsilon = eps;
  for (int j = 0; j <= N; ++j) {
    const auto J = static_cast<std::size_t>(j);
    s.u_derivs.emplace_back(req.grid, result->first.values[J]);
    s.ux_derivs.emplace_back(req.grid, result->first.slopes[J]);
    s.v_derivs.emplace_back(req.grid, result->second.values[J]);
    s.vx_derivs.emplace_back(req.grid, result->second.slopes[J]);
  }
  s.potential.push_back(V);
  // higher x-derivatives of the sampled potential by stencils
  for (int d = 1; d <= std::max(req.k + 1, 2); ++d) {
    if (d == 1) s.potential.push_back(differentiate(V, 1));
    else s.potential.push_back(differentiate(s.potential[static_cast<std::size_t>(d - 2)], 2));
  }

  const double werr = seed_wronskian_error(s);
  if (!(werr <= 1e-8))
    throw SeedError("numeric seed Wronskian deviates from 1 by " + std::to_string(werr));
  return s;
}

inline SeedEvaluation make_seed(const SeedRequest& req) {
  switch (req.family) {
    case SeedFamily::FreeParticle: return free_seed(req);
    case SeedFamily::Lame: return lame_bloch_seed(req);
    case SeedFamily::NumericPotential: return numeric_seed(req);
  }
  throw std::invalid_argument("unknown seed family");
}

}  // namespace susy
