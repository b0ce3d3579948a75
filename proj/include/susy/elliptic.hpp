#pragma once

// Complete elliptic integral K(m), Jacobi sn, and the Weierstrass functions
// on the rectangular lattice with half-periods omega = K(m),
// omega' = i K(1-m). Everything is evaluated from theta series in the nome
// q = exp(-pi K'/K), after folding the argument into the fundamental cell.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "susy/core.hpp"
#include "susy/jet.hpp"

namespace susy {

/// Complete elliptic integral of the first kind by the arithmetic-geometric mean.
inline double elliptic_K(double m) {
  if (!(m >= 0.0) || !(m < 1.0))
    throw std::domain_error("elliptic_K: modulus m must lie in [0, 1)");
  double a = 1.0;
  double b = std::sqrt(1.0 - m);
  for (int it = 0; it < 64 && std::abs(a - b) > 1e-16 * a; ++it) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return pi / (2.0 * a);
}

struct LatticeData {
  double m = 0.5;
  double omega = 0.0;        // K(m)
  cplx omega_prime{};        // i K(1-m)
  cplx nome{};               // exp(i pi omega'/omega), real in (0,1)
  cplx eta{};                // zeta(omega)
  cplx eta_prime{};          // zeta(omega')
  double e1 = 0.0, e2 = 0.0, e3 = 0.0;  // p(omega), p(omega+omega'), p(omega')
  double g2 = 0.0, g3 = 0.0;
  double theta_t = 0.0;      // -log(nome)
  double theta1_prime0 = 0.0;
};

namespace detail {

/// Sums 2 sum_n (-1)^n q^{(n+1/2)^2} (2n+1)^j sin^{(j)}((2n+1) v), j = 0..J.
template <std::size_t J>
std::array<cplx, J + 1> theta1_sums(cplx v, double t) {
  std::array<cplx, J + 1> s{};
  for (int n = 0; n < 200; ++n) {
    const double k = 2.0 * n + 1.0;
    const double w = std::exp(-t * (n + 0.5) * (n + 0.5)) * (n % 2 == 0 ? 2.0 : -2.0);
    const cplx sn = std::sin(k * v);
    const cplx cs = std::cos(k * v);
    double kp = 1.0;
    double biggest = 0.0;
    for (std::size_t j = 0; j <= J; ++j) {
      cplx d;
      switch (j % 4) {
        case 0: d = sn; break;
        case 1: d = cs; break;
        case 2: d = -sn; break;
        default: d = -cs; break;
      }
      const cplx term = w * kp * d;
      s[j] += term;
      biggest = std::max(biggest, std::abs(term) / std::max(std::abs(s[j]), 1e-300));
      kp *= k;
    }
    if (n > 0 && biggest < 1e-17) break;
  }
  return s;
}

/// v = v0 + a*pi + i*b*t with v0 in the centred cell.
struct ThetaReduction {
  cplx v0;
  double a;
  double b;
};

inline ThetaReduction reduce_theta_argument(cplx v, double t) {
  ThetaReduction r{};
  r.a = std::round(v.real() / pi);
  cplx v1 = v - r.a * pi;
  r.b = std::round(v1.imag() / t);
  r.v0 = v1 - cplx(0.0, r.b * t);
  return r;
}

/// log theta_1(v) and its first three log-derivatives.
struct ThetaLog {
  cplx log_value;
  cplx d1, d2, d3;
  cplx v0;
};

inline ThetaLog theta1_log(cplx v, double t) {
  const auto r = reduce_theta_argument(v, t);
  const auto s = theta1_sums<3>(r.v0, t);
  ThetaLog out;
  out.v0 = r.v0;
  const cplx I(0.0, 1.0);
  out.log_value = std::log(s[0]) + I * pi * (r.a + r.b) + r.b * r.b * t - 2.0 * I * r.b * r.v0;
  const cplx l1 = s[1] / s[0];
  const cplx l2 = s[2] / s[0];
  const cplx l3 = s[3] / s[0];
  out.d1 = l1 - 2.0 * I * r.b;
  out.d2 = l2 - l1 * l1;
  out.d3 = l3 - 3.0 * l1 * l2 + 2.0 * l1 * l1 * l1;
  return out;
}

inline double theta_scale(const LatticeData& lat) { return pi / (2.0 * lat.omega); }

inline void check_not_pole(const ThetaLog& th, const LatticeData& lat, const char* what) {
  if (std::abs(th.v0) / theta_scale(lat) < 1e-8)
    throw std::domain_error(std::string(what) + ": argument on a lattice point (pole)");
}

}  // namespace detail

inline LatticeData make_lattice(double m) {
  if (!(m > 0.0) || !(m < 1.0))
    throw std::domain_error("lattice modulus m must lie in (0, 1)");
  LatticeData lat;
  lat.m = m;
  lat.omega = elliptic_K(m);
  const double kp = elliptic_K(1.0 - m);
  lat.omega_prime = cplx(0.0, kp);
  lat.theta_t = pi * kp / lat.omega;
  lat.nome = std::exp(-lat.theta_t);
  const auto s = detail::theta1_sums<3>(cplx(0.0), lat.theta_t);
  lat.theta1_prime0 = s[1].real();
  lat.eta = -(pi * pi / (12.0 * lat.omega)) * s[3].real() / s[1].real();
  lat.eta_prime = (lat.eta * lat.omega_prime - cplx(0.0, pi / 2.0)) / lat.omega;
  // With omega = K(m) the roots are fixed: e1 - e3 = 1, e2 - e3 = m.
  lat.e1 = (2.0 - m) / 3.0;
  lat.e2 = (2.0 * m - 1.0) / 3.0;
  lat.e3 = -(1.0 + m) / 3.0;
  lat.g2 = 2.0 * (lat.e1 * lat.e1 + lat.e2 * lat.e2 + lat.e3 * lat.e3);
  lat.g3 = 4.0 * lat.e1 * lat.e2 * lat.e3;
  return lat;
}

inline cplx weierstrass_p(cplx z, const LatticeData& lat) {
  const double k = detail::theta_scale(lat);
  const auto th = detail::theta1_log(k * z, lat.theta_t);
  detail::check_not_pole(th, lat, "weierstrass_p");
  return -lat.eta / lat.omega - k * k * th.d2;
}

inline cplx weierstrass_p_prime(cplx z, const LatticeData& lat) {
  const double k = detail::theta_scale(lat);
  const auto th = detail::theta1_log(k * z, lat.theta_t);
  detail::check_not_pole(th, lat, "weierstrass_p_prime");
  return -k * k * k * th.d3;
}

inline cplx weierstrass_zeta(cplx z, const LatticeData& lat) {
  const double k = detail::theta_scale(lat);
  const auto th = detail::theta1_log(k * z, lat.theta_t);
  detail::check_not_pole(th, lat, "weierstrass_zeta");
  return lat.eta * z / lat.omega + k * th.d1;
}

/// log sigma(z), defined modulo 2 pi i. Entire except for -inf at lattice points.
inline cplx weierstrass_log_sigma(cplx z, const LatticeData& lat) {
  const double k = detail::theta_scale(lat);
  const auto th = detail::theta1_log(k * z, lat.theta_t);
  return std::log(2.0 * lat.omega / (pi * lat.theta1_prime0)) +
         lat.eta * z * z / (2.0 * lat.omega) + th.log_value;
}

inline cplx weierstrass_sigma(cplx z, const LatticeData& lat) {
  return std::exp(weierstrass_log_sigma(z, lat));
}

/// p, p', ..., p^(n) at z, higher orders from p'' = 6 p^2 - g2/2.
inline std::vector<cplx> weierstrass_p_derivatives(cplx z, const LatticeData& lat, int n) {
  std::vector<cplx> d(static_cast<std::size_t>(std::max(n, 1) + 1));
  d[0] = weierstrass_p(z, lat);
  d[1] = weierstrass_p_prime(z, lat);
  if (n >= 2) d[2] = 6.0 * d[0] * d[0] - lat.g2 / 2.0;
  for (int r = 1; r + 2 <= n; ++r) {
    cplx s{};
    double binom = 1.0;
    for (int i = 0; i <= r; ++i) {
      s += binom * d[static_cast<std::size_t>(i)] * d[static_cast<std::size_t>(r - i)];
      binom = binom * (r - i) / (i + 1);
    }
    d[static_cast<std::size_t>(r + 2)] = 6.0 * s;
  }
  d.resize(static_cast<std::size_t>(n + 1));
  return d;
}

/// Taylor expansion of sigma about z0, returned as exp(log_scale) * jet(s).
/// The scale is kept apart so large |z0| does not overflow.
struct ScaledJet {
  cplx log_scale;
  Jet jet;
};

inline ScaledJet sigma_jet(cplx z0, int order, const LatticeData& lat) {
  const double k = detail::theta_scale(lat);
  const double t = lat.theta_t;
  const auto r = detail::reduce_theta_argument(k * z0, t);
  const cplx I(0.0, 1.0);

  ScaledJet out;
  out.log_scale = std::log(2.0 * lat.omega / (pi * lat.theta1_prime0)) +
                  lat.eta * z0 * z0 / (2.0 * lat.omega) + I * pi * (r.a + r.b) +
                  r.b * r.b * t - 2.0 * I * r.b * r.v0;

  // Remaining exponent: [eta z0/omega - 2 i b k] s + [eta/(2 omega)] s^2.
  Jet expo(order);
  if (order >= 1) expo[1] = lat.eta * z0 / lat.omega - 2.0 * I * r.b * k;
  if (order >= 2) expo[2] = lat.eta / (2.0 * lat.omega);

  // theta_1(v0 + k s) from direct derivative sums.
  Jet theta(order);
  {
    // Derivatives of sin: cycle through sin, cos, -sin, -cos.
    std::vector<cplx> d(static_cast<std::size_t>(order + 1));
    for (int n = 0; n < 200; ++n) {
      const double kk = 2.0 * n + 1.0;
      const double w = std::exp(-t * (n + 0.5) * (n + 0.5)) * (n % 2 == 0 ? 2.0 : -2.0);
      const cplx sn = std::sin(kk * r.v0);
      const cplx cs = std::cos(kk * r.v0);
      double kp = 1.0;
      double biggest = 0.0;
      for (int j = 0; j <= order; ++j) {
        const cplx base = (j % 4 == 0) ? sn : (j % 4 == 1) ? cs : (j % 4 == 2) ? -sn : -cs;
        const cplx term = w * kp * base;
        d[static_cast<std::size_t>(j)] += term;
        biggest = std::max(biggest, std::abs(term) / std::max(std::abs(d[static_cast<std::size_t>(j)]), 1e-300));
        kp *= kk;
      }
      if (n > 0 && biggest < 1e-17) break;
    }
    double kj = 1.0;
    double fact = 1.0;
    for (int j = 0; j <= order; ++j) {
      if (j > 0) {
        kj *= k;
        fact *= j;
      }
      theta[j] = d[static_cast<std::size_t>(j)] * kj / fact;
    }
  }
  out.jet = exp(expo) * theta;
  return out;
}

/// Jacobi sn(x|m) from theta quotients, 0 < m < 1.
inline double jacobi_sn(double x, double m) {
  if (!(m > 0.0) || !(m < 1.0))
    throw std::domain_error("jacobi_sn: modulus m must lie in (0, 1)");
  const double K = elliptic_K(m);
  const double Kp = elliptic_K(1.0 - m);
  const double t = pi * Kp / K;
  double v = pi * x / (2.0 * K);
  const double a = std::round(v / pi);
  v -= a * pi;
  const double sign = (static_cast<long long>(a) % 2 == 0) ? 1.0 : -1.0;

  double th1 = 0.0, th2 = 0.0, th3 = 1.0, th4 = 1.0;
  for (int n = 0; n < 200; ++n) {
    const double qh = std::exp(-t * (n + 0.5) * (n + 0.5));
    const double qn = std::exp(-t * (n + 1.0) * (n + 1.0));
    const double alt = (n % 2 == 0) ? 1.0 : -1.0;
    th1 += 2.0 * alt * qh * std::sin((2.0 * n + 1.0) * v);
    th2 += 2.0 * qh;
    th3 += 2.0 * qn;
    th4 += 2.0 * (-alt) * qn * std::cos(2.0 * (n + 1.0) * v);
    if (qh < 1e-18) break;
  }
  return sign * (th3 / th2) * (th1 / th4);
}

}  // namespace susy

namespace susy {

/// Addition laws and derivative relations of sigma, zeta, p at a handful of
/// points of the fundamental cell. Deviations are relative to the size of
/// the largest term; derivatives come from 5-point central differences.
inline std::vector<IdentityCheck> elliptic_identity_suite(const LatticeData& lat) {
  const cplx w = lat.omega, wp = lat.omega_prime;
  const std::vector<cplx> pts = {0.31 * w + 0.17 * wp, 0.55 * w + 0.62 * wp, 1.23 * w - 0.41 * wp,
                                 0.08 * w + 0.93 * wp, -0.7 * w + 0.35 * wp};
  const double h = 1e-3;
  auto d1 = [&](auto&& f, cplx z) {
    return (f(z - 2.0 * h) - 8.0 * f(z - h) + 8.0 * f(z + h) - f(z + 2.0 * h)) / (12.0 * h);
  };
  auto sig = [&](cplx z) { return weierstrass_sigma(z, lat); };
  auto zet = [&](cplx z) { return weierstrass_zeta(z, lat); };
  auto wpf = [&](cplx z) { return weierstrass_p(z, lat); };
  auto rel = [](cplx a, cplx b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); };

  double e_sig = 0, e_zet = 0, e_wp = 0, e_zadd = 0, e_sprod = 0;
  for (const cplx z : pts) {
    e_sig = std::max(e_sig, rel(d1(sig, z), sig(z) * zet(z)));
    e_zet = std::max(e_zet, rel(d1(zet, z), -wpf(z)));
    const cplx s = sig(z);
    e_wp = std::max(e_wp, rel(weierstrass_p_prime(z, lat), -sig(2.0 * z) / (s * s * s * s)));
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const cplx z1 = pts[i], z2 = pts[(i + 2) % pts.size()];
    const cplx p1 = wpf(z1), p2 = wpf(z2);
    const cplx rhs = zet(z1) + zet(z2) + 0.5 * (weierstrass_p_prime(z1, lat) - weierstrass_p_prime(z2, lat)) / (p1 - p2);
    e_zadd = std::max(e_zadd, rel(zet(z1 + z2), rhs));
    const cplx s1 = sig(z1), s2 = sig(z2);
    e_sprod = std::max(e_sprod, rel(sig(z1 + z2) * sig(z1 - z2), -s1 * s1 * s2 * s2 * (p1 - p2)));
  }
  return {{"d/dz sigma = sigma zeta", e_sig},
          {"d/dz zeta = -p", e_zet},
          {"p' = -sigma(2z)/sigma^4", e_wp},
          {"zeta addition law", e_zadd},
          {"sigma(z1+z2) sigma(z1-z2) = -sigma1^2 sigma2^2 (p1 - p2)", e_sprod}};
}

}  // namespace susy
