#pragma once

// Band classification for the single-gap Lame potential, empirical
// singularity scans and the sech^2 matcher.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "susy/core.hpp"
#include "susy/elliptic.hpp"
#include "susy/seeds.hpp"
#include "susy/transform.hpp"
#include "susy/wronskian.hpp"

namespace susy {

enum class BandClass { AllowedBand, BandGap, LowerGap, Edge };

inline const char* to_string(BandClass c) {
  switch (c) {
    case BandClass::AllowedBand: return "allowed";
    case BandClass::BandGap: return "band_gap";
    case BandClass::LowerGap: return "lower_gap";
    case BandClass::Edge: return "edge";
  }
  return "?";
}

struct BandReport {
  double energy = 0.0;
  cplx delta;
  cplx quasimomentum;  // reduced: Im >= 0, Re in [0, 2 pi)
  BandClass classification = BandClass::Edge;
};

inline constexpr double band_tol = 1e-8;

/// kappa is defined up to sign and 2 pi; pick Im >= 0, Re in [0, 2 pi).
inline cplx reduce_quasimomentum(cplx k) {
  if (k.imag() < 0.0 || (k.imag() == 0.0 && k.real() < 0.0)) k = -k;
  double re = std::fmod(k.real(), 2.0 * pi);
  if (re < 0.0) re += 2.0 * pi;
  if (2.0 * pi - re < 1e-12) re = 0.0;
  return {re, k.imag()};
}

namespace detail {

/// Raw classification from kappa alone, no edge handling.
inline BandClass raw_band_class(double energy, const LatticeData& lat, cplx* delta_out = nullptr,
                                cplx* kappa_out = nullptr) {
  const cplx d = delta_for_energy(energy, lat);
  const cplx k = reduce_quasimomentum(quasimomentum(d, lat));
  if (delta_out) *delta_out = d;
  if (kappa_out) *kappa_out = k;
  if (std::abs(k.imag()) < band_tol) return BandClass::AllowedBand;
  // Decaying solutions: periodic type (Re kappa = 0) below the spectrum,
  // antiperiodic type (Re kappa = pi) in the finite gap.
  return std::abs(k.real() - pi) < 0.5 * pi ? BandClass::BandGap : BandClass::LowerGap;
}

}  // namespace detail

/// Classification of E from the quasi-momentum. Energies whose class
/// changes within edge_tol are reported as Edge.
inline BandReport classify_energy(double energy, double m, double edge_tol = 1e-3) {
  if (!(m > 0.0 && m < 1.0)) throw std::domain_error("elliptic parameter must lie in (0, 1)");
  const LatticeData lat = make_lattice(m);
  BandReport r;
  r.energy = energy;
  const BandClass c = detail::raw_band_class(energy, lat, &r.delta, &r.quasimomentum);
  const BandClass lo = detail::raw_band_class(energy - edge_tol, lat);
  const BandClass hi = detail::raw_band_class(energy + edge_tol, lat);
  r.classification = (lo == c && hi == c) ? c : BandClass::Edge;
  return r;
}

struct BandSweep {
  std::vector<BandReport> rows;
  std::vector<double> edges;  // bisected class boundaries, ascending
};

/// Uniform sweep over [e_min, e_max]; each change of class between
/// neighbouring samples is bisected down to `resolution`.
inline BandSweep band_sweep(double m, double e_min, double e_max, int n = 400, double edge_tol = 1e-3,
                            double resolution = 1e-9) {
  if (n < 2) throw std::invalid_argument("band sweep needs at least two energies");
  if (!(e_max > e_min)) throw std::invalid_argument("band sweep needs e_max > e_min");
  if (!(m > 0.0 && m < 1.0)) throw std::domain_error("elliptic parameter must lie in (0, 1)");
  const LatticeData lat = make_lattice(m);
  BandSweep out;
  std::vector<BandClass> raw;
  std::vector<double> es;
  for (int i = 0; i < n; ++i) {
    const double e = e_min + (e_max - e_min) * i / (n - 1);
    es.push_back(e);
    out.rows.push_back(classify_energy(e, m, edge_tol));
    raw.push_back(detail::raw_band_class(e, lat));
  }
  for (std::size_t i = 0; i + 1 < es.size(); ++i) {
    if (raw[i] == raw[i + 1]) continue;
    double a = es[i], b = es[i + 1];
    const BandClass ca = raw[i];
    while (b - a > resolution) {
      const double mid = 0.5 * (a + b);
      if (detail::raw_band_class(mid, lat) == ca) a = mid; else b = mid;
    }
    out.edges.push_back(0.5 * (a + b));
  }
  return out;
}

// ---------------------------------------------------------------------------

struct ScanRecord {
  ChainParameters params;
  bool singular = false;
  int n_zeros = 0;
  double min_abs_W = 0.0;
  std::string error;  // non-empty when the record could not be evaluated;
                      // such records carry no zero count
};

/// Worker count: SUSY_CONFLUENT_THREADS when set to a positive integer,
/// otherwise the hardware concurrency.
inline unsigned scan_threads() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SUSY_CONFLUENT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(std::min<long>(v, 1024));
  }
  return hw;
}

inline ScanRecord scan_one(const SeedEvaluation& seed, const ChainParameters& p) {
  ScanRecord r;
  r.params = p;
  const auto chain = build_chain(seed, p);
  const auto b = compute_wronskians(seed, chain, false);
  const auto zeros = find_zero_brackets(b.W_k);
  r.n_zeros = static_cast<int>(zeros.size());
  r.singular = r.n_zeros > 0;
  double mn = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < b.W_k.size(); ++i) mn = std::min(mn, std::abs(b.W_k[i]));
  r.min_abs_W = mn;
  return r;
}

/// One record per parameter set, in input order. Seeds are built once per
/// distinct (eps, k); failures are recorded and the scan continues.
inline std::vector<ScanRecord> singularity_scan(const SeedRequest& base,
                                                const std::vector<ChainParameters>& params_list,
                                                unsigned threads = 0) {
  std::vector<ScanRecord> out(params_list.size());
  if (params_list.empty()) return out;
  if (threads == 0) threads = scan_threads();
  threads = std::min<unsigned>(threads, static_cast<unsigned>(params_list.size()));

  std::mutex cache_mutex;
  std::map<std::pair<double, int>, std::shared_ptr<const SeedEvaluation>> cache;
  std::map<std::pair<double, int>, std::string> cache_errors;
  auto seed_for = [&](const ChainParameters& p) -> std::shared_ptr<const SeedEvaluation> {
    const std::pair<double, int> key{p.epsilon.real(), p.k};
    {
      std::lock_guard lock(cache_mutex);
      if (auto it = cache.find(key); it != cache.end()) return it->second;
      if (auto it = cache_errors.find(key); it != cache_errors.end()) throw SeedError(it->second);
    }
    SeedRequest req = base;
    req.epsilon = p.epsilon;
    req.k = p.k;
    try {
      auto s = std::make_shared<const SeedEvaluation>(make_seed(req));
      std::lock_guard lock(cache_mutex);
      return cache.emplace(key, std::move(s)).first->second;
    } catch (const std::exception& e) {
      std::lock_guard lock(cache_mutex);
      cache_errors.emplace(key, e.what());
      throw;
    }
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < params_list.size(); i = next++) {
      try {
        out[i] = scan_one(*seed_for(params_list[i]), params_list[i]);
      } catch (const std::exception& e) {
        out[i].params = params_list[i];
        out[i].singular = false;
        out[i].n_zeros = 0;
        out[i].min_abs_W = 0.0;
        out[i].error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

// ---------------------------------------------------------------------------

struct PoschlTellerFit {
  double kappa_fit = 0.0;
  double x0_fit = 0.0;  // V ~ -2 a^2 sech^2(a (x + x0))
  double sup_error = 0.0;
};

/// Reads a from the well depth and x0 from the location of the minimum,
/// both refined by a parabola through the three lowest samples.
inline PoschlTellerFit poschl_teller_match(const SampledFunction& V) {
  V.require_finite("poschl_teller_match");
  const Grid& g = V.grid();
  std::size_t imin = 0;
  for (std::size_t i = 1; i < V.size(); ++i)
    if (V[i].real() < V[imin].real()) imin = i;
  if (!(V[imin].real() < 0.0)) throw std::domain_error("potential has no well to fit");
  double xm = g.x(imin);
  double vm = V[imin].real();
  if (imin > 0 && imin + 1 < V.size()) {
    const double a = V[imin - 1].real(), b = V[imin].real(), c = V[imin + 1].real();
    const double den = a - 2.0 * b + c;
    if (den > 0.0) {
      const double t = 0.5 * (a - c) / den;  // offset in samples, |t| <= 1/2
      xm += t * g.spacing();
      vm = b - 0.25 * (a - c) * t;
    }
  }
  PoschlTellerFit fit;
  fit.kappa_fit = std::sqrt(-vm / 2.0);
  fit.x0_fit = -xm;
  for (std::size_t i = 0; i < V.size(); ++i) {
    const double s = 1.0 / std::cosh(fit.kappa_fit * (g.x(i) + fit.x0_fit));
    fit.sup_error = std::max(fit.sup_error, std::abs(V[i] - cplx(-2.0 * fit.kappa_fit * fit.kappa_fit * s * s)));
  }
  return fit;
}

}  // namespace susy
