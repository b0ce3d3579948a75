// Acceptance run: one PASS/FAIL line per criterion, details indented below.
//
// Exit status is 0 when every criterion passes, or when the only failures
// are figure parameter sets listed in `known_red` (see README, "Figure
// parameter sets"). Any other failure exits 1.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "susy/susy.hpp"

using namespace susy;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Ledger {
  int unexpected = 0;

  void line(int id, bool pass, const std::string& what, const std::string& detail = "", bool known = false) {
    std::printf("%s criterion %d: %s", pass ? "PASS" : "FAIL", id, what.c_str());
    if (!detail.empty()) std::printf(" [%s]", detail.c_str());
    if (!pass && known) std::printf(" (known red)");
    std::printf("\n");
    if (!pass && !known) ++unexpected;
  }
};

void note(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
void note(const char* fmt, ...) {
  std::printf("    ");
  va_list ap;
  va_start(ap, fmt);
  std::vprintf(fmt, ap);
  va_end(ap);
  std::printf("\n");
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

SeedRequest request(SeedFamily f, Grid g, double m = 0.5) {
  SeedRequest r;
  r.family = f;
  r.grid = g;
  r.m = m;
  return r;
}

Grid lame_grid(double m = 0.5) {
  const double K = elliptic_K(m);
  return Grid(-4.0 * K, 4.0 * K, 4001);
}

double sech2_error(const SampledFunction& V, double k, double shift) {
  double e = 0.0;
  for (std::size_t i = 0; i < V.size(); ++i) {
    const double s = 1.0 / std::cosh(k * (V.grid().x(i) + shift));
    e = std::max(e, std::abs(V[i] - cplx(-2.0 * k * k * s * s)));
  }
  return e;
}

// Free-particle closed forms for (u, v) = (e^{kx}, -e^{-kx}/(2k)).
double W3_free(double x, double k, const ChainParameters& p) {
  const double C1 = p.c(1), D1 = p.d(1), D2 = p.d(2);
  return (4 * D1 * D1 * k * k * std::exp(-k * x) - 8 * k * k * (C1 * D1 * k - D2 * k - D1 * x) * std::exp(k * x) -
          std::exp(3 * k * x)) /
         (8 * k * k * k);
}

double W4_free(double x, double k, const ChainParameters& p) {
  const double C1 = p.c(1), C2 = p.c(2), D1 = p.d(1), D2 = p.d(2), D3 = p.d(3);
  const double k2 = k * k, k3 = k2 * k, k4 = k3 * k, k5 = k4 * k, k6 = k5 * k;
  return std::exp(4 * k * x) / (64 * k6) +
         std::exp(2 * k * x) / (16 * k5) *
             (8 * k4 * (C1 * D2 + C2 * D1 - C1 * C1 * D1 - D3) + 8 * k3 * x * (C1 * D1 - D2) +
              4 * k2 * (D2 - C1 * D1 - D1 * x * x) + 2 * D1 * k * x - D1) -
         D1 * D1 * x / (4 * k3) + D1 / (2 * k2) * (C1 * D1 - D2 - D1 * x * x) + D1 * x / k * (C1 * D1 - D2) +
         C1 * D1 * D2 + D1 * D3 - C2 * D1 * D1 - D2 * D2 + D1 * D1 * D1 * std::exp(-2 * k * x) / (8 * k3);
}

SeedEvaluation trim(SeedEvaluation s, int k) {
  const auto n = static_cast<std::size_t>(k);
  for (auto* v : {&s.u_derivs, &s.v_derivs, &s.ux_derivs, &s.vx_derivs})
    if (v->size() > n) v->erase(v->begin() + static_cast<long>(n), v->end());
  return s;
}

ChainParameters draw(std::mt19937& rng, double eps, int k) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  ChainParameters p = ChainParameters::zeros(eps, k);
  for (auto& c : p.C) c = U(rng);
  for (auto& d : p.D) d = U(rng);
  return p;
}

// Non-singular cases collected for criterion 6.
struct ResidualCase {
  std::string name;
  double residual;
  double tol;
};
std::vector<ResidualCase> residual_cases;

}  // namespace

int main() {
  Ledger L;
  const Grid pt_grid(-10.0, 10.0, 4001);

  // 1 -------------------------------------------------------------------
  {
    bool ok = true;
    double worst = 0.0, slowest = 0.0;
    for (auto [eps, x2] : {std::pair{-1.0, 4.0}, std::pair{-2.0, 0.0}, std::pair{-3.0, -4.0}}) {
      const auto t0 = Clock::now();
      const double k = std::sqrt(-eps);
      const ChainParameters p{cplx(eps), 3, {0.0, 0.0}, {0.0, -std::exp(-2.0 * k * x2) / (8.0 * k * k * k)}};
      SeedRequest r = request(SeedFamily::FreeParticle, pt_grid);
      r.epsilon = eps;
      r.k = 3;
      const auto pl = run_pipeline(r, p);
      const double dt = seconds_since(t0);
      const double e = pl.result.singular() ? INFINITY : sech2_error(pl.result.Vk, k, x2);
      note("eps=%g x2=%g  sup|V3 - PT| = %.2e  %.3f s", eps, x2, e, dt);
      residual_cases.push_back({"PT3 eps=" + fmt("%g", eps), pl.result.diagnostics.psi_residual, 1e-6});
      ok = ok && e < 1e-8 && dt < 1.0;
      worst = std::max(worst, e);
      slowest = std::max(slowest, dt);
    }
    L.line(1, ok, "k=3 sech^2 limit", "worst " + fmt("%.2e", worst) + ", slowest " + fmt("%.3f s", slowest));
  }

  // 2 -------------------------------------------------------------------
  {
    bool ok = true;
    double worst = 0.0, slowest = 0.0;
    for (auto [eps, x3] : {std::pair{-1.0, 0.0}, std::pair{-2.0, 2.0}}) {
      const auto t0 = Clock::now();
      const double k = std::sqrt(-eps);
      const ChainParameters p{cplx(eps), 4, {0.0, 0.0, 0.0}, {0.0, 0.0, -std::exp(-2.0 * k * x3) / (32.0 * std::pow(k, 5))}};
      SeedRequest r = request(SeedFamily::FreeParticle, pt_grid);
      r.epsilon = eps;
      r.k = 4;
      const auto pl = run_pipeline(r, p);
      const double dt = seconds_since(t0);
      const double e = pl.result.singular() ? INFINITY : sech2_error(pl.result.Vk, k, x3);
      note("eps=%g x3=%g  sup|V4 - PT| = %.2e  %.3f s", eps, x3, e, dt);
      residual_cases.push_back({"PT4 eps=" + fmt("%g", eps), pl.result.diagnostics.psi_residual, 1e-6});
      ok = ok && e < 1e-8 && dt < 1.0;
      worst = std::max(worst, e);
      slowest = std::max(slowest, dt);
    }
    L.line(2, ok, "k=4 sech^2 limit", "worst " + fmt("%.2e", worst) + ", slowest " + fmt("%.3f s", slowest));
  }

  // 3 -------------------------------------------------------------------
  {
    const auto t0 = Clock::now();
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const Grid g(-10.0, 10.0, 2001);
    double w3 = 0.0, w4 = 0.0;
    for (int t = 0; t < 20; ++t) {
      const double eps = -(0.25 + 1.75 * std::abs(U(rng)));
      const double k = std::sqrt(-eps);
      SeedRequest r = request(SeedFamily::FreeParticle, g);
      r.epsilon = eps;
      r.k = 4;
      const auto s = make_seed(r);
      const auto p3 = draw(rng, eps, 3), p4 = draw(rng, eps, 4);
      const auto c3 = SampledFunction::generate(g, [&](double x) { return W3_free(x, k, p3); });
      const auto c4 = SampledFunction::generate(g, [&](double x) { return W4_free(x, k, p4); });
      // the seed carries four eps-orders; k = 3 uses the first three
      const auto s3 = trim(s, 3);
      const auto b3 = compute_wronskians(s3, build_chain(s3, p3), false);
      const auto b4 = compute_wronskians(s, build_chain(s, p4), false);
      w3 = std::max(w3, local_relative_deviation(b3.W_k, c3));
      w4 = std::max(w4, local_relative_deviation(b4.W_k, c4));
    }
    const double dt = seconds_since(t0);
    L.line(3, w3 < 1e-9 && w4 < 1e-8 && dt < 5.0, "free-particle W3/W4 closed forms, 20 draws",
           "W3 " + fmt("%.2e", w3) + ", W4 " + fmt("%.2e", w4) + ", " + fmt("%.2f s", dt));
  }

  // 4 -------------------------------------------------------------------
  {
    const auto t0 = Clock::now();
    std::mt19937 rng(41);
    bool ok = true;
    for (SeedFamily fam : {SeedFamily::FreeParticle, SeedFamily::Lame}) {
      const double tol = fam == SeedFamily::FreeParticle ? 1e-8 : 1e-7;
      const Grid g = fam == SeedFamily::FreeParticle ? Grid(-15.0, 15.0, 4001) : lame_grid();
      const std::vector<double> energies =
          fam == SeedFamily::FreeParticle ? std::vector<double>{-0.5, -1.0, -2.0} : std::vector<double>{-1.0, -0.2, 1.25, 1.45};
      for (int k = 2; k <= 4; ++k) {
        double worst = 0.0;
        std::size_t methods = 0;
        for (int t = 0; t < 10; ++t) {
          const double eps = energies[static_cast<std::size_t>(t) % energies.size()];
          SeedRequest r = request(fam, g);
          r.epsilon = eps;
          r.k = k;
          const auto s = make_seed(r);
          const auto b = compute_wronskians(s, build_chain(s, draw(rng, eps, k)), true);
          worst = std::max(worst, b.crosscheck);
          methods = b.methods_run.size();
        }
        note("%s k=%d: %zu methods, worst pairwise %.2e (tol %.0e)", to_string(fam), k, methods, worst, tol);
        ok = ok && worst < tol && methods >= 2;
      }
    }
    const double dt = seconds_since(t0);
    L.line(4, ok && dt < 30.0, "determinant / expanded / reduced agreement", fmt("%.2f s", dt));
  }

  // 5 -------------------------------------------------------------------
  {
    std::mt19937 rng(53);
    bool ok = true;
    double wf = 0.0, wl = 0.0;
    for (int k = 2; k <= 4; ++k) {
      for (double eps : {-0.5, -1.0, -2.0}) {
        SeedRequest r = request(SeedFamily::FreeParticle, Grid(-15.0, 15.0, 4001));
        r.epsilon = eps;
        r.k = k;
        const auto s = make_seed(r);
        auto ch = build_chain(s, draw(rng, eps, k));
        const auto rep = verify_chain(ch, s.V0(), 1e-7);
        for (double x : rep.residuals) wf = std::max(wf, x);
        ok = ok && rep.passed();
      }
      for (double eps : {-1.0, -0.2, 1.25, 1.45}) {
        SeedRequest r = request(SeedFamily::Lame, lame_grid());
        r.epsilon = eps;
        r.k = k;
        const auto s = make_seed(r);
        auto ch = build_chain(s, draw(rng, eps, k));
        const auto rep = verify_chain(ch, s.V0(), 1e-4);
        for (double x : rep.residuals) wl = std::max(wl, x);
        ok = ok && rep.passed();
      }
    }
    L.line(5, ok, "Jordan-chain residuals, k <= 4", "free " + fmt("%.2e", wf) + ", Lame " + fmt("%.2e", wl));
  }

  // 10 (run before 6, which reuses its non-singular cases) -------------
  struct FigureSet {
    std::string name;
    int k;
    std::vector<double> caption;  // (m, eps, C_1..C_{k-2}, D_1..D_{k-1})
  };
  const std::vector<FigureSet> figures{
      {"k=3 eps=-0.2 D1=0.01", 3, {0.5, -0.2, 0.1, 0.01, 0.01}},
      {"k=3 eps=-0.5 D1=10", 3, {0.5, -0.5, 0.1, 10.0, 0.01}},
      {"k=4 eps=1.25 D1=1", 4, {0.5, 1.25, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0}},
      {"k=4 eps=1.45 D3=1", 4, {0.5, 1.45, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0}},
      {"k=4 eps=-1 D1=-1", 4, {0.5, -1.0, 1.0, -2.0, -1.0, 2.0, 3.0}},
      {"k=4 eps=-1 D3=-1", 4, {0.5, -1.0, 0.0, 0.0, 0.0, 0.0, -1.0}},
  };
  // Analysed and left red: a real zero of W_k on the window (D1 != 0), or
  // a non-localized added state with a zero of W_4 at x ~ -41.7.
  const std::set<std::string> known_red{"k=3 eps=-0.2 D1=0.01", "k=3 eps=-0.5 D1=10", "k=4 eps=1.25 D1=1", "k=4 eps=1.45 D3=1",
                                        "k=4 eps=-1 D1=-1"};
  int fig_passed = 0;
  bool fig_only_known = true;
  std::vector<std::string> fig_lines;
  {
    int passed = 0;
    bool only_known = true;
    for (const auto& f : figures) {
      RunConfig c;
      c.family = SeedFamily::Lame;
      c.k = f.k;
      apply_caption(c, f.caption);
      const auto o = run_transform(c);
      const auto& r = o.pipeline.result;
      bool ok = o.exit_code == exit_ok;
      std::string why;
      if (!ok) {
        why = "W_" + std::to_string(f.k) + " vanishes in";
        for (const auto& b : r.singularities) why += " [" + fmt("%.3f", b.left) + ", " + fmt("%.3f", b.right) + "]";
      } else {
        const double imV = r.diagnostics.max_imag_Vk, imP = r.diagnostics.max_imag_psi;
        // left of the defect V_k repeats with period 2K
        const Grid& g = r.Vk.grid();
        const auto shift = static_cast<std::size_t>(std::lround(2.0 * elliptic_K(c.m) / g.spacing()));
        double drift = 0.0;
        for (std::size_t i = 0; i < 200; ++i) drift = std::max(drift, std::abs(r.Vk[i + shift] - r.Vk[i]));
        residual_cases.push_back({f.name, r.diagnostics.psi_residual, 1e-4});
        const bool real = imV < 1e-10 && imP < 1e-10 && o.max_imag_W < 1e-10;
        const bool local = o.normalizability.kind == StateKind::Physical;
        ok = real && local && r.diagnostics.psi_residual < 1e-4 && drift < 1e-3;
        why = "imag V " + fmt("%.1e", imV) + ", psi " + fmt("%.1e", imP) + "; state " +
              to_string(o.normalizability.kind) + " (tail " + fmt("%.3f", o.normalizability.tail_fraction) +
              ", edge " + fmt("%.3f", o.normalizability.edge_ratio) + "); psi residual " +
              fmt("%.1e", r.diagnostics.psi_residual) + "; periodic drift " + fmt("%.1e", drift);
      }
      fig_lines.push_back(std::string(ok ? "ok   " : "red  ") + f.name + ": " + why);
      passed += ok;
      if (!ok && !known_red.count(f.name)) only_known = false;
    }
    fig_passed = passed;
    fig_only_known = only_known;
  }

  // 6 -------------------------------------------------------------------
  {
    bool ok = true;
    for (const auto& c : residual_cases) {
      note("%s: psi residual %.2e (tol %.0e)", c.name.c_str(), c.residual, c.tol);
      ok = ok && c.residual < c.tol;
    }
    L.line(6, ok && !residual_cases.empty(), "added-state residual on every non-singular case",
           std::to_string(residual_cases.size()) + " cases");
  }

  // 7 -------------------------------------------------------------------
  {
    bool ok = true;
    auto run = [&](SeedFamily fam, double eps, double m) {
      RunConfig c;
      c.family = fam;
      c.m = m;
      c.epsilon = eps;
      c.k = 4;
      c.C.assign(2, 0.0);
      c.D.assign(3, 0.0);
      double worst = 0.0;
      bool pass = true;
      for (const auto& row : identity_checks(c)) {
        worst = std::max(worst, row.value);
        pass = pass && row.pass;
      }
      note("%s m=%g eps=%g: worst %.2e", to_string(fam), m, eps, worst);
      ok = ok && pass;
    };
    for (double eps : {-0.5, -1.0, -2.0}) run(SeedFamily::FreeParticle, eps, 0.5);
    for (double eps : {-1.0, -0.2, 1.25, 1.45}) run(SeedFamily::Lame, eps, 0.5);
    run(SeedFamily::Lame, -0.3, 0.9);
    run(SeedFamily::Lame, 1.1, 0.3);
    L.line(7, ok, "Wronskian, addition-law and derivative identities at family tolerances");
  }

  // 8 -------------------------------------------------------------------
  {
    const auto t0 = Clock::now();
    const auto s = band_sweep(0.5, -2.0, 4.0, 400);
    const double dt = seconds_since(t0);
    const double expect[] = {0.5, 1.0, 1.5};
    bool ok = s.edges.size() == 3;
    std::string found;
    for (std::size_t i = 0; i < s.edges.size(); ++i) {
      found += (i ? " " : "") + fmt("%.6f", s.edges[i]);
      if (ok) ok = std::abs(s.edges[i] - expect[i]) < 1e-3;
    }
    L.line(8, ok && dt < 10.0, "band edges at m=0.5", "edges " + found + ", " + fmt("%.2f s", dt));
  }

  // 9 -------------------------------------------------------------------
  {
    std::mt19937 rng(97);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    struct Case {
      SeedFamily family;
      double eps;
      Grid grid;
    };
    const std::vector<Case> cases{{SeedFamily::FreeParticle, -1.0, Grid(-15.0, 15.0, 4001)},
                                  {SeedFamily::FreeParticle, -2.5, Grid(-15.0, 15.0, 4001)},
                                  {SeedFamily::Lame, -0.5, lame_grid()},
                                  {SeedFamily::Lame, 1.3, lame_grid()}};
    double wv = 0.0, wp = 0.0;
    for (const auto& c : cases) {
      SeedRequest r = request(c.family, c.grid);
      r.epsilon = c.eps;
      r.k = 4;
      const auto s4 = make_seed(r);
      for (int k = 2; k <= 4; ++k) {
        const auto s = trim(s4, k);
        ChainParameters p = ChainParameters::zeros(c.eps, k);
        for (std::size_t i = 0; i + 1 < p.C.size(); ++i) p.C[i] = U(rng);
        p.D.back() = -0.5;
        const auto a = run_pipeline(s, p);
        p.C.back() = 10.0 * U(rng);
        const auto b = run_pipeline(s, p);
        wv = std::max(wv, sup_difference(a.result.Vk, b.result.Vk) / a.result.Vk.max_abs());
        wp = std::max(wp, local_relative_deviation(a.result.psi_k, b.result.psi_k));
      }
    }
    L.line(9, wv < 1e-9 && wp < 1e-9, "spectator C_{k-1} leaves V_k and psi_k unchanged",
           "V_k " + fmt("%.2e", wv) + ", psi_k " + fmt("%.2e", wp));
  }

  for (const auto& l : fig_lines) note("%s", l.c_str());
  L.line(10, fig_passed == static_cast<int>(figures.size()), "figure parameter sets run regular, real and localized",
         std::to_string(fig_passed) + "/" + std::to_string(figures.size()) + " sets", fig_only_known);

  std::printf("%s\n", L.unexpected == 0 ? "acceptance: no unexpected failures" : "acceptance: UNEXPECTED FAILURES");
  return L.unexpected == 0 ? 0 : 1;
}
