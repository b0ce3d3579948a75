#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "susy/transform.hpp"

using namespace susy;

namespace {

SeedRequest request(SeedFamily f, Grid g) {
  SeedRequest r;
  r.family = f;
  r.grid = g;
  return r;
}

Grid lame_grid() {
  const double K = elliptic_K(0.5);
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

}  // namespace

TEST_CASE("k = 3 free-particle transforms with D1 = 0, D2 < 0 are sech^2 wells", "[transform][free]") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> E(-3.0, -0.4), X(-3.0, 3.0), C(-1.0, 1.0);
  const Grid g(-10.0, 10.0, 4001);
  for (int t = 0; t < 6; ++t) {
    const double eps = E(rng), x2 = X(rng), k = std::sqrt(-eps);
    // C1 has no influence once D1 = 0
    const ChainParameters p{cplx(eps), 3, {C(rng), C(rng)}, {0.0, -std::exp(-2.0 * k * x2) / (8.0 * k * k * k)}};
    const auto pl = run_pipeline(request(SeedFamily::FreeParticle, g), p);
    INFO("eps=" << eps << " x2=" << x2);
    REQUIRE_FALSE(pl.result.singular());
    CHECK(sech2_error(pl.result.Vk, k, x2) < 1e-8);
    CHECK(pl.result.diagnostics.psi_residual < 1e-6);
    // psi_3 cosh(k (x + x2)) is constant
    const std::size_t mid = g.size() / 2;
    const cplx r0 = pl.result.psi_k[mid] * std::cosh(k * (g.x(mid) + x2));
    double e = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      e = std::max(e, std::abs(pl.result.psi_k[i] * std::cosh(k * (g.x(i) + x2)) - r0) / std::abs(r0));
    CHECK(e < 1e-6);
  }
}

TEST_CASE("k = 4 free-particle transforms with only D3 < 0 are sech^2 wells", "[transform][free]") {
  const Grid g(-10.0, 10.0, 4001);
  for (auto [eps, x3] : {std::pair{-1.0, 0.0}, std::pair{-2.0, 2.0}, std::pair{-0.6, -1.5}}) {
    const double k = std::sqrt(-eps);
    const ChainParameters p{cplx(eps), 4, {0.0, 0.0, 0.4}, {0.0, 0.0, -std::exp(-2.0 * k * x3) / (32.0 * std::pow(k, 5))}};
    const auto pl = run_pipeline(request(SeedFamily::FreeParticle, g), p);
    REQUIRE_FALSE(pl.result.singular());
    CHECK(sech2_error(pl.result.Vk, k, x3) < 1e-8);
    CHECK(normalizability_check(pl.result.psi_k).kind == StateKind::Physical);
  }
}

TEST_CASE("non-singularity needs D1 = 0 and a negative last D", "[transform][free]") {
  const Grid g(-15.0, 15.0, 4001);
  SECTION("D1 = 0.5") {
    const auto pl = run_pipeline(request(SeedFamily::FreeParticle, g), ChainParameters{cplx(-1.0), 3, {0.0, 0.0}, {0.5, 0.1}});
    CHECK(pl.result.singular());
    CHECK_FALSE(std::isfinite(pl.result.diagnostics.psi_residual));
  }
  SECTION("flipped sign of D2 puts the zero of e^{2kx} - 8 D2 k^3 at x = -x2") {
    const double x2 = 1.5;
    const auto pl = run_pipeline(request(SeedFamily::FreeParticle, g),
                                 ChainParameters{cplx(-1.0), 3, {0.0, 0.0}, {0.0, std::exp(-2.0 * x2) / 8.0}});
    REQUIRE(pl.result.singularities.size() == 1);
    CHECK(pl.result.singularities[0].left <= -x2);
    CHECK(pl.result.singularities[0].right >= -x2);
  }
}

TEST_CASE("the last C leaves V_k and psi_k unchanged", "[transform][spectator]") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  struct Case {
    SeedFamily family;
    double eps;
    Grid grid;
  };
  const std::vector<Case> cases{{SeedFamily::FreeParticle, -1.0, Grid(-15.0, 15.0, 4001)},
                                {SeedFamily::Lame, -0.5, lame_grid()},
                                {SeedFamily::Lame, 1.3, lame_grid()}};
  for (const auto& c : cases) {
    const auto s = make_seed([&] {
      auto r = request(c.family, c.grid);
      r.epsilon = c.eps;
      r.k = 4;
      return r;
    }());
    for (int k = 2; k <= 4; ++k) {
      ChainParameters p = ChainParameters::zeros(c.eps, k);
      for (std::size_t i = 0; i + 1 < p.C.size(); ++i) p.C[i] = U(rng);
      p.D.back() = -0.5;
      const auto a = run_pipeline(s, p);
      p.C.back() = U(rng) * 10.0;
      const auto b = run_pipeline(s, p);
      INFO(to_string(c.family) << " k=" << k);
      // V_k decays to round-off on the free grid, so measure against its scale
      CHECK(sup_difference(a.result.Vk, b.result.Vk) / a.result.Vk.max_abs() < 1e-9);
      CHECK(local_relative_deviation(a.result.psi_k, b.result.psi_k) < 1e-9);
    }
  }
}

TEST_CASE("rescaling W leaves V_k unchanged and rescales psi_k", "[transform]") {
  const auto s = make_seed([] {
    auto r = request(SeedFamily::FreeParticle, Grid(-8.0, 8.0, 1601));
    r.epsilon = -1.0;
    r.k = 3;
    return r;
  }());
  const auto ch = build_chain(s, ChainParameters{cplx(-1.0), 3, {0.0, 0.0}, {0.0, -0.1}});
  auto b = compute_wronskians(s, ch, false);
  const auto r1 = transform(s.V0(), b, -1.0);
  b.W_k *= 3.0;
  b.dW_k *= 3.0;
  b.d2W_k *= 3.0;
  const auto r2 = transform(s.V0(), b, -1.0);
  CHECK(sup_difference(r1.Vk, r2.Vk) < 1e-13);
  CHECK(local_relative_deviation(r1.psi_k * cplx(1.0 / 3.0), r2.psi_k) < 1e-14);
}

TEST_CASE("Lame transforms stay real and periodic far from the defect", "[transform][lame]") {
  const auto g = lame_grid();
  auto r = request(SeedFamily::Lame, g);
  const auto pl = run_pipeline(r, ChainParameters{cplx(-1.0), 4, {0.0, 0.0, 0.0}, {0.0, 0.0, -1.0}});
  REQUIRE_FALSE(pl.result.singular());
  CHECK(pl.result.diagnostics.max_imag_Vk < 1e-10);
  CHECK(pl.result.diagnostics.psi_residual < 1e-4);
  CHECK(normalizability_check(pl.result.psi_k).kind == StateKind::Physical);
  // left of the defect V_k settles into a translate of V0: period 2K (1000
  // samples) and the same range [0, 2m] as the seed potential
  double drift = 0.0, lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < 1000; ++i) {
    if (i < 200) drift = std::max(drift, std::abs(pl.result.Vk[i + 1000] - pl.result.Vk[i]));
    lo = std::min(lo, pl.result.Vk[i].real());
    hi = std::max(hi, pl.result.Vk[i].real());
  }
  CHECK(drift < 1e-3);
  CHECK(std::abs(lo - 0.0) < 1e-2);
  CHECK(std::abs(hi - 1.0) < 1e-2);
}

TEST_CASE("normalizability classification", "[transform][normalizability]") {
  const Grid g(-10.0, 10.0, 2001);
  const auto bump = SampledFunction::generate(g, [](double x) { return 1.0 / std::cosh(x); });
  const auto grow = SampledFunction::generate(g, [](double x) { return std::exp(0.5 * x); });
  const auto flat = SampledFunction::generate(g, [](double x) { return std::cos(3.0 * x); });
  CHECK(normalizability_check(bump).kind == StateKind::Physical);
  CHECK(normalizability_check(grow).kind == StateKind::Mathematical);
  CHECK(normalizability_check(flat).kind == StateKind::Mathematical);
  const auto n = l2_normalized(bump);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n.size(); ++i) total += 0.5 * g.spacing() * (std::norm(n[i]) + std::norm(n[i + 1]));
  CHECK(total == Catch::Approx(1.0).epsilon(1e-14));
  auto bad = bump;
  bad[3] = cplx(INFINITY);
  CHECK_THROWS_AS(normalizability_check(bad), std::domain_error);
}
