#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>

#include "susy/seeds.hpp"
#include "susy/stencil.hpp"
#include "susy/transform.hpp"

using namespace susy;

namespace {

SeedRequest free_request(double eps, int k, Grid g = Grid(-8.0, 8.0, 1601)) {
  SeedRequest r;
  r.family = SeedFamily::FreeParticle;
  r.epsilon = eps;
  r.k = k;
  r.grid = g;
  return r;
}

SeedRequest lame_request(double eps, int k, double m = 0.5) {
  SeedRequest r;
  r.family = SeedFamily::Lame;
  r.epsilon = eps;
  r.k = k;
  r.m = m;
  const double K = elliptic_K(m);
  r.grid = Grid(-4.0 * K, 4.0 * K, 4001);
  return r;
}

// Richardson-extrapolated central difference in eps of a k = 1 seed
// component; order 1 or 2.
SampledFunction fd_in_epsilon(SeedRequest req, int order, bool from_v, double h = 2e-3) {
  req.k = 1;
  const cplx e0 = req.epsilon;
  auto at = [&](double de) {
    req.epsilon = e0 + de;
    const auto s = make_seed(req);
    return from_v ? s.v_derivs[0] : s.u_derivs[0];
  };
  auto diff = [&](double step) {
    if (order == 1) return (at(step) - at(-step)) * cplx(1.0 / (2.0 * step));
    return (at(step) - at(0.0) * cplx(2.0) + at(-step)) * cplx(1.0 / (step * step));
  };
  return (diff(0.5 * h) * cplx(4.0) - diff(h)) * cplx(1.0 / 3.0);
}

double schrodinger_seed_residual(const SeedEvaluation& s, const SampledFunction& f) {
  return schrodinger_residual(f, s.V0(), s.epsilon);
}

}  // namespace

TEST_CASE("free-particle seeds in closed form", "[seeds][free]") {
  const auto s = make_seed(free_request(-2.0, 3));
  const double k = std::sqrt(2.0);
  REQUIRE(s.orders() == 3);
  for (std::size_t i = 0; i < s.grid.size(); i += 37) {
    const double x = s.grid.x(i);
    CHECK(std::abs(s.u_derivs[0][i] - std::exp(k * x)) < 1e-13 * std::exp(k * x));
    CHECK(std::abs(s.v_derivs[0][i] + std::exp(-k * x) / (2.0 * k)) < 1e-13 * std::exp(-k * x));
    // d/d eps = -(1/(2 kappa)) d/d kappa
    const double du = -x * std::exp(k * x) / (2.0 * k);
    CHECK(std::abs(s.u_derivs[1][i] - du) < 1e-12 * std::exp(k * x) * (1.0 + std::abs(x)));
  }
  CHECK(seed_wronskian_error(s) < 1e-12);
}

TEST_CASE("seed eps-derivatives against finite differences", "[seeds]") {
  SECTION("free particle") {
    const auto req = free_request(-1.3, 3);
    const auto s = make_seed(req);
    CHECK(local_relative_deviation(s.u_derivs[1], fd_in_epsilon(req, 1, false)) < 1e-8);
    CHECK(local_relative_deviation(s.v_derivs[1], fd_in_epsilon(req, 1, true)) < 1e-8);
    CHECK(local_relative_deviation(s.u_derivs[2], fd_in_epsilon(req, 2, false, 2e-2)) < 1e-6);
  }
  SECTION("Lame, lower gap and band gap") {
    for (double eps : {-0.5, 1.25}) {
      INFO("eps=" << eps);
      const auto req = lame_request(eps, 3);
      const auto s = make_seed(req);
      CHECK(local_relative_deviation(s.u_derivs[1], fd_in_epsilon(req, 1, false)) < 1e-6);
      CHECK(local_relative_deviation(s.v_derivs[1], fd_in_epsilon(req, 1, true)) < 1e-6);
      CHECK(local_relative_deviation(s.u_derivs[2], fd_in_epsilon(req, 2, false, 1e-2)) < 1e-4);
    }
  }
}

TEST_CASE("Bloch seed matches its sigma-quotient form and delta derivative", "[seeds][lame]") {
  const auto s = make_seed(lame_request(-0.2, 2));
  const auto& lat = *s.lattice;
  const cplx d = *s.delta;
  const cplx wp = lat.omega_prime;
  CHECK(std::abs(epsilon_from_delta(d, lat) - cplx(-0.2)) < 1e-12);
  const cplx pd = weierstrass_p_prime(d, lat);
  for (std::size_t i = 0; i < s.grid.size(); i += 97) {
    const double x = s.grid.x(i);
    const cplx u = weierstrass_sigma(x + wp + d, lat) * weierstrass_sigma(wp, lat) /
                   (weierstrass_sigma(x + wp, lat) * weierstrass_sigma(wp + d, lat)) *
                   std::exp(-x * weierstrass_zeta(d, lat));
    CHECK(std::abs(s.u_derivs[0][i] - u) < 1e-11 * std::abs(u));
    // d_delta u = [zeta(x + delta + w') - zeta(delta + w') + x p(delta)] u, d_eps = -d_delta / p'(delta)
    const cplx dd = (weierstrass_zeta(x + d + wp, lat) - weierstrass_zeta(d + wp, lat) + x * weierstrass_p(d, lat)) * u;
    const cplx de = -dd / pd;
    CHECK(std::abs(s.u_derivs[1][i] - de) < 1e-10 * std::max(std::abs(de), std::abs(u)));
  }
  // u(0) = 1
  CHECK(std::abs(s.u_derivs[0][2000] - 1.0) < 1e-12);
}

TEST_CASE("Bloch multiplier over one period", "[seeds][lame]") {
  for (double eps : {-1.0, -0.2, 1.25, 1.45}) {
    const auto s = make_seed(lame_request(eps, 1));
    const auto& lat = *s.lattice;
    const cplx beta = bloch_multiplier(*s.delta, lat);
    // 4001 points over 8K: one period 2K is exactly 1000 samples
    double worst = 0.0;
    for (std::size_t i = 0; i + 1000 < s.grid.size(); i += 13)
      worst = std::max(worst, std::abs(s.u_derivs[0][i + 1000] - beta * s.u_derivs[0][i]) / std::abs(s.u_derivs[0][i + 1000]));
    INFO("eps=" << eps << " beta=" << beta);
    CHECK(worst < 1e-10);
    CHECK(std::abs(std::exp(cplx(0.0, 1.0) * quasimomentum(*s.delta, lat)) - beta) < 1e-10 * std::abs(beta));
    // real multiplier in both gaps; growing to the right
    CHECK(std::abs(beta.imag()) < 1e-10 * std::abs(beta));
    CHECK(std::abs(beta) > 1.0);
  }
}

TEST_CASE("seed pairs have unit Wronskian and solve the equation", "[seeds]") {
  const Grid fg(-10.0, 10.0, 4001);
  std::vector<SeedRequest> reqs{free_request(-0.7, 3, fg), lame_request(-0.5, 3), lame_request(1.3, 3),
                                lame_request(0.2, 3, 0.9)};
  SeedRequest num = free_request(-0.7, 3, fg);
  num.family = SeedFamily::NumericPotential;
  num.potential_samples = SampledFunction::generate(fg, [](double x) { return -1.2 / std::pow(std::cosh(x), 2); });
  reqs.push_back(num);
  for (const auto& r : reqs) {
    const auto s = make_seed(r);
    INFO(to_string(r.family) << " eps=" << r.epsilon.real());
    CHECK(seed_wronskian_error(s) < 1e-9);
    CHECK(schrodinger_seed_residual(s, s.u_derivs[0]) < 1e-6);
    CHECK(schrodinger_seed_residual(s, s.v_derivs[0]) < 1e-6);
    // realness in the gaps
    CHECK(relative_imag(s.u_derivs[0]) < 1e-12);
    CHECK(relative_imag(s.v_derivs[2]) < 1e-10);
  }
}

TEST_CASE("numeric seed on V0 = 0 reproduces the free-particle transform", "[seeds][numeric]") {
  const Grid g(-12.0, 12.0, 4001);
  const ChainParameters p{cplx(-1.1), 3, {0.2, 0.0}, {0.0, -0.05}};
  SeedRequest fr = free_request(-1.1, 3, g);
  SeedRequest nr = fr;
  nr.family = SeedFamily::NumericPotential;
  nr.potential_samples = SampledFunction(g);
  const auto a = run_pipeline(fr, p);
  const auto b = run_pipeline(nr, p);
  REQUIRE_FALSE(a.result.singular());
  REQUIRE_FALSE(b.result.singular());
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(a.result.Vk[i] - b.result.Vk[i]));
  CHECK(worst < 1e-7);
}

TEST_CASE("seed requests that cannot be honoured", "[seeds][errors]") {
  CHECK_THROWS_AS(make_seed(free_request(0.5, 2)), std::domain_error);
  CHECK_THROWS_AS(make_seed(free_request(0.0, 2)), std::domain_error);
  CHECK_THROWS_AS(make_seed(lame_request(0.75, 2)), std::domain_error);   // allowed band
  CHECK_THROWS_AS(make_seed(lame_request(2.0, 2)), std::domain_error);    // upper band
  CHECK_THROWS_AS(make_seed(lame_request(0.4995, 2)), std::domain_error); // at the edge m
  SeedRequest bad = free_request(-1.0, 2);
  bad.family = SeedFamily::NumericPotential;
  CHECK_THROWS_AS(make_seed(bad), std::invalid_argument);
  bad.potential_samples = SampledFunction(bad.grid);
  bad.epsilon = 0.3;
  CHECK_THROWS_AS(make_seed(bad), std::domain_error);
  bad.epsilon = -1.0;
  bad.k = 0;
  CHECK_THROWS_AS(make_seed(bad), std::invalid_argument);
}

TEST_CASE("delta segments cover every real energy", "[seeds][lame]") {
  const auto lat = make_lattice(0.5);
  for (double e = -2.0; e <= 4.0; e += 0.0625) {
    const cplx d = delta_for_energy(e, lat);
    INFO("E=" << e << " delta=" << d);
    CHECK(std::abs(epsilon_from_delta(d, lat) - cplx(e)) < 1e-10);
  }
  // exact band edges sit on segment endpoints
  for (double e : {0.5, 1.0, 1.5}) CHECK(std::abs(epsilon_from_delta(delta_for_energy(e, lat), lat) - cplx(e)) < 1e-10);
}
