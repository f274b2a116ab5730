#include "doctest.h"
#include "kobvis/profiles.hpp"
#include "kobvis/quadrature.hpp"

using namespace kobvis;

namespace {

double d(Real x) { return static_cast<double>(x); }

Real node(int j) { return std::ldexp(Real(1), -j); }

}  // namespace

TEST_SUITE("profiles") {
  TEST_CASE("exp_power values") {
    const auto p = ProfileFunction::exp_power(1, 1, false);
    CHECK(d(p(0.5L)) == doctest::Approx(0.1353352832366127).epsilon(1e-14));
    CHECK(d(p(-0.5L)) == d(p(0.5L)));
    CHECK(p(0) == 0);
    const auto q = ProfileFunction::exp_power(0.5L, 1, false);
    CHECK(d(q(1)) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(ProfileFunction::exp_power(0.5L, 1)(0) == 0);
  }

  TEST_CASE("exp_power inverse") {
    const auto p = ProfileFunction::exp_power(1, 1, false);
    CHECK(d(p.inverse(std::exp(Real(-4)))) == doctest::Approx(0.25).epsilon(1e-14));
    const auto q = ProfileFunction::exp_power(0.5L, 1);
    CHECK(d(q.inverse(std::exp(Real(-10)))) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(q.inverse(0) == 0);
    CHECK_THROWS_AS(p.inverse(1e6L), Error);
  }

  TEST_CASE("inverse of eval is the identity") {
    for (const auto& p : {ProfileFunction::exp_power(1, 1), ProfileFunction::exp_power(0.5L, 1),
                          ProfileFunction::exp_power(2, 1)}) {
      for (int k = 0; k <= 40; ++k) {
        const Real x = std::pow(Real(10), -8 + 8 * Real(k) / 40);
        const Real y = p(x);
        if (y == 0) continue;
        CHECK(std::fabs(p.inverse(y) / x - 1) < 1e-10L);
      }
    }
  }

  TEST_CASE("convexified exp_power is convex and monotone") {
    const auto p = ProfileFunction::exp_power(1, 1);
    Real prev = -1;
    for (int i = 0; i <= 400; ++i) {
      const Real x = 3 * Real(i) / 400, h = 1e-3L;
      CHECK(p(x) >= prev);
      prev = p(x);
      CHECK(p(x + h) - 2 * p(x) + p(std::fabs(x - h)) >= -1e-15L);
    }
  }

  TEST_CASE("piecewise max") {
    const auto base = ProfileFunction::exp_power(0.5L, 1);
    const auto psi0 = build_piecewise_max(base);
    CHECK(psi0.kind() == ProfileKind::PiecewiseMax);
    for (int j = 2; j <= psi0.chord_levels(); ++j) {
      const Real t = node(j);
      CHECK(std::fabs(psi0(t) / base(t) - 1) < 1e-15L);
      CHECK(psi0(-t) == psi0(t));
      CHECK(std::fabs(psi0.inverse(psi0(t)) - t) < 1e-10L * t);
    }
    for (int j = 1; 2 * j + 1 <= psi0.chord_levels(); ++j) {
      const Real m = (node(2 * j + 1) + node(2 * j)) / 2;
      CHECK(psi0(m) > base(m));
      const Real odd = (node(2 * j + 2) + node(2 * j + 1)) / 2;
      CHECK(psi0(odd) == base(odd));
    }
    for (int k = 4; k < 4 * psi0.chord_levels(); ++k) {
      const Real x = std::ldexp(Real(1), -k / 4) * (1 + Real(k % 4) / 4), h = x / 64;
      const Real sd = psi0(x + h) - 2 * psi0(x) + psi0(x - h);
      CHECK(sd >= -1e-12L * psi0(x));
    }
    CHECK_THROWS_AS(build_piecewise_max(base, 1), Error);
  }

  TEST_CASE("mollifier") {
    const auto& m = Mollifier::standard();
    CHECK(d(m.mass()) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(m.rho(1) == 0);
    CHECK(m.rho(-1.5L) == 0);
    CHECK(m.rho(0.3L) == m.rho(-0.3L));
    const Real mass = integrate_adaptive([&](Real s) { return m.rho(s); }, -1, 1, 1e-14L);
    CHECK(d(mass) == doctest::Approx(1.0).epsilon(1e-10));
  }

  TEST_CASE("mollified profile") {
    const auto base = ProfileFunction::exp_power(0.5L, 1);
    const auto psi0 = build_piecewise_max(base);
    const auto inf = mollify(psi0);
    CHECK(inf.kind() == ProfileKind::Mollified);
    CHECK(inf(0) == 0);
    for (int j = 3; j <= 20; ++j) {
      const Real t = node(j);
      CHECK(inf(t) >= psi0(t));
      CHECK(inf(0.7L * t) == psi0(0.7L * t));
      CHECK(inf(1.3L * t) == psi0(1.3L * t));
      for (int i = 0; i <= 40; ++i) {
        const Real x = t * (0.5L + Real(i) / 40);
        CHECK(inf(x) - psi0(x) >= -1e-12L * psi0(x));
        CHECK(inf(-x) == inf(x));
      }
    }
  }

  TEST_CASE("mollified derivative bounds") {
    // |Psi_inf^(n)| <= 2^(2n+1) C_n Psi(2 t_j) / t_j^n on band j, with C_n the
    // sup of |rho^(n-1)| scaled by the band; the test uses C_n = 10^n.
    const auto base = ProfileFunction::exp_power(0.5L, 1);
    const auto inf = mollify(build_piecewise_max(base));
    for (int j = 3; j <= 8; ++j) {
      const Real t = node(j), h = t / 512;
      const Real bound1 = 8 * 10 * base(2 * t) / t;
      const Real bound2 = 32 * 100 * base(2 * t) / (t * t);
      const Real d1 = (inf(t + h) - inf(t - h)) / (2 * h);
      const Real d2 = (inf(t + h) - 2 * inf(t) + inf(t - h)) / (h * h);
      CHECK(std::fabs(d1) <= bound1);
      CHECK(std::fabs(d2) <= bound2);
    }
  }

  TEST_CASE("mollified derivatives vanish at the origin") {
    const auto inf = mollify(build_piecewise_max(ProfileFunction::exp_power(0.5L, 1)));
    Real prev1 = kInfinity, prev2 = kInfinity;
    for (int k = 8; k <= 24; k += 2) {
      const Real x = node(k), h = x / 64;
      const Real d1 = (inf(x + h) - inf(x - h)) / (2 * h);
      const Real d2 = (inf(x + h) - 2 * inf(x) + inf(x - h)) / (h * h);
      CHECK(d1 < prev1);
      CHECK(d2 < prev2);
      prev1 = d1;
      prev2 = d2;
    }
    CHECK(prev1 < 1e-800L);
    CHECK(prev2 < 1e-800L);
  }

  TEST_CASE("mollified profile is convex") {
    const auto inf = mollify(build_piecewise_max(ProfileFunction::exp_power(0.5L, 1)));
    for (int k = 8; k < 80; ++k) {
      const Real x = std::ldexp(Real(1), -k / 4) * (1 + Real(k % 4) / 4), h = x / 256;
      CHECK(inf(x + h) - 2 * inf(x) + inf(x - h) >= -1e-12L * inf(x));
    }
  }

  TEST_CASE("stubs") {
    const auto flat = ProfileFunction::flat_stub();
    CHECK(flat(3) == 0);
    const auto wedge = ProfileFunction::wedge_stub(2);
    CHECK(wedge(-1.5L) == 3);
    CHECK(d(wedge.inverse(1)) == doctest::Approx(0.5));
    CHECK_THROWS_AS(ProfileFunction::wedge_stub(-1), Error);
  }
}
