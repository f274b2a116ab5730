#include <random>

#include "doctest.h"
#include "kobvis/geometry.hpp"

using namespace kobvis;

namespace {

DomainOracle exp_domain() { return DomainOracle(ProfileFunction::exp_power(1, 1, false)); }

Real brute_directional(const DomainOracle& dom, const CPoint& z, const CVector& v, int phases) {
  // Smallest |alpha| over rays alpha = t e^{i theta}, each found by bisection.
  Real best = kInfinity;
  for (int i = 0; i < phases; ++i) {
    const Real th = 2 * kPi * i / phases;
    const CVector w = Complex(std::cos(th), std::sin(th)) * v;
    auto inside = [&](Real t) { return dom.contains(z + t * w); };
    Real hi = 1;
    while (inside(hi) && hi < 100) hi *= 2;
    if (inside(hi)) continue;
    Real lo = 0;
    for (int k = 0; k < 80; ++k) {
      const Real mid = (lo + hi) / 2;
      (inside(mid) ? lo : hi) = mid;
    }
    best = std::min(best, hi);
  }
  return best;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("contains") {
    const auto dom = exp_domain();
    CHECK(dom.contains({0, 0, 1, 0}));
    CHECK_FALSE(dom.contains({0, 0, 0, 0}));
    CHECK_FALSE(dom.contains({1, 0, std::exp(-1.0L) / 2, 0}));
    CHECK(dom.contains({1, 5, std::exp(-1.0L) * 1.01L, -3}));
  }

  TEST_CASE("boundary distance") {
    const auto dom = exp_domain();
    for (Real b : {1e-4L, 1e-2L, 0.1L, 0.5L}) {
      const CPoint z{0, 0, b, 0};
      const Real d = dom.boundary_distance(z);
      CHECK(d <= b + 1e-15L);
      const Real x = 0.5L;
      CHECK(d <= std::hypot(x, b - dom.profile()(x)) + 1e-15L);
    }
    const DomainOracle flat(ProfileFunction::flat_stub());
    CHECK(flat.boundary_distance({3, 1, 0.7L, 2}) == doctest::Approx(0.7));
    CHECK_THROWS_AS(dom.boundary_distance({0, 0, -1, 0}), Error);
  }

  TEST_CASE("directional distance closed forms") {
    const auto dom = exp_domain();
    const Real b = 0.01L;
    const CPoint z{0, 0, b, 0};
    CHECK(static_cast<double>(dom.directional_distance(z, {0, 1, 0, 0})) ==
          doctest::Approx(static_cast<double>(dom.profile().inverse(b))).epsilon(1e-10));
    CHECK(static_cast<double>(dom.directional_distance(z, {0, 0, 1, 0})) == doctest::Approx(0.01).epsilon(1e-10));
    CHECK_THROWS_AS(dom.directional_distance(z, {0, 0, 0, 0}), Error);
  }

  TEST_CASE("directional distance against brute force phases") {
    const auto dom = exp_domain();
    const CPoint z{0, 0, 0.5L, 0};
    const Real s = 1 / std::sqrt(Real(2));
    const CVector v{s, 0, s, 0};
    const Real fast = dom.directional_distance(z, v);
    const Real generic = dom.directional_distance_generic(z, v);
    const Real brute = brute_directional(dom, z, v, 10000);
    CHECK(static_cast<double>(fast) == doctest::Approx(static_cast<double>(brute)).epsilon(1e-6));
    CHECK(static_cast<double>(generic) == doctest::Approx(static_cast<double>(brute)).epsilon(1e-6));

    const CVector w = CVector{0.6L, 0.3L, 0.2L, -0.7L}.normalized();
    const CPoint y{0.1L, 0.4L, 0.3L, 0.2L};
    CHECK(static_cast<double>(dom.directional_distance(y, w)) ==
          doctest::Approx(static_cast<double>(brute_directional(dom, y, w, 4000))).epsilon(1e-3));
  }

  TEST_CASE("boundary projection") {
    const auto dom = exp_domain();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(-0.8, 0.8), uy(0.0, 0.6), ui(-2, 2);
    int tested = 0;
    while (tested < 100) {
      const Real x = ux(rng);
      const CPoint z{x, Real(ui(rng)), dom.profile()(x) + Real(uy(rng)) + 1e-6L, Real(ui(rng))};
      const CPoint p = dom.boundary_project(z);
      CHECK(dom.on_boundary(p));
      CHECK(static_cast<double>(distance(z, p)) ==
            doctest::Approx(static_cast<double>(dom.boundary_distance(z))).epsilon(1e-9));
      ++tested;
    }
    const DomainOracle flat(ProfileFunction::flat_stub());
    const CPoint q = flat.boundary_project({0.3L, 1, 0.4L, 2});
    CHECK(q.re1 == doctest::Approx(0.3));
    CHECK(q.re2 == doctest::Approx(0.0));
  }

  TEST_CASE("frame") {
    const auto dom = exp_domain();
    const Frame f = dom.normal_tangent_frame({0, 0, 0, 0});
    CHECK(f.eta.re2 == doctest::Approx(1.0));
    CHECK(f.X.re1 == doctest::Approx(1.0));
    CHECK(std::abs(hermitian(f.eta, f.X)) < 1e-15L);

    const DomainOracle wedge(ProfileFunction::wedge_stub(1));
    CHECK_THROWS_AS(wedge.normal_tangent_frame({0, 0, 0, 0}), Error);
    try {
      wedge.normal_tangent_frame({0, 0, 0, 0});
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonSmoothPoint);
    }
    CHECK_THROWS_AS(dom.normal_tangent_frame({0, 0, 1, 0}), Error);
  }

  TEST_CASE("faces") {
    const auto dom = exp_domain();
    const auto face = dom.face_segment({0, 0, 0, 0});
    REQUIRE(face);
    CHECK(std::fabs(face->direction.im1) == doctest::Approx(1.0));
    CHECK_FALSE(dom.flat_face_segment({1, 0, std::exp(-1.0L), 0}));

    const auto base = ProfileFunction::exp_power(0.5L, 1);
    const DomainOracle psi0(build_piecewise_max(base, 12));
    const Real left = std::ldexp(Real(1), -5), right = std::ldexp(Real(1), -4);
    const Real mid = (left + right) / 2;
    const CPoint p{mid, 0, psi0.profile()(mid), 0};
    const auto flat = psi0.flat_face_segment(p);
    REQUIRE(flat);
    const Real m = (base(right) - base(left)) / (right - left);
    const Real n = std::hypot(Real(1), m);
    CHECK(std::fabs(flat->direction.re1) == doctest::Approx(static_cast<double>(1 / n)).epsilon(1e-9));
    CHECK(std::fabs(flat->direction.re2) == doctest::Approx(static_cast<double>(m / n)).epsilon(1e-6));
    const Frame fp = psi0.normal_tangent_frame(p);
    CHECK(static_cast<double>(fp.X.re2 / fp.X.re1) == doctest::Approx(static_cast<double>(m)).epsilon(1e-6));
  }

  TEST_CASE("invariants on random points") {
    const auto dom = exp_domain();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(1e-3, 0.4), ud(-1, 1);
    for (int i = 0; i < 40; ++i) {
      const Real x = ux(rng);
      const CPoint z{x, Real(ud(rng)), dom.profile()(x) + Real(uy(rng)), Real(ud(rng))};
      const CVector v = CVector{Real(ud(rng)), Real(ud(rng)), Real(ud(rng)), Real(ud(rng))}.normalized();
      CHECK(dom.directional_distance(z, v) >= dom.boundary_distance(z) * (1 - 1e-12L));
      const Real x2 = ux(rng);
      const CPoint w{x2, Real(ud(rng)), dom.profile()(x2) + Real(uy(rng)), Real(ud(rng))};
      for (Real t : {0.25L, 0.5L, 0.75L}) CHECK(dom.contains(z + t * (w - z)));
    }
  }

  TEST_CASE("minimum over sampled directions approaches the boundary distance") {
    const auto dom = exp_domain();
    for (Real b : {1e-3L, 1e-2L, 0.1L}) {
      const CPoint z{0, 0.3L, b, -0.2L};
      Real best = kInfinity;
      for (int i = 0; i < 8; ++i) {
        for (int k = 0; k < 8; ++k) {
          const Real a = kPi / 2 * i / 7, phi = 2 * kPi * k / 8;
          const CVector v{std::cos(a), 0, std::sin(a) * std::cos(phi), std::sin(a) * std::sin(phi)};
          best = std::min(best, dom.directional_distance(z, v));
        }
      }
      CHECK(best <= dom.boundary_distance(z) * 1.02L);
    }
  }
}
