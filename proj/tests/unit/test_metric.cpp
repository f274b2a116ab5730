#include <random>

#include "doctest.h"
#include "halfplane.hpp"
#include "kobvis/distance_grid.hpp"
#include "kobvis/metric.hpp"

using namespace kobvis;

namespace {

double d(Real x) { return static_cast<double>(x); }

DomainOracle exp_domain(ConvexityClass cls = ConvexityClass::Convex) {
  return DomainOracle(ProfileFunction::exp_power(1, 1, false), cls);
}

SampledCurve radial_curve(Real T, int n) {
  SampledCurve c;
  for (int i = 0; i <= n; ++i) {
    const Real t = Real(i) / n;
    c.push_back(t, {0, 0, std::exp(-t * T), 0});
  }
  return c;
}

}  // namespace

TEST_SUITE("metric") {
  TEST_CASE("normal slice is an exact half-plane") {
    const auto dom = exp_domain();
    for (Real b : {1e-3L, 0.1L, 0.5L}) {
      const auto k = kappa_bounds(dom, {0, 0, b, 0}, {0, 0, 1, 0});
      CHECK(d(k.lower) == doctest::Approx(d(1 / (2 * b))).epsilon(1e-12));
      CHECK(d(k.upper) == doctest::Approx(d(1 / (2 * b))).epsilon(1e-12));
    }
  }

  TEST_CASE("tangential sandwich") {
    const Real b = 0.01L;
    const Real inv = ProfileFunction::exp_power(1, 1, false).inverse(b);
    const auto k = kappa_bounds(exp_domain(), {0, 0, b, 0}, {0, 1, 0, 0});
    CHECK(d(k.lower) == doctest::Approx(d(1 / (2 * inv))).epsilon(1e-9));
    CHECK(d(k.upper) == doctest::Approx(d(1 / inv)).epsilon(1e-9));
    const auto kc = kappa_bounds(exp_domain(ConvexityClass::CConvex), {0, 0, b, 0}, {0, 1, 0, 0});
    CHECK(d(kc.lower) == doctest::Approx(d(1 / (4 * inv))).epsilon(1e-9));
    CHECK(d(kc.upper) == doctest::Approx(d(1 / inv)).epsilon(1e-9));
  }

  TEST_CASE("sandwich ratio on random inputs") {
    const auto dom = exp_domain();
    const auto dc = exp_domain(ConvexityClass::CConvex);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(1e-3, 0.5), ud(-1, 1);
    KappaOptions raw;
    raw.slice_refinement = false;
    for (int i = 0; i < 30; ++i) {
      const Real x = ux(rng);
      const CPoint z{x, Real(ud(rng)), dom.profile()(x) + Real(uy(rng)), Real(ud(rng))};
      const CVector v{Real(ud(rng)), Real(ud(rng)), Real(ud(rng)), Real(ud(rng))};
      const auto k = kappa_bounds(dom, z, v, raw);
      CHECK(k.upper == 2 * k.lower);
      const auto kc = kappa_bounds(dc, z, v, raw);
      CHECK(kc.upper == 4 * kc.lower);
    }
    CHECK_THROWS_AS(kappa_bounds(dom, {0, 0, -1, 0}, {1, 0, 0, 0}), Error);
    CHECK_THROWS_AS(kappa_bounds(dom, {0, 0, 1, 0}, {0, 0, 0, 0}), Error);
  }

  TEST_CASE("tangential normal decomposition") {
    const auto dom = exp_domain();
    const CPoint z{0.2L, 0.1L, 0.3L, -0.4L};
    const CPoint p = dom.boundary_project(z);
    const Frame f = dom.normal_tangent_frame(p);
    auto [n1, t1] = decompose_tangential_normal(dom, z, f.eta);
    CHECK((n1 - f.eta).norm() < 1e-12L);
    CHECK(t1.norm() < 1e-12L);
    auto [n2, t2] = decompose_tangential_normal(dom, z, f.X);
    CHECK(n2.norm() < 1e-12L);
    CHECK((t2 - f.X).norm() < 1e-12L);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ud(-1, 1);
    for (int i = 0; i < 20; ++i) {
      const CVector v{Real(ud(rng)), Real(ud(rng)), Real(ud(rng)), Real(ud(rng))};
      auto [vn, vt] = decompose_tangential_normal(dom, z, v);
      CHECK((vn + vt - v).norm() < 1e-12L);
      CHECK(std::abs(hermitian(vn, f.X)) < 1e-12L);
      CHECK(std::abs(hermitian(vt, f.eta)) < 1e-12L);
    }
  }

  TEST_CASE("curve length bounds") {
    const auto dom = exp_domain();
    const Real T = 3;
    const auto c = radial_curve(T, 1024);
    const auto exact = curve_kappa_length_bounds(dom, c);
    CHECK(d(exact.lower) == doctest::Approx(d(T / 2)).epsilon(1e-6));
    CHECK(d(exact.upper) == doctest::Approx(d(T / 2)).epsilon(1e-6));
    KappaOptions raw;
    raw.slice_refinement = false;
    const auto sandwich = curve_kappa_length_bounds(dom, c, raw);
    CHECK(d(sandwich.lower) == doctest::Approx(d(T / 2)).epsilon(1e-6));
    CHECK(d(sandwich.upper) == doctest::Approx(d(T)).epsilon(1e-6));
    SampledCurve single;
    single.push_back(0, {0, 0, 0.5L, 0});
    const auto zero = curve_kappa_length_bounds(dom, single);
    CHECK(zero.lower == 0);
    CHECK(zero.upper == 0);
  }

  TEST_CASE("length additivity") {
    const auto dom = exp_domain();
    SampledCurve c;
    for (int i = 0; i <= 64; ++i) {
      const Real t = Real(i) / 64;
      c.push_back(t, {0.1L * t, t, 0.05L + 0.2L * t * t, 0});
    }
    SampledCurve a, b;
    for (int i = 0; i <= 32; ++i) a.push_back(c.params[i] * 2, c.points[i]);
    for (int i = 32; i <= 64; ++i) b.push_back(c.params[i] * 2 - 1, c.points[i]);
    const auto whole = curve_kappa_length_bounds(dom, c);
    const auto la = curve_kappa_length_bounds(dom, a), lb = curve_kappa_length_bounds(dom, b);
    CHECK(std::fabs(la.lower + lb.lower - whole.lower) < 1e-9L);
    CHECK(std::fabs(la.upper + lb.upper - whole.upper) < 1e-9L);
  }

  TEST_CASE("kdist lower") {
    const auto dom = exp_domain();
    CHECK(kdist_lower(dom, {0, 0, 0.1L, 0}, {0, 2, 0.1L, 0}) == 0);
    const DomainOracle flat(ProfileFunction::flat_stub());
    const CPoint z{0, 0, 1, 0}, w{0, 0, std::exp(Real(-2)), 0};
    CHECK(d(kdist_lower(flat, z, w)) == doctest::Approx(1.0).epsilon(1e-14));
    const DomainOracle flat_c(ProfileFunction::flat_stub(), ConvexityClass::CConvex);
    CHECK(d(kdist_lower(flat_c, z, w)) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(kdist_lower(dom, z, {0, 0, -1, 0}), Error);
  }

  TEST_CASE("exact half-plane distance") {
    CHECK(exact_halfplane_distance({1, 2}, {1, 2}) == 0);
    for (Real T : {0.5L, 2.0L, 7.0L})
      CHECK(d(exact_halfplane_distance({1, 0}, {std::exp(-T), 0})) == doctest::Approx(d(T / 2)).epsilon(1e-12));
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ur(0.01, 3), ui(-2, 2);
    for (int i = 0; i < 20; ++i) {
      const Complex a{Real(ur(rng)), Real(ui(rng))}, b{Real(ur(rng)), Real(ui(rng))};
      CHECK(exact_halfplane_distance(a, b) == doctest::Approx(d(exact_halfplane_distance(b, a))).epsilon(1e-15));
    }
    CHECK_THROWS_AS(exact_halfplane_distance({-1, 0}, {1, 0}), Error);
  }

  TEST_CASE("gromov products from exact distances") {
    auto k = [](Complex a, Complex b) {
      const Real v = exact_halfplane_distance(a, b);
      return BoundInterval{v, v};
    };
    const Complex z{0.3L, 1}, w{0.01L, -0.5L}, o{1, 0};
    const auto g = gromov_from_distances(k(z, o), k(w, o), k(z, w));
    CHECK(g.width() < 1e-15L);
    const Real exact = (exact_halfplane_distance(z, o) + exact_halfplane_distance(w, o) - exact_halfplane_distance(z, w)) / 2;
    CHECK(d(g.lower) == doctest::Approx(d(exact)).epsilon(1e-14));
    const auto self = gromov_from_distances(k(z, o), k(z, o), k(z, z));
    CHECK(d(self.lower) == doctest::Approx(d(exact_halfplane_distance(z, o))).epsilon(1e-14));
    const auto at_base = gromov_from_distances(k(z, z), k(w, z), k(z, w));
    CHECK(at_base.lower == 0);
    CHECK(std::fabs(at_base.upper) < 1e-15L);
  }

  TEST_CASE("common partner inequality with exact distances") {
    // For x on the geodesic [z, w] with (z|x)_o = (w|x)_o:
    // 2 (z|x)_o >= (z|w)_o + k(x, o).
    using testing::from_halfplane;
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> ur(0.01, 2), ui(-2, 2);
    auto gp = [](const CPoint& a, const CPoint& b, const CPoint& o) {
      using testing::halfplane_distance;
      return (halfplane_distance(a, o) + halfplane_distance(b, o) - halfplane_distance(a, b)) / 2;
    };
    for (int i = 0; i < 20; ++i) {
      const CPoint z = from_halfplane({Real(ur(rng)), Real(ui(rng))});
      const CPoint w = from_halfplane({Real(ur(rng)), Real(ui(rng))});
      const CPoint o = from_halfplane({Real(ur(rng)), Real(ui(rng))});
      auto x_at = [&](Real t) { return testing::halfplane_geodesic_point(z, w, t); };
      Real lo = 0, hi = 1;
      for (int k = 0; k < 100; ++k) {
        const Real mid = (lo + hi) / 2;
        (gp(z, x_at(mid), o) > gp(w, x_at(mid), o) ? lo : hi) = mid;
      }
      const CPoint x = x_at(lo);
      CHECK(2 * gp(z, x, o) >= gp(z, w, o) + testing::halfplane_distance(x, o) - 1e-9L);
    }
  }

  TEST_CASE("gromov product bounds on a model slice") {
    const auto dom = exp_domain();
    GridSpec gs;
    gs.h = 0.1L;
    gs.y_min = 1e-4L;
    gs.y_max = 0.8L;
    gs.s_min = -0.5L;
    gs.s_max = 1.5L;
    const DistanceGrid grid(std::make_shared<ModelSlice>(dom), gs);
    const CPoint z{0, 0, 1e-3L, 0}, w{0, 1, 1e-3L, 0}, o{0, 0.5L, 0.5L, 0};
    const auto g = gromov_product_bounds(dom, z, w, o, grid);
    CHECK(g.lower <= g.upper);
    CHECK(g.lower >= 0);
    const auto self = gromov_product_bounds(dom, z, z, o, grid);
    CHECK(self.contains(kdist_lower(dom, z, o), 1e-9L));
  }
}
