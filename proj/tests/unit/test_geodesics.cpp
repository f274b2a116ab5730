#include <random>

#include "doctest.h"
#include "halfplane.hpp"
#include "kobvis/distance_grid.hpp"
#include "kobvis/geodesics.hpp"
#include "kobvis/metric.hpp"

using namespace kobvis;

namespace {

double d(Real x) { return static_cast<double>(x); }

Real closed_form_depth(Real f0) { return std::exp(-std::log(1 / f0) / std::exp(Real(1))); }

using testing::halfplane_distance;

GromovFn exact_gromov(const CPoint& o) {
  return [o](const CPoint& a, const CPoint& b) {
    const Real g = (halfplane_distance(a, o) + halfplane_distance(b, o) - halfplane_distance(a, b)) / 2;
    return BoundInterval{g, g};
  };
}

SampledCurve arc(const CPoint& z, const CPoint& w, Real bulge, int n = 256) {
  SampledCurve c;
  for (int i = 0; i <= n; ++i) {
    const Real t = Real(i) / n;
    const Real y = std::exp((1 - t) * std::log(z.re2) + t * std::log(w.re2)) + bulge * 4 * t * (1 - t);
    c.push_back(t, {0, z.im1 + t * (w.im1 - z.im1), y, 0});
  }
  return c;
}

}  // namespace

TEST_SUITE("geodesics") {
  TEST_CASE("tangential curve matches the closed form") {
    const DomainOracle dom(ProfileFunction::exp_power(1, 1));
    const auto c = construct_tangential_geodesic(dom, 1, 1e-6L);
    REQUIRE(c.size() >= 513);
    CHECK(c.params.front() == 0);
    CHECK(c.params.back() == 1);
    const Real D = c.points.back().re2;
    CHECK(std::fabs(D / closed_form_depth(1e-6L) - 1) < 1e-4L);
    CHECK(c.max_residual <= 1e-6L);
    for (std::size_t i = 1; i < c.size(); ++i) {
      CHECK(c.points[i].re2 > c.points[i - 1].re2);
      CHECK(c.params[i] > c.params[i - 1]);
      CHECK(dom.contains(c.points[i]));
    }
    CHECK(d(c.points.back().im1) == doctest::Approx(1.0));
  }

  TEST_CASE("convergent regime escapes") {
    const DomainOracle dom(ProfileFunction::exp_power(0.5L, 1));
    try {
      construct_tangential_geodesic(dom, 1, 1e-6L);
      FAIL("expected escape");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EscapedDepthCap);
    }
    CHECK(predicted_terminal_depth(dom.profile(), 1, 1e-9L).flag == DepthFlag::Escaped);
  }

  TEST_CASE("bad parameters") {
    const DomainOracle dom(ProfileFunction::exp_power(1, 1));
    CHECK_THROWS_AS(construct_tangential_geodesic(dom, -1, 1e-6L), Error);
    CHECK_THROWS_AS(construct_tangential_geodesic(dom, 1, 0), Error);
    CHECK_THROWS_AS(predicted_terminal_depth(dom.profile(), 0, 1e-6L), Error);
  }

  TEST_CASE("predicted terminal depth") {
    const auto p = ProfileFunction::exp_power(1, 1);
    const auto t = predicted_terminal_depth(p, 1, 1e-6L);
    CHECK(t.flag == DepthFlag::Reached);
    CHECK(std::fabs(t.D / closed_form_depth(1e-6L) - 1) < 1e-6L);
    Real prev = kInfinity;
    for (int k = 3; k <= 12; ++k) {
      const Real f0 = std::pow(Real(10), -k);
      const auto tk = predicted_terminal_depth(p, 1, f0);
      CHECK(tk.flag == DepthFlag::Reached);
      CHECK(tk.D < prev);
      CHECK(tk.D > f0);
      CHECK(std::fabs(tk.D / closed_form_depth(f0) - 1) < 1e-6L);
      prev = tk.D;
    }
  }

  TEST_CASE("ODE and integral equation agree") {
    const DomainOracle dom(ProfileFunction::exp_power(2, 1));
    for (Real f0 : {1e-3L, 1e-6L}) {
      const auto c = construct_tangential_geodesic(dom, 1, f0);
      const auto t = predicted_terminal_depth(dom.profile(), 1, f0);
      CHECK(std::fabs(c.points.back().re2 / t.D - 1) <= 1e-6L);
    }
  }

  TEST_CASE("radial half-plane curve certifies at lambda 1") {
    const DomainOracle dom(ProfileFunction::exp_power(1, 1));
    SampledCurve c;
    for (int i = 0; i <= 256; ++i) {
      const Real t = Real(i) / 256;
      c.push_back(t, {0, 0, 0.5L * std::exp(-3 * t), 0});
    }
    const auto cert = certify_lambda_geodesic(dom, c, 1, 0, 16);
    CHECK(cert.status == CertificateStatus::Certified);
    CHECK(cert.observed_sup_ratio <= 1 + 1e-9L);
    CHECK_THROWS_AS(certify_lambda_geodesic(dom, c, 1, 0, 4), Error);
  }

  TEST_CASE("certificates are monotone in lambda") {
    const DomainOracle dom(ProfileFunction::exp_power(1, 1));
    const auto c = construct_tangential_geodesic(dom, 1, 1e-3L);
    const auto cert = certify_lambda_geodesic(dom, c, 4 * kCertificationSlack, 0, 16);
    CHECK(cert.status == CertificateStatus::Certified);
    const auto looser = certify_lambda_geodesic(dom, c, 5, 0, 16);
    CHECK(looser.status == CertificateStatus::Certified);
    const auto tight = certify_lambda_geodesic(dom, c, 0.5L, 0, 16);
    CHECK(tight.status != CertificateStatus::Certified);
  }

  TEST_CASE("max boundary distance") {
    const DomainOracle dom(ProfileFunction::exp_power(1, 1));
    Real prev = kInfinity;
    for (Real f0 : {1e-4L, 1e-6L, 1e-8L}) {
      const auto c = construct_tangential_geodesic(dom, 1, f0);
      const Real m = max_boundary_distance(dom, c);
      CHECK(m <= c.points.back().re2 * (1 + 1e-12L));
      CHECK(m < prev);
      prev = m;
    }
    SampledCurve single;
    single.push_back(0, {0, 0, 0.3L, 0});
    CHECK(max_boundary_distance(dom, single) == dom.boundary_distance({0, 0, 0.3L, 0}));
  }

  TEST_CASE("balanced parameter on a symmetric half-plane configuration") {
    const CPoint z{0, -1, 0.01L, 0}, w{0, 1, 0.01L, 0}, o{0, 0, 1, 0};
    const auto c = arc(z, w, 0.5L);
    const auto b = find_balanced_parameter(c, z, w, exact_gromov(o));
    CHECK(d(b.tau) == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(b.h_at_start >= 1);
    CHECK(b.h_at_end <= 1);
  }

  TEST_CASE("balanced point inequality with exact distances") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> us(-2, 2), uy(-8, 0);
    for (int i = 0; i < 20; ++i) {
      const CPoint z{0, Real(us(rng)), std::exp(Real(uy(rng))), 0}, w{0, Real(us(rng)), std::exp(Real(uy(rng))), 0};
      const CPoint o{0, Real(us(rng)), std::exp(Real(uy(rng)) / 4), 0};
      const auto c = testing::halfplane_geodesic(z, w, 4096);
      const auto g = exact_gromov(o);
      const auto b = find_balanced_parameter(c, z, w, g, 1e-15L);
      CHECK(b.h_at_start >= 1 - 1e-12L);
      CHECK(b.h_at_end <= 1 + 1e-12L);
      const Real zx = g(z, b.x).lower, zw = g(z, w).lower;
      CHECK(2 * zx >= zw + halfplane_distance(b.x, o) - 1e-9L);
    }
  }

  TEST_CASE("curve point interpolates the polyline") {
    SampledCurve c;
    c.push_back(0, {0, 0, 1, 0});
    c.push_back(1, {0, 2, 3, 0});
    const CPoint m = curve_point(c, 0.25L);
    CHECK(d(m.im1) == doctest::Approx(0.5));
    CHECK(d(m.re2) == doctest::Approx(1.5));
  }
}
