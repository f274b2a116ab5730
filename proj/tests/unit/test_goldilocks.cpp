#include "doctest.h"
#include "kobvis/goldilocks.hpp"

using namespace kobvis;

namespace {

double d(Real x) { return static_cast<double>(x); }

Real node(int j) { return std::ldexp(Real(1), -j); }

}  // namespace

TEST_SUITE("goldilocks") {
  TEST_CASE("verdict for a power integrand") {
    const Real eps = 1e-2L;
    const auto v = improper_integral_verdict([](Real x) { return 1 / std::sqrt(x); }, eps);
    CHECK(v.status == VerdictStatus::Convergent);
    CHECK(d(v.value) == doctest::Approx(d(2 * std::sqrt(eps))).epsilon(1e-9));
    CHECK(v.increments.size() == 61);
  }

  TEST_CASE("verdict for 1/(x log^2(1/x))") {
    const Real eps = std::exp(Real(-2));
    const auto v = improper_integral_verdict([](Real x) { const Real l = std::log(1 / x); return 1 / (x * l * l); }, eps);
    CHECK(v.status == VerdictStatus::Convergent);
    CHECK(d(v.value) == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(d(v.growth_rate) == doctest::Approx(2.0).epsilon(0.05));
  }

  TEST_CASE("verdict for 1/(x log(1/x))") {
    const auto v = improper_integral_verdict([](Real x) { return 1 / (x * std::log(1 / x)); }, 1e-2L);
    CHECK(v.status == VerdictStatus::Divergent);
    CHECK(d(v.growth_rate) == doctest::Approx(1.0).epsilon(0.05));
  }

  TEST_CASE("verdict for a non-integrable power") {
    const auto v = improper_integral_verdict([](Real x) { return 1 / (x * std::sqrt(x)); }, 1e-2L);
    CHECK(v.status == VerdictStatus::Divergent);
  }

  TEST_CASE("verdict rejects non-finite integrands") {
    CHECK_THROWS_AS(improper_integral_verdict([](Real) { return std::numeric_limits<Real>::quiet_NaN(); }, 1e-2L),
                    Error);
  }

  TEST_CASE("tangential gauge") {
    const DomainOracle dom(ProfileFunction::exp_power(1, 1, false));
    const CPoint p{0, 0, 0, 0};
    CHECK(d(tangential_gauge(dom, p, std::exp(Real(-4)))) == doctest::Approx(0.25).epsilon(1e-10));
    Real prev = 0;
    for (int k = 20; k >= 2; --k) {
      const Real m = tangential_gauge(dom, p, std::pow(Real(10), -k / 2.0L));
      CHECK(m >= prev);
      prev = m;
    }
    CHECK_THROWS_AS(tangential_gauge(dom, {0, 0, 1, 0}, 1e-3L), Error);
  }

  TEST_CASE("tangential gauge on the mollified domain") {
    const DomainOracle dom(mollify(build_piecewise_max(ProfileFunction::exp_power(0.5L, 1))));
    for (int k = 2; k <= 16; ++k) {
      const Real r = std::pow(Real(10), -k / 2.0L);
      const Real m = tangential_gauge(dom, {0, 0, 0, 0}, r);
      const Real l = std::log(1 / r);
      CHECK(m <= (1 / (l * l)) * (1 + 1e-12L));
      CHECK(std::fabs(m / dom.profile().inverse(r) - 1) < 1e-9L);
    }
  }

  TEST_CASE("gauge shape") {
    const DomainOracle dom(ProfileFunction::exp_power(1, 1, false));
    std::vector<Real> radii;
    for (int i = 0; i <= 30; ++i) radii.push_back(std::pow(Real(10), -8 + 6 * Real(i) / 30));
    const auto rep = gauge_shape_check(dom, {0, 0, 0, 0}, radii);
    CHECK(rep.ok());
    CHECK(rep.values.size() == radii.size());

    const DomainOracle wedge(ProfileFunction::wedge_stub(1));
    std::vector<Real> lin;
    for (int i = 1; i <= 10; ++i) lin.push_back(0.01L * i);
    const auto affine = gauge_shape_check(wedge, {1, 0, 1, 0}, lin);
    CHECK(affine.ok());
    for (std::size_t i = 2; i < affine.values.size(); ++i)
      CHECK(std::fabs(affine.values[i] - 2 * affine.values[i - 1] + affine.values[i - 2]) < 1e-9L);

    std::vector<Real> decreasing{0.1L, 0.01L};
    CHECK_THROWS_AS(gauge_shape_check(dom, {0, 0, 0, 0}, decreasing), Error);
  }

  TEST_CASE("classification of exp_power profiles") {
    const DomainOracle half(ProfileFunction::exp_power(0.5L, 1));
    const auto r = classify_point(half, {0, 0, 0, 0});
    CHECK(r.weakly.status == VerdictStatus::Convergent);
    CHECK(r.weakly_goldilocks);
    CHECK_FALSE(r.strongly_non_goldilocks);

    const DomainOracle one(ProfileFunction::exp_power(1, 1));
    const auto s = classify_point(one, {0, 0, 0, 0});
    CHECK(s.strongly_non.status == VerdictStatus::Divergent);
    CHECK(s.strongly_non_goldilocks);
    CHECK(s.weakly.status != VerdictStatus::Convergent);
    CHECK(s.summary.find("strongly non-Goldilocks") != std::string::npos);

    for (const auto* rep : {&r, &s}) {
      REQUIRE(rep->m_gauge.size() == rep->radii.size());
      for (std::size_t i = 0; i < rep->radii.size(); ++i) {
        CHECK(rep->m_gauge[i] <= rep->weakly_gauge[i] + 1e-9L);
        CHECK(rep->weakly_gauge[i] <= rep->n_gauge[i] + 1e-9L);
      }
    }
    CHECK_THROWS_AS(classify_point(one, {0, 0, 1, 0}), Error);
  }

  TEST_CASE("verdicts are stable across eps") {
    const DomainOracle dom(ProfileFunction::exp_power(2, 1));
    ClassifyOptions a, b;
    b.eps = 1e-3L;
    const auto ra = classify_point(dom, {0, 0, 0, 0}, a);
    const auto rb = classify_point(dom, {0, 0, 0, 0}, b);
    CHECK(ra.strongly_non.status == rb.strongly_non.status);
    CHECK(ra.weakly.status == rb.weakly.status);
    CHECK(ra.summary == rb.summary);
  }

  TEST_CASE("face witness") {
    const DomainOracle psi0(build_piecewise_max(ProfileFunction::exp_power(0.5L, 1)));
    const int j = 2;
    const Real left = node(2 * j + 1), right = node(2 * j), mid = (left + right) / 2;
    const CPoint p{mid, 0, psi0.profile()(mid), 0};
    const auto face = psi0.flat_face_segment(p);
    REQUIRE(face);
    const Real w = face_witness(psi0, p, face->direction);
    CHECK(w >= (right - left) / 4);
    const Real half = face_witness(psi0, p, face->direction, 0.5e-8L);
    CHECK(std::fabs(half / w - 1) < 0.01L);

    const DomainOracle strict(ProfileFunction::exp_power(1, 1, false));
    const Real x = 0.3L;
    const CPoint q{x, 0, strict.profile()(x), 0};
    const CVector X = strict.normal_tangent_frame(q).X;
    const Real w1 = face_witness(strict, q, X, 1e-4L), w2 = face_witness(strict, q, X, 1e-8L);
    CHECK(w2 < w1);
    CHECK(w2 < 1e-3L);
  }
}
