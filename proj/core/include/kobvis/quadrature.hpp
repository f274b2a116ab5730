#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cstddef>
#include <span>
#include <vector>

#include "kobvis/types.hpp"

namespace kobvis {

struct GaussRule {
  std::vector<Real> nodes;    // on [-1, 1]
  std::vector<Real> weights;
};

/// Gauss-Legendre rule with n points, computed once per n and cached.
const GaussRule& gauss_legendre(std::size_t n);

/// Fixed-order Gauss-Legendre on [a, b].
template <class F>
Real integrate_fixed(const F& f, Real a, Real b, std::size_t n = 64) {
  const GaussRule& rule = gauss_legendre(n);
  const Real half = (b - a) / 2;
  const Real mid = (a + b) / 2;
  Real sum = 0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return sum * half;
}

/// Adaptive Gauss-Kronrod (15 point) on a finite interval.
template <class F>
Real integrate_adaptive(const F& f, Real a, Real b, Real rel_tol = 1e-12L, unsigned max_depth = 30) {
  if (a == b) return 0;
  Real err = 0;
  return boost::math::quadrature::gauss_kronrod<Real, 15>::integrate(f, a, b, max_depth, rel_tol, &err);
}

}  // namespace kobvis
