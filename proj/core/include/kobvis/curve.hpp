#pragma once

#include <string>
#include <vector>

#include "kobvis/types.hpp"

namespace kobvis {

/// A polyline in C^2 with strictly increasing parameters.
struct SampledCurve {
  std::vector<Real> params;
  std::vector<CPoint> points;

  // Construction metadata; zero for user polylines.
  std::string kind = "polyline";
  Real c = 0, f0 = 0, span = 0;
  Real max_residual = 0;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  void push_back(Real t, const CPoint& p) {
    params.push_back(t);
    points.push_back(p);
  }
};

}  // namespace kobvis
