#pragma once

#include "kobvis/curve.hpp"
#include "kobvis/distance_grid.hpp"
#include "kobvis/experiments.hpp"
#include "kobvis/geodesics.hpp"
#include "kobvis/geometry.hpp"
#include "kobvis/goldilocks.hpp"
#include "kobvis/metric.hpp"
#include "kobvis/profiles.hpp"
#include "kobvis/quadrature.hpp"
#include "kobvis/types.hpp"
