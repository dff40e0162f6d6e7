#pragma once

// Umbrella header for the geostrain library: distances of a deformation
// gradient to the rotation group, both Euclidean and geodesic, with the
// supporting small-matrix kernel, metric, geodesic solver and field
// evaluation utilities.

#include "geostrain/eigen_sym.hpp"
#include "geostrain/field.hpp"
#include "geostrain/geodesic.hpp"
#include "geostrain/matrix.hpp"
#include "geostrain/matrix_functions.hpp"
#include "geostrain/metric.hpp"
#include "geostrain/quadrature.hpp"
#include "geostrain/random.hpp"
#include "geostrain/rotation_search.hpp"
#include "geostrain/strain.hpp"
#include "geostrain/tolerances.hpp"
#include "geostrain/types.hpp"
#include "geostrain/version.hpp"
