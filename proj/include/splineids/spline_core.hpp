#ifndef SPLINEIDS_SPLINE_CORE_HPP
#define SPLINEIDS_SPLINE_CORE_HPP

#include "splineids/basis.hpp"
#include "splineids/bspline.hpp"
#include "splineids/interpolation.hpp"
#include "splineids/knots.hpp"

#endif  // SPLINEIDS_SPLINE_CORE_HPP
