#pragma once

#include "rgflow/types.hpp"

#include <limits>
#include <vector>

namespace rgflow {

struct LineFit {
  Real slope = std::numeric_limits<Real>::quiet_NaN();
  Real intercept = std::numeric_limits<Real>::quiet_NaN();
  Real r2 = std::numeric_limits<Real>::quiet_NaN();
  std::size_t n_points = 0;
};

/// Least-squares line through (x_i, y_i).  Needs at least 2 points.
LineFit fit_line(const std::vector<Real>& x, const std::vector<Real>& y);

/// Least-squares line through (log x_i, log y_i); pairs with a non-positive
/// coordinate are skipped.
LineFit fit_loglog(const std::vector<Real>& x, const std::vector<Real>& y);

}  // namespace rgflow
