#include "rgflow/util.hpp"

#include <cmath>

namespace rgflow {

LineFit fit_line(const std::vector<Real>& x, const std::vector<Real>& y) {
  LineFit fit;
  const std::size_t n = std::min(x.size(), y.size());
  fit.n_points = n;
  if (n < 2) return fit;
  Real sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const Real mx = sx / static_cast<Real>(n), my = sy / static_cast<Real>(n);
  Real sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Real dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

LineFit fit_loglog(const std::vector<Real>& x, const std::vector<Real>& y) {
  std::vector<Real> lx, ly;
  const std::size_t n = std::min(x.size(), y.size());
  lx.reserve(n);
  ly.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  return fit_line(lx, ly);
}

}  // namespace rgflow
