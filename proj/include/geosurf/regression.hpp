#pragma once

#include <vector>

namespace geosurf {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  std::vector<double> residuals;
};

/// Ordinary least squares y = slope * x + intercept.
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace geosurf
