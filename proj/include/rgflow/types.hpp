#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace rgflow {

using Real = double;
using Complex = std::complex<double>;
using ArrayXr = Eigen::ArrayXd;
using ArrayXc = Eigen::ArrayXcd;
using Index = Eigen::Index;

/// Thrown when a numerical procedure fails (non-convergence, blow-up,
/// analyticity-region violation).  CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when the solution leaves the declared analyticity region of F.
class AnalyticityError : public NumericalError {
 public:
  explicit AnalyticityError(const std::string& what) : NumericalError(what) {}
};

}  // namespace rgflow
