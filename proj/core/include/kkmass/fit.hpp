#pragma once

#include <span>
#include <string>
#include <vector>

namespace kkmass {

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Observed convergence order of an error sequence under step refinement:
/// the log-log slope of residual against step.
double refinement_order(std::span<const double> steps, std::span<const double> residuals);

/// Power-law extrapolation m(R) = limit + c R^-p from the three largest
/// radii, gated on fit quality.
struct Extrapolation {
  double limit = 0.0;
  double exponent = 0.0;  // +inf when the sequence is flat to noise
  double error_estimate = 0.0;
  double misfit = 0.0;  // relative misfit of the fourth-largest point, if any
  bool converged = true;
  std::string status;  // "converged", "exact", "non-monotone", "diverging"
};

Extrapolation extrapolate_power_law(std::span<const double> radii, std::span<const double> values,
                                    double noise = 1e-13);

/// Sum in a fixed binary-tree order; the result does not depend on how the
/// summands were produced.
double pairwise_sum(std::span<const double> values);

}  // namespace kkmass
