#include "kkmass/fit.hpp"

#include "kkmass/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kkmass {

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("log-log fit needs at least two (x, y) pairs of equal length");
  }
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw InvalidArgument("log-log fit needs strictly positive data");
    }
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  if (sxx == 0.0) throw InvalidArgument("log-log fit with identical abscissae");
  return sxy / sxx;
}

double refinement_order(std::span<const double> steps, std::span<const double> residuals) {
  return loglog_slope(steps, residuals);
}

namespace {

// (R1^-p - R2^-p) / (R2^-p - R3^-p)
double ratio_model(double p, double r1, double r2, double r3) {
  const double a = std::pow(r1, -p), b = std::pow(r2, -p), c = std::pow(r3, -p);
  return (a - b) / (b - c);
}

}  // namespace

Extrapolation extrapolate_power_law(std::span<const double> radii, std::span<const double> values,
                                    double noise) {
  if (radii.size() != values.size() || radii.size() < 3) {
    throw InvalidArgument("extrapolation needs at least three radii");
  }
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] > radii[i - 1])) throw InvalidArgument("radii must be strictly increasing");
  }
  const std::size_t n = radii.size();
  const double r1 = radii[n - 3], r2 = radii[n - 2], r3 = radii[n - 1];
  const double m1 = values[n - 3], m2 = values[n - 2], m3 = values[n - 1];
  const double d1 = m1 - m2, d2 = m2 - m3;
  const double floor = noise * std::max(1.0, std::abs(m3));

  Extrapolation out;
  if (std::abs(d1) <= floor && std::abs(d2) <= floor) {
    out.limit = m3;
    out.exponent = std::numeric_limits<double>::infinity();
    out.error_estimate = std::max(std::abs(d1), std::abs(d2));
    out.status = "exact";
    return out;
  }
  if (d1 * d2 <= 0.0 || std::abs(d2) <= floor) {
    out.limit = m3;
    out.exponent = std::numeric_limits<double>::quiet_NaN();
    out.error_estimate = std::abs(d1) + std::abs(d2);
    out.converged = false;
    out.status = "non-monotone";
    return out;
  }
  const double target = d1 / d2;
  // The model ratio increases monotonically from its p -> 0 limit.
  const double lo_ratio = std::log(r2 / r1) / std::log(r3 / r2);
  if (target <= lo_ratio) {
    out.limit = m3;
    out.exponent = std::numeric_limits<double>::quiet_NaN();
    out.error_estimate = std::abs(d1) + std::abs(d2);
    out.converged = false;
    out.status = "diverging";
    return out;
  }
  double lo = 1e-8, hi = 1.0;
  while (ratio_model(hi, r1, r2, r3) < target && hi < 64.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (ratio_model(mid, r1, r2, r3) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double p = 0.5 * (lo + hi);
  const double c = d2 / (std::pow(r2, -p) - std::pow(r3, -p));
  out.exponent = p;
  out.limit = m3 - c * std::pow(r3, -p);

  double quality = 1.0;
  if (n >= 4) {
    const double r0 = radii[n - 4];
    const double predicted = out.limit + c * std::pow(r0, -p);
    const double scale = std::abs(values[n - 4] - out.limit);
    out.misfit = scale > 0.0 ? std::abs(predicted - values[n - 4]) / scale : 0.0;
    quality += out.misfit;
  }
  out.error_estimate = std::abs(m3 - out.limit) * quality;
  out.status = "converged";
  return out;
}

double pairwise_sum(std::span<const double> values) {
  if (values.empty()) return 0.0;
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace kkmass
