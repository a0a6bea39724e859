#include "kkmass/models.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numbers>

namespace kkmass {

double ModelSpec::get(const std::string& key, double fallback) const {
  auto it = parameters.find(key);
  return it == parameters.end() ? fallback : it->second;
}

double rn_horizon(double m, double q2) {
  if (!std::isfinite(m) || !std::isfinite(q2)) throw InvalidArgument("Reissner-Nordstrom parameters must be finite");
  if (q2 < 0.0) throw InvalidArgument("q^2 < 0: r_+ = m + sqrt(m^2 + q^2) would not be real for all m");
  const double rp = m + std::sqrt(m * m + q2);
  if (!(rp > 0.0)) throw InvalidArgument("r_+ = m + sqrt(m^2 + q^2) must be positive");
  return rp;
}

double rn_circle_length(double m, double q2) {
  const double rp = rn_horizon(m, q2);
  return 2.0 * std::numbers::pi * rp * rp / (rp - m);
}

double rn_mass_closed_form(double m, double q2) {
  const double rp = rn_horizon(m, q2);
  return 0.5 * m * (rp - m) / (2.0 * std::numbers::pi * rp * rp);
}

double rn_charge_for_circle(double m, double length) {
  if (!(length > 0.0)) throw InvalidArgument("circle length must be positive");
  const double ell = length / (2.0 * std::numbers::pi);
  const double disc = ell * ell - 4.0 * m * ell;
  if (disc < 0.0) throw InvalidArgument("no soliton with this circle length for the given m");
  const double s = 0.5 * ((ell - 2.0 * m) + std::sqrt(disc));  // s = r_+ - m
  const double q2 = s * s - m * m;
  if (q2 < 0.0 || !(m + s > 0.0)) throw InvalidArgument("no soliton with this circle length for the given m");
  return q2;
}

Mat anisotropic_shape(int n) {
  Mat s(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) s(a, b) = a == b ? 1.0 + 0.1 * a : 0.3 * std::cos(1.3 * (a + b) + 0.5);
  return s;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Mat> zero_gradient(int n) { return std::vector<Mat>(n, Mat::Zero(n, n)); }

MetricField flat_model(int k, std::vector<double> periods, double r_min) {
  Chart chart{k, std::move(periods), r_min};
  const int n = chart.dim();
  return MetricField(
      chart, [n](const Vec&) { return Mat(Mat::Identity(n, n)); }, Mat(Mat::Identity(n, n)), kInf,
      [n](const Vec&) { return zero_gradient(n); });
}

MetricField schwarzschild_model(const ModelSpec& spec) {
  const double mass = spec.get("m", 1.0);
  double r_min = spec.get("r_min", mass >= 0.0 ? 0.0 : 0.75 * std::abs(mass));
  if (mass < 0.0 && r_min <= 0.5 * std::abs(mass)) {
    throw InvalidArgument("schwarzschild_slice with m < 0 needs r_min > |m|/2");
  }
  Chart chart{3, spec.fiber_periods, r_min};
  const int n = chart.dim();
  auto metric = [mass, n](const Vec& x) {
    const double r = x.head(3).norm();
    const double psi = 1.0 + mass / (2.0 * r);
    Mat g = Mat::Identity(n, n);
    g.topLeftCorner(3, 3) *= std::pow(psi, 4);
    return g;
  };
  auto gradient = [mass, n](const Vec& x) {
    const double r = x.head(3).norm();
    const double psi = 1.0 + mass / (2.0 * r);
    std::vector<Mat> dg = zero_gradient(n);
    for (int c = 0; c < 3; ++c) {
      const double dpsi = -mass * x[c] / (2.0 * r * r * r);
      dg[c].topLeftCorner(3, 3) = Mat::Identity(3, 3) * (4.0 * psi * psi * psi * dpsi);
    }
    return dg;
  };
  return MetricField(chart, metric, Mat(Mat::Identity(n, n)), 1.0, gradient);
}

// Euclidean Reissner-Nordstrom in coordinates (x1, x2, x3, theta):
// g = delta + (1/V - 1) n n on R^3, g_theta_theta = V, V = 1 - 2m/r - q^2/r^2.
MetricField rn_model(const ModelSpec& spec) {
  const double mass = spec.get("m", 1.0);
  double q2 = spec.get("q2", std::numeric_limits<double>::quiet_NaN());
  if (std::isnan(q2)) {
    const double q = spec.get("q", 1.0);
    q2 = q * q;
  }
  const double margin = spec.get("margin", 0.1);
  if (!(margin > 0.0)) throw InvalidArgument("euclidean_rn margin must be positive");
  const double rp = rn_horizon(mass, q2);
  const double length = rn_circle_length(mass, q2);
  if (!spec.fiber_periods.empty()) {
    throw InvalidArgument("euclidean_rn fixes its own circle period 2 pi r_+^2/(r_+ - m)");
  }
  Chart chart{3, {length}, rp * (1.0 + margin)};

  auto metric = [mass, q2](const Vec& x) {
    const Eigen::Vector3d p = x.head(3);
    const double r = p.norm();
    const double v = 1.0 - 2.0 * mass / r - q2 / (r * r);
    const Eigen::Vector3d nrm = p / r;
    Mat g = Mat::Identity(4, 4);
    g.topLeftCorner(3, 3) += (1.0 / v - 1.0) * nrm * nrm.transpose();
    g(3, 3) = v;
    return g;
  };
  auto gradient = [mass, q2](const Vec& x) {
    const Eigen::Vector3d p = x.head(3);
    const double r = p.norm();
    const double v = 1.0 - 2.0 * mass / r - q2 / (r * r);
    const double dv = 2.0 * mass / (r * r) + 2.0 * q2 / (r * r * r);
    const double f = 1.0 / v - 1.0;
    const double df = -dv / (v * v);
    const Eigen::Vector3d nrm = p / r;
    std::vector<Mat> dg = zero_gradient(4);
    for (int c = 0; c < 3; ++c) {
      Eigen::Matrix3d block = df * nrm[c] * nrm * nrm.transpose();
      Eigen::Vector3d dn = -nrm[c] * nrm / r;
      dn[c] += 1.0 / r;
      block += f * (dn * nrm.transpose() + nrm * dn.transpose());
      dg[c].topLeftCorner(3, 3) = block;
      dg[c](3, 3) = dv * nrm[c];
    }
    return dg;
  };
  return MetricField(chart, metric, Mat(Mat::Identity(4, 4)), 1.0, gradient);
}

MetricField perturbed_model(const ModelSpec& spec) {
  const int k = static_cast<int>(spec.get("k", 3));
  const double eps = spec.get("epsilon", 0.1);
  const double tau = spec.get("tau", 2.0);
  const double r_min = spec.get("r_min", 1.0);
  if (!(tau > 0.0)) throw InvalidArgument("perturbed_product needs tau > 0");
  if (!(r_min > 0.0)) throw InvalidArgument("perturbed_product needs r_min > 0");
  Chart chart{k, spec.fiber_periods, r_min};
  chart.validate();
  const int n = chart.dim();
  const PerturbationShape shape = spec.shape;
  if ((shape == PerturbationShape::Mixing || shape == PerturbationShape::FiberOnly) && chart.dim_fiber() == 0) {
    throw InvalidArgument("mixing and fiber_only perturbations need a fiber");
  }
  const Mat aniso = anisotropic_shape(n);

  double shape_norm = 1.0;
  if (shape == PerturbationShape::Anisotropic) {
    shape_norm = Eigen::SelfAdjointEigenSolver<Mat>(aniso).eigenvalues().cwiseAbs().maxCoeff();
  }
  if (!(std::abs(eps) * std::pow(r_min, -tau) * shape_norm < 1.0)) {
    throw InvalidArgument("perturbed_product: epsilon too large for positive definiteness on the chart");
  }

  // S(x) and its coordinate derivatives
  auto shape_at = [=](const Vec& x) {
    Mat s = Mat::Zero(n, n);
    switch (shape) {
      case PerturbationShape::PureTrace: s = Mat::Identity(n, n); break;
      case PerturbationShape::FiberOnly: s.bottomRightCorner(n - k, n - k) = Mat::Identity(n - k, n - k); break;
      case PerturbationShape::Anisotropic: s = aniso; break;
      case PerturbationShape::Mixing: {
        const Vec nrm = x.head(k) / x.head(k).norm();
        for (int i = 0; i < k; ++i) s(i, k) = s(k, i) = nrm[i];
        break;
      }
    }
    return s;
  };
  auto metric = [=](const Vec& x) {
    const double r = x.head(k).norm();
    return Mat(Mat::Identity(n, n) + eps * std::pow(r, -tau) * shape_at(x));
  };
  auto gradient = [=](const Vec& x) {
    const double r = x.head(k).norm();
    const double w = eps * std::pow(r, -tau);
    const Mat s = shape_at(x);
    std::vector<Mat> dg = zero_gradient(n);
    for (int c = 0; c < k; ++c) {
      dg[c] = (-tau * w * x[c] / (r * r)) * s;
      if (shape == PerturbationShape::Mixing) {
        const Vec nrm = x.head(k) / r;
        for (int i = 0; i < k; ++i) {
          const double dn = ((i == c ? 1.0 : 0.0) - nrm[c] * nrm[i]) / r;
          dg[c](i, k) += w * dn;
          dg[c](k, i) += w * dn;
        }
      }
    }
    return dg;
  };
  return MetricField(chart, metric, Mat(Mat::Identity(n, n)), tau, gradient);
}

}  // namespace

MetricField build_model(const ModelSpec& spec) {
  switch (spec.name) {
    case ModelName::Flat: {
      if (!spec.fiber_periods.empty()) throw InvalidArgument("flat model has no fiber; use product_flat");
      return flat_model(static_cast<int>(spec.get("k", 3)), {}, spec.get("r_min", 0.0));
    }
    case ModelName::ProductFlat:
      return flat_model(static_cast<int>(spec.get("k", 3)), spec.fiber_periods, spec.get("r_min", 0.0));
    case ModelName::SchwarzschildSlice: return schwarzschild_model(spec);
    case ModelName::EuclideanRN: return rn_model(spec);
    case ModelName::PerturbedProduct: return perturbed_model(spec);
  }
  throw InvalidArgument("unknown model");
}

ModelName parse_model_name(const std::string& s) {
  if (s == "flat") return ModelName::Flat;
  if (s == "product_flat") return ModelName::ProductFlat;
  if (s == "schwarzschild_slice") return ModelName::SchwarzschildSlice;
  if (s == "euclidean_rn") return ModelName::EuclideanRN;
  if (s == "perturbed_product") return ModelName::PerturbedProduct;
  throw InvalidArgument("unknown model name '" + s + "'");
}

std::string to_string(ModelName name) {
  switch (name) {
    case ModelName::Flat: return "flat";
    case ModelName::ProductFlat: return "product_flat";
    case ModelName::SchwarzschildSlice: return "schwarzschild_slice";
    case ModelName::EuclideanRN: return "euclidean_rn";
    case ModelName::PerturbedProduct: return "perturbed_product";
  }
  return "unknown";
}

PerturbationShape parse_shape(const std::string& s) {
  if (s == "pure_trace") return PerturbationShape::PureTrace;
  if (s == "mixing") return PerturbationShape::Mixing;
  if (s == "fiber_only") return PerturbationShape::FiberOnly;
  if (s == "anisotropic") return PerturbationShape::Anisotropic;
  throw InvalidArgument("unknown perturbation shape '" + s + "'");
}

std::string to_string(PerturbationShape shape) {
  switch (shape) {
    case PerturbationShape::PureTrace: return "pure_trace";
    case PerturbationShape::Mixing: return "mixing";
    case PerturbationShape::FiberOnly: return "fiber_only";
    case PerturbationShape::Anisotropic: return "anisotropic";
  }
  return "unknown";
}

}  // namespace kkmass
