#include "kkmass/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace kkmass {

GaussRule gauss_jacobi_symmetric(int points, double alpha) {
  if (points < 1) throw InvalidArgument("Gauss rule needs at least one point");
  if (alpha < 0.0) throw InvalidArgument("symmetric Gauss-Jacobi rule implemented for alpha >= 0");
  Mat jacobi = Mat::Zero(points, points);
  for (int k = 1; k < points; ++k) {
    const double beta = k * (k + 2.0 * alpha) / ((2.0 * k + 2.0 * alpha + 1.0) * (2.0 * k + 2.0 * alpha - 1.0));
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(beta);
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(jacobi);
  const double mu0 = std::sqrt(std::numbers::pi) * std::tgamma(alpha + 1.0) / std::tgamma(alpha + 1.5);
  GaussRule rule;
  for (int i = 0; i < points; ++i) {
    rule.nodes.push_back(es.eigenvalues()[i]);
    const double v = es.eigenvectors()(0, i);
    rule.weights.push_back(mu0 * v * v);
  }
  return rule;
}

double sphere_volume(int k) {
  if (k < 1) throw InvalidArgument("sphere dimension must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * k) / std::tgamma(0.5 * k);
}

namespace {

// Unit sphere S^d in R^{d+1}.
void sphere_rule(int d, const QuadratureSpec& spec, std::vector<Vec>& nodes, std::vector<double>& weights) {
  nodes.clear();
  weights.clear();
  if (d == 0) {
    nodes = {Vec::Constant(1, 1.0), Vec::Constant(1, -1.0)};
    weights = {1.0, 1.0};
    return;
  }
  if (d == 1) {
    const int m = spec.azimuthal;
    for (int j = 0; j < m; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / m;
      Vec v(2);
      v << std::cos(phi), std::sin(phi);
      nodes.push_back(v);
      weights.push_back(2.0 * std::numbers::pi / m);
    }
    return;
  }
  std::vector<Vec> lower_nodes;
  std::vector<double> lower_weights;
  sphere_rule(d - 1, spec, lower_nodes, lower_weights);
  const GaussRule polar = gauss_jacobi_symmetric(spec.polar, 0.5 * (d - 2));
  for (std::size_t p = 0; p < polar.nodes.size(); ++p) {
    const double t = polar.nodes[p];
    const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
    for (std::size_t q = 0; q < lower_nodes.size(); ++q) {
      Vec v(d + 1);
      v[0] = t;
      v.tail(d) = s * lower_nodes[q];
      nodes.push_back(v);
      weights.push_back(polar.weights[p] * lower_weights[q]);
    }
  }
}

}  // namespace

ShellQuadrature::ShellQuadrature(const Chart& chart, const QuadratureSpec& spec) : chart_(chart) {
  chart_.validate();
  if (spec.polar < 1 || spec.azimuthal < 1 || spec.fiber < 1) {
    throw InvalidArgument("quadrature degrees must be positive");
  }
  sphere_rule(chart.dim_base - 1, spec, directions_, direction_weights_);

  fiber_points_ = {Vec::Zero(chart.dim_fiber())};
  fiber_weights_ = {1.0};
  for (int a = 0; a < chart.dim_fiber(); ++a) {
    std::vector<Vec> pts;
    std::vector<double> wts;
    const double period = chart.fiber_periods[a];
    for (std::size_t i = 0; i < fiber_points_.size(); ++i) {
      for (int j = 0; j < spec.fiber; ++j) {
        Vec y = fiber_points_[i];
        y[a] = period * j / spec.fiber;
        pts.push_back(y);
        wts.push_back(fiber_weights_[i] * period / spec.fiber);
      }
    }
    fiber_points_ = std::move(pts);
    fiber_weights_ = std::move(wts);
  }
}

Vec ShellQuadrature::point(int i, double radius) const {
  const std::size_t nf = fiber_points_.size();
  Vec x(chart_.dim());
  x.head(chart_.dim_base) = radius * directions_[i / nf];
  x.tail(chart_.dim_fiber()) = fiber_points_[i % nf];
  return x;
}

double ShellQuadrature::weight(int i, double radius) const {
  const std::size_t nf = fiber_points_.size();
  return direction_weights_[i / nf] * std::pow(radius, chart_.dim_base - 1) * fiber_weights_[i % nf];
}

double ShellQuadrature::total_weight(double radius) const {
  std::vector<double> w(size());
  for (int i = 0; i < size(); ++i) w[i] = weight(i, radius);
  return pairwise_sum(w);
}

}  // namespace kkmass
