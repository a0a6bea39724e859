#pragma once

#include "kkmass/fit.hpp"
#include "kkmass/geometry.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace kkmass {

/// Nodes and weights of an n-point Gauss rule for the weight (1 - t^2)^alpha
/// on [-1, 1] (symmetric Gauss-Jacobi), via Golub-Welsch.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_jacobi_symmetric(int points, double alpha);

/// Volume of the unit (k-1)-sphere, 2 pi^{k/2} / Gamma(k/2).
double sphere_volume(int k);

/// Quadrature degrees: Gauss points in each polar angle, trapezoid points in
/// the azimuth and on every fiber circle.
struct QuadratureSpec {
  int polar = 16;
  int azimuthal = 32;
  int fiber = 8;
};

/// Product rule on S_R x X: polar Gauss-Jacobi nodes times trapezoid
/// azimuth for the unit (k-1)-sphere, trapezoid on each fiber circle.
/// Points are scaled to radius R on demand.
class ShellQuadrature {
 public:
  ShellQuadrature(const Chart& chart, const QuadratureSpec& spec);

  int size() const { return static_cast<int>(directions_.size() * fiber_points_.size()); }
  const Chart& chart() const { return chart_; }

  /// Unit outward normal on the Euclidean factor for point i.
  const Vec& direction(int i) const { return directions_[i / fiber_points_.size()]; }

  /// Coordinates of node i on S_R x X.
  Vec point(int i, double radius) const;

  /// Coordinate (Euclidean x flat-fiber) measure of node i at radius R.
  double weight(int i, double radius) const;

  /// Sum of all weights: omega_k R^{k-1} vol(X) up to rounding.
  double total_weight(double radius) const;

  /// Directional nodes and weights on the unit sphere.
  const std::vector<Vec>& sphere_nodes() const { return directions_; }
  const std::vector<double>& sphere_weights() const { return direction_weights_; }

 private:
  Chart chart_;
  std::vector<Vec> directions_;
  std::vector<double> direction_weights_;
  std::vector<Vec> fiber_points_;
  std::vector<double> fiber_weights_;
};

/// Evaluates f(i) for i in [0, count) on `threads` workers with contiguous
/// blocks; results are stored by index, so the output does not depend on
/// the thread count.
template <class F>
std::vector<double> parallel_evaluate(int count, int threads, F&& f) {
  std::vector<double> out(static_cast<std::size_t>(count));
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) out[i] = f(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    const int block = (count + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          const int hi = std::min(count, (t + 1) * block);
          for (int i = t * block; i < hi; ++i) out[i] = f(i);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

/// Weighted shell integral sum_i w_i f(x_i) at radius R with a
/// deterministic pairwise reduction.
template <class F>
double integrate_shell(const ShellQuadrature& quad, double radius, int threads, F&& f) {
  const std::vector<double> terms = parallel_evaluate(quad.size(), threads, [&](int i) {
    return quad.weight(i, radius) * f(quad.point(i, radius), quad.direction(i));
  });
  return pairwise_sum(terms);
}

}  // namespace kkmass
