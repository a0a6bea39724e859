#pragma once

#include "kkmass/types.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace kkmass {

/// Coordinate chart on an end (R^k - B) x X.
///
/// Coordinates are ordered Euclidean factor first (indices i, j), then fiber
/// (indices alpha); a, b run over everything. Fibers are flat circles/tori
/// in arclength coordinates, so the fiber volume is the product of periods.
struct Chart {
  int dim_base = 3;
  std::vector<double> fiber_periods;
  double r_min = 0.0;  // exterior region r > r_min on the Euclidean factor
  double r_max = std::numeric_limits<double>::infinity();

  int dim_fiber() const { return static_cast<int>(fiber_periods.size()); }
  int dim() const { return dim_base + dim_fiber(); }
  double fiber_volume() const;

  /// Euclidean distance to the origin of the R^k factor.
  double base_radius(const Vec& x) const;
  bool contains(const Vec& x) const;

  /// Throws InvalidArgument when the chart itself is malformed.
  void validate() const;
};

/// Step-size policy for central differences: h = step * max(1, r) when
/// relative, h = step otherwise.
struct StepPolicy {
  double step = 1e-4;
  bool relative = true;

  double at(double r) const;
};

/// A Riemannian metric on a chart, given by a closed-form evaluator.
///
/// The optional background is the product metric g_R^k + g_X, stored as its
/// constant coefficient matrix: all supported backgrounds are flat products
/// in Cartesian/arclength coordinates, so the background connection has
/// vanishing Christoffel symbols and its covariant derivatives are plain
/// partials. Models may also supply exact first derivatives.
class MetricField {
 public:
  using MetricFn = std::function<Mat(const Vec&)>;
  /// Returns the n matrices d_c g (c = 0..n-1).
  using GradientFn = std::function<std::vector<Mat>(const Vec&)>;

  MetricField(Chart chart, MetricFn metric, std::optional<Mat> background = std::nullopt,
              double claimed_decay = 0.0, GradientFn gradient = {});

  const Chart& chart() const { return chart_; }
  int dim() const { return chart_.dim(); }

  /// g_ab(x); throws SingularMetric on non-finite values and ChartError
  /// outside the chart.
  Mat operator()(const Vec& x) const;

  bool has_background() const { return background_.has_value(); }
  const Mat& background() const;

  bool has_exact_gradient() const { return static_cast<bool>(gradient_); }
  std::vector<Mat> exact_gradient(const Vec& x) const;

  double claimed_decay() const { return claimed_decay_; }

 private:
  Chart chart_;
  MetricFn metric_;
  std::optional<Mat> background_;
  double claimed_decay_;
  GradientFn gradient_;
};

/// Metric value and derivatives at a point. dg[c](a, b) = d_c g_ab and
/// ddg[c][d](a, b) = d_c d_d g_ab.
struct MetricJet {
  Mat g;
  std::vector<Mat> dg;
  std::vector<std::vector<Mat>> ddg;
};

/// Derivatives up to `order` (1 or 2). Exact gradients take precedence;
/// everything else is central differences with the policy's step.
MetricJet metric_derivatives(const MetricField& m, const Vec& x, int order,
                             const StepPolicy& policy = {});

struct CurvatureData {
  Tensor3 christoffel;  // christoffel(c, a, b) = Gamma^c_ab
  Tensor4 riemann;      // riemann(a, b, c, d) = g(R(d_c, d_d) d_b, d_a)
  Mat ricci;            // Ric_bd = R^a_bad
  double scalar = 0.0;
  Mat metric;
  Mat inverse_metric;

  double antisymmetry_residual() const;
  double bianchi_residual() const;
  double trace_residual() const;
};

/// Christoffel symbols, Riemann, Ricci and scalar curvature at x, with the
/// convention R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y].
CurvatureData curvature(const MetricField& m, const Vec& x, const StepPolicy& policy = {});

/// Frames at a point; columns are coordinate components of vectors.
struct FrameData {
  Mat e0;     // background-orthonormal frame: d/dx_i followed by the fiber basis
  Mat e;      // g-orthonormal frame
  Mat gauge;  // A with e = e0 * A (the gauge map in the e0 basis)

  double orthonormality_residual(const Mat& g) const;
};

/// Symmetric (inverse square root) orthonormalization of the background
/// frame: A = (e0^T g e0)^{-1/2}. To first order e_a = e0_a - h_ab e0_b / 2.
FrameData orthonormal_frames(const MetricField& m, const Vec& x);

/// Coordinate derivatives of the g-orthonormal frame, d_c e (c = 0..n-1),
/// obtained by differentiating the matrix inverse square root exactly
/// (Daleckii-Krein divided differences) given d_c g.
std::vector<Mat> frame_gradient(const Mat& e0, const Mat& g, const std::vector<Mat>& dg);

/// Components of h = g - g_bg in the background-orthonormal frame.
Mat perturbation(const MetricField& m, const Vec& x);

/// Per-quantity decay fit on a ladder of shells.
struct DecayFit {
  std::string quantity;       // "h", "grad_h", "hess_h"
  std::vector<double> norms;  // sup over shell samples, per radius
  double slope = 0.0;         // -d log(norm) / d log(R)
  double tau = 0.0;           // slope minus derivative order
  bool below_noise = false;
};

struct DecayReport {
  std::vector<double> radii;
  std::vector<DecayFit> fits;
  double tau = 0.0;  // min over quantities; +inf for an exact background
  bool exact_background = false;
  int base_dim = 0;
  bool mass_well_defined = true;  // tau > (k-2)/2
  std::string flag;               // empty, or "mass possibly coordinate-dependent"
};

struct DecayOptions {
  int samples_per_shell = 32;
  std::uint64_t seed = 1;
  StepPolicy policy{};
  double noise_floor = 1e-12;
};

/// Fits h = O(r^-tau), grad h = O(r^-tau-1), hess h = O(r^-tau-2) by
/// log-log least squares of shell sup-norms. Needs >= 3 strictly increasing
/// radii and a background.
DecayReport decay_order(const MetricField& m, const std::vector<double>& radii,
                        const DecayOptions& options = {});

/// Shell sample points: the same seeded directions and fiber positions are
/// reused for every radius.
std::vector<Vec> shell_samples(const Chart& chart, double radius, int count, std::uint64_t seed);

}  // namespace kkmass
