#pragma once

#include "kkmass/clifford.hpp"
#include "kkmass/geometry.hpp"

#include <functional>
#include <memory>

namespace kkmass {

/// Spinor-valued function on a chart. Components are taken relative to the
/// g-orthonormal frame produced by orthonormal_frames(), so the gauge map
/// acts as the identity on components.
struct SpinorField {
  std::shared_ptr<const CliffordRep> rep;
  std::function<CVec(const Vec&)> eval;

  CVec operator()(const Vec& x) const;
};

/// Levi-Civita connection coefficients omega(a, b, c) = omega_bc(e_a)
/// = g(nabla_{e_a} e_b, e_c) in the g-orthonormal frame, and the
/// coefficients of nabla0 = A o nabla_bg o A^-1 in the same frame.
struct SpinConnection {
  Tensor3 omega;
  Tensor3 omega0;

  double antisymmetry_residual() const;
};

/// Everything the spinor operators need at one point: metric jet, frames,
/// frame gradient, connection and the spinor connection matrices
/// 1/4 sum_bc omega_bc(e_a) gamma_b gamma_c.
struct LocalGeometry {
  Vec x;
  double step = 0.0;
  MetricJet jet;  // first order only
  FrameData frame;
  std::vector<Mat> frame_gradient;  // d_mu e, coordinate components
  SpinConnection connection;
  std::vector<CMat> spin_matrix;  // per frame direction a
};

LocalGeometry local_geometry(const MetricField& m, const CliffordRep& rep, const Vec& x,
                             const StepPolicy& policy = {});

SpinConnection spin_connection(const MetricField& m, const Vec& x, const StepPolicy& policy = {});

/// nabla_{e_a} phi = e_a(phi) + 1/4 sum_bc omega_bc(e_a) gamma_b gamma_c phi.
/// The directional derivative of the components is a central difference
/// with the policy's step.
CVec covariant_derivative(const MetricField& m, const SpinorField& phi, const Vec& x, int a,
                          const StepPolicy& policy = {});

/// All n covariant derivatives at once, reusing one LocalGeometry.
std::vector<CVec> covariant_derivatives(const MetricField& m, const LocalGeometry& geo,
                                        const SpinorField& phi);

/// D phi = sum_a gamma_a nabla_{e_a} phi.
CVec dirac(const MetricField& m, const SpinorField& phi, const Vec& x, const StepPolicy& policy = {});
CVec dirac(const CliffordRep& rep, const std::vector<CVec>& nabla);

/// The field x -> D phi(x), for nesting (D^2, Lichnerowicz checks).
SpinorField dirac_field(const MetricField& m, SpinorField phi, StepPolicy policy = {});

/// The field x -> nabla_{e_a} phi(x).
SpinorField covariant_derivative_field(const MetricField& m, SpinorField phi, int a,
                                       StepPolicy policy = {});

/// Spinor Laplacian nabla^* nabla phi = -sum_a (nabla_a nabla_a - nabla_{nabla_a e_a}) phi.
CVec spinor_laplacian(const MetricField& m, const SpinorField& phi, const Vec& x,
                      const StepPolicy& policy = {});

/// Curvature endomorphism of the spinor bundle,
/// R^S(e_a, e_b) = 1/4 sum_cd g(R(e_a, e_b) e_c, e_d) gamma_c gamma_d,
/// for every frame pair (a, b), stored at index a * n + b.
std::vector<CMat> spinor_curvature(const CliffordRep& rep, const CurvatureData& curv, const Mat& frame);

/// Frame components Ric(e_a, e_b).
Mat frame_ricci(const CurvatureData& curv, const Mat& frame);

/// Torsion of nabla0 in frame components: torsion(a, b, c) = g(T(e_a, e_b), e_c),
/// T(X, Y) = -(nabla_bg_X A) A^-1 Y + (nabla_bg_Y A) A^-1 X. The gauge map is
/// differentiated by central differences of orthonormal_frames().
Tensor3 torsion_tensor(const MetricField& m, const Vec& x, const StepPolicy& policy = {});

/// Single torsion vector T(e_a, e_b) in frame components.
Vec torsion_of_nabla0(const MetricField& m, const Vec& x, int a, int b, const StepPolicy& policy = {});

/// nabla_{e_a} - nabla0_{e_a} acting on the spinor fiber.
struct ConnectionDifference {
  CMat exact;    // 1/4 sum_bc (omega - omega0)_bc(e_a) gamma_b gamma_c
  CMat leading;  // 1/8 sum_{b != c} (d_b g_ac - d_c g_ab) gamma_b gamma_c, background frame
};

ConnectionDifference connection_difference(const MetricField& m, const CliffordRep& rep, const Vec& x,
                                           int a, const StepPolicy& policy = {});

/// The same exact difference, rebuilt from the torsion of nabla0 through
/// 2 g(nabla0_X Y - nabla_X Y, Z) = T(X,Y).Z - T(X,Z).Y - T(Y,Z).X.
CMat connection_difference_from_torsion(const CliffordRep& rep, const Tensor3& torsion, int a);

/// phi0 = A(psi0 (x) psi1): the constant-component spinor built from a unit
/// spinor of R^k and a unit parallel spinor of the flat fiber. When both
/// factors are odd-dimensional the tensor product is completed with (1, 0).
SpinorField approx_parallel_spinor(const MetricField& m, std::shared_ptr<const CliffordRep> rep,
                                   const CVec& base_spinor, const CVec& fiber_spinor);

/// Smooth closed-form spinor fields for identity checks.
enum class ProbeSpinor { Polynomial, Trigonometric, Gaussian };

SpinorField probe_spinor(std::shared_ptr<const CliffordRep> rep, const Chart& chart, ProbeSpinor kind);

const char* to_string(ProbeSpinor kind);

}  // namespace kkmass
