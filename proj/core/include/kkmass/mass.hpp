#pragma once

#include "kkmass/fit.hpp"
#include "kkmass/quadrature.hpp"
#include "kkmass/spin.hpp"

#include <string>
#include <vector>

namespace kkmass {

/// Geometric ladder {r0 * 2^j}, j = 0..count-1.
std::vector<double> geometric_ladder(double r0, int count = 5);

/// (d_i g_ij - d_j g_ii) n_j on a pure asymptotically flat chart, n the
/// Euclidean outward normal. Throws InvalidArgument when the chart has a fiber.
double adm_integrand(const MetricField& m, const Vec& x);

/// The KK flux density (d_a g_ja - d_j g_aa) n_j in two forms.
struct KKIntegrand {
  double full = 0.0;     // background-covariant derivatives, a over base and fiber
  double reduced = 0.0;  // a over the base in the divergence term, full trace g_aa
};

/// Requires a background. For fiber-independent metrics over a flat product
/// background the two forms coincide.
KKIntegrand kk_integrand(const MetricField& m, const Vec& x);

struct MassOptions {
  int threads = 1;
  bool check_decay = true;
  DecayOptions decay{};
};

struct MassResult {
  std::vector<double> radii;
  std::vector<double> estimates;  // m(R)
  double limit = 0.0;
  double exponent = 0.0;
  double error = 0.0;
  double misfit = 0.0;
  bool converged = false;
  std::string status;
  double omega_k = 0.0;
  double fiber_volume = 1.0;
  double tau = 0.0;  // fitted decay rate, NaN when not checked
  bool coordinate_dependent = false;
  std::string flag;
};

/// m(R) = 1 / (4 omega_k vol X) * integral over S_R x X of the KK flux
/// density, for every radius, then extrapolated R -> infinity. Charts
/// without a fiber give the ADM mass with the same normalization.
MassResult mass(const MetricField& m, const std::vector<double>& radii, const QuadratureSpec& spec = {},
                const MassOptions& options = {});

/// Shell integral of the flux density at one radius, unnormalized.
double flux_integral(const MetricField& m, const ShellQuadrature& quad, double radius, int threads = 1);

/// alpha(X) = <(nabla_X + X . D) phi, phi> at x, X = sum_a X^a e_a given by
/// its frame components.
Complex witten_form(const MetricField& m, const SpinorField& phi, const Vec& x, const Vec& direction,
                    const StepPolicy& policy = {});
Complex witten_form(const MetricField& m, const SpinorField& phi, const Vec& x, int a, const StepPolicy& policy = {});

/// Both sides of div alpha = R/4 |phi|^2 + |nabla phi|^2 - |D phi|^2 at x,
/// the divergence taken by central differences of Re alpha(e_a) with the
/// same step as the inner derivatives.
struct DivergenceCheck {
  double div_alpha = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double scalar_curvature = 0.0;
  double nabla_sq = 0.0;
  double dirac_sq = 0.0;
};

DivergenceCheck divergence_identity_residual(const MetricField& m, const SpinorField& phi, const Vec& x,
                                             const StepPolicy& policy = {});

/// Boundary term of the Witten argument against the flux mass, per radius.
struct BoundaryRow {
  double radius = 0.0;
  double boundary = 0.0;   // integral of Re<(nabla_nu + nu . D) phi0, phi0> dvol(g|S_R x X)
  double flux_side = 0.0;  // 1/4 integral of the flux density |phi0|^2
  double gap = 0.0;
  double pointwise_gap = 0.0;  // sup over nodes and a of the pointwise reduction gap
};

struct BoundaryReport {
  std::vector<BoundaryRow> rows;
  double gap_exponent = 0.0;        // fitted decay of the integrated gap
  double pointwise_exponent = 0.0;  // fitted decay of the pointwise gap
  double normalized_boundary = 0.0;  // boundary(R_max) / (omega_k vol X)
  Extrapolation boundary_limit;       // extrapolated boundary / (omega_k vol X)
  double omega_k = 0.0;
  double fiber_volume = 1.0;
};

BoundaryReport boundary_mass_check(const MetricField& m, const SpinorField& phi0, const std::vector<double>& radii,
                                   const QuadratureSpec& spec = {}, int threads = 1, const StepPolicy& policy = {});

/// Shell sup-norms of a pointwise quantity and their fitted decay rate.
struct ShellDecay {
  std::vector<double> radii;
  std::vector<double> sup_norms;
  double exponent = 0.0;  // -d log(sup) / d log(R)
};

/// sup over shell samples and a of |nabla_{e_a} phi0|.
ShellDecay parallel_spinor_decay(const MetricField& m, const SpinorField& phi0, const std::vector<double>& radii,
                                 int samples = 32, std::uint64_t seed = 1, const StepPolicy& policy = {});

/// sup over shell samples and a of the operator norm of the gap between the
/// exact spinor connection difference and its leading term.
ShellDecay connection_difference_decay(const MetricField& m, const CliffordRep& rep, const std::vector<double>& radii,
                                       int samples = 32, std::uint64_t seed = 1, const StepPolicy& policy = {});

}  // namespace kkmass
