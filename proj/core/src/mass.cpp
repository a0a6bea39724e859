#include "kkmass/mass.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>

namespace kkmass {

std::vector<double> geometric_ladder(double r0, int count) {
  if (!(r0 > 0.0) || count < 1) throw InvalidArgument("ladder needs r0 > 0 and at least one radius");
  std::vector<double> out;
  for (int j = 0; j < count; ++j) out.push_back(std::ldexp(r0, j));
  return out;
}

namespace {

Vec outward_normal(const Chart& chart, const Vec& x) {
  const int k = chart.dim_base;
  const double r = chart.base_radius(x);
  if (!(r > 0.0)) throw ChartError("flux density needs r > 0");
  Vec nrm = Vec::Zero(chart.dim());
  nrm.head(k) = x.head(k) / r;
  return nrm;
}

// d_mu g along each background-orthonormal direction, in background-frame components.
std::vector<Mat> background_derivatives(const MetricField& m, const Vec& x) {
  const int n = m.dim();
  const MetricJet jet = metric_derivatives(m, x, 1);
  const Mat e0 = orthonormal_frames(m, x).e0;
  std::vector<Mat> along(n);
  for (int b = 0; b < n; ++b) {
    Mat d = Mat::Zero(n, n);
    for (int mu = 0; mu < n; ++mu) d += e0(mu, b) * jet.dg[mu];
    along[b] = e0.transpose() * d * e0;
  }
  return along;
}

void require_increasing(const std::vector<double>& radii, std::size_t minimum) {
  if (radii.size() < minimum) throw InvalidArgument("radius ladder too short");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1]))) {
      throw InvalidArgument("radius ladder must be positive and strictly increasing");
    }
  }
}

double fitted_decay(const std::vector<double>& radii, const std::vector<double>& values) {
  for (double v : values) {
    if (!(v > 0.0)) return std::numeric_limits<double>::infinity();
  }
  return -loglog_slope(radii, values);
}

}  // namespace

double adm_integrand(const MetricField& m, const Vec& x) {
  if (m.chart().dim_fiber() != 0) throw InvalidArgument("ADM flux density needs a chart without fiber");
  const int k = m.chart().dim_base;
  const Vec nrm = outward_normal(m.chart(), x);
  const MetricJet jet = metric_derivatives(m, x, 1);
  double s = 0.0;
  for (int j = 0; j < k; ++j) {
    double div = 0.0, tr = 0.0;
    for (int i = 0; i < k; ++i) {
      div += jet.dg[i](i, j);
      tr += jet.dg[j](i, i);
    }
    s += (div - tr) * nrm[j];
  }
  return s;
}

KKIntegrand kk_integrand(const MetricField& m, const Vec& x) {
  if (!m.has_background()) throw InvalidArgument("KK flux density needs a background metric");
  const int k = m.chart().dim_base, n = m.dim();
  const Vec nrm = outward_normal(m.chart(), x);
  const std::vector<Mat> along = background_derivatives(m, x);
  const MetricJet jet = metric_derivatives(m, x, 1);
  const Mat e0 = orthonormal_frames(m, x).e0;
  const Vec nrm0 = e0.inverse() * nrm;  // normal in the background frame

  KKIntegrand out;
  for (int j = 0; j < n; ++j) {
    double div = 0.0, tr = 0.0;
    for (int a = 0; a < n; ++a) {
      div += along[a](j, a);
      tr += along[j](a, a);
    }
    out.full += (div - tr) * nrm0[j];
  }
  for (int j = 0; j < k; ++j) {
    double div = 0.0, tr = 0.0;
    for (int i = 0; i < k; ++i) div += jet.dg[i](i, j);
    for (int a = 0; a < n; ++a) tr += jet.dg[j](a, a);
    out.reduced += (div - tr) * nrm[j];
  }
  return out;
}

double flux_integral(const MetricField& m, const ShellQuadrature& quad, double radius, int threads) {
  const bool plain = m.chart().dim_fiber() == 0;
  return integrate_shell(quad, radius, threads, [&](const Vec& x, const Vec&) {
    return plain ? adm_integrand(m, x) : kk_integrand(m, x).full;
  });
}

MassResult mass(const MetricField& m, const std::vector<double>& radii, const QuadratureSpec& spec,
                const MassOptions& options) {
  require_increasing(radii, 3);
  const Chart& chart = m.chart();
  const ShellQuadrature quad(chart, spec);

  MassResult out;
  out.radii = radii;
  out.omega_k = sphere_volume(chart.dim_base);
  out.fiber_volume = chart.fiber_volume();
  const double norm = 1.0 / (4.0 * out.omega_k * out.fiber_volume);
  for (double r : radii) {
    if (!(r > chart.r_min)) throw ChartError("shell radius inside the excised region");
    out.estimates.push_back(norm * flux_integral(m, quad, r, options.threads));
  }
  const Extrapolation ex = extrapolate_power_law(out.radii, out.estimates);
  out.limit = ex.limit;
  out.exponent = ex.exponent;
  out.error = ex.error_estimate;
  out.misfit = ex.misfit;
  out.converged = ex.converged;
  out.status = ex.status;

  out.tau = std::numeric_limits<double>::quiet_NaN();
  if (options.check_decay && m.has_background()) {
    const DecayReport decay = decay_order(m, radii, options.decay);
    out.tau = decay.tau;
    out.coordinate_dependent = !decay.mass_well_defined;
    out.flag = decay.flag;
  }
  return out;
}

Complex witten_form(const MetricField& m, const SpinorField& phi, const Vec& x, const Vec& direction,
                    const StepPolicy& policy) {
  const int n = m.dim();
  if (direction.size() != n) throw InvalidArgument("direction must have one component per frame vector");
  const CliffordRep& rep = *phi.rep;
  const LocalGeometry geo = local_geometry(m, rep, x, policy);
  const std::vector<CVec> nabla = covariant_derivatives(m, geo, phi);
  const CVec d = dirac(rep, nabla);
  CVec v = CVec::Zero(rep.fiber_dim());
  for (int a = 0; a < n; ++a) v += direction[a] * (nabla[a] + rep.gamma(a) * d);
  return inner(v, phi(x));
}

Complex witten_form(const MetricField& m, const SpinorField& phi, const Vec& x, int a, const StepPolicy& policy) {
  if (a < 0 || a >= m.dim()) throw InvalidArgument("frame index out of range");
  return witten_form(m, phi, x, Vec(Vec::Unit(m.dim(), a)), policy);
}

DivergenceCheck divergence_identity_residual(const MetricField& m, const SpinorField& phi, const Vec& x,
                                             const StepPolicy& policy) {
  const int n = m.dim();
  const CliffordRep& rep = *phi.rep;
  const LocalGeometry geo = local_geometry(m, rep, x, policy);
  const std::vector<CVec> nabla = covariant_derivatives(m, geo, phi);
  const CVec d = dirac(rep, nabla);
  const CVec center = phi(x);

  // Re alpha(e_a) at a nearby point, with the frame of that point
  auto alpha_at = [&](const Vec& y) {
    const LocalGeometry gy = local_geometry(m, rep, y, policy);
    const std::vector<CVec> ny = covariant_derivatives(m, gy, phi);
    const CVec dy = dirac(rep, ny);
    const CVec py = phi(y);
    Vec out(n);
    for (int a = 0; a < n; ++a) out[a] = inner(ny[a] + rep.gamma(a) * dy, py).real();
    return out;
  };

  const double h = geo.step;
  std::vector<Vec> partial(n);
  for (int mu = 0; mu < n; ++mu) {
    Vec xp = x, xm = x;
    xp[mu] += h;
    xm[mu] -= h;
    partial[mu] = (alpha_at(xp) - alpha_at(xm)) / (2.0 * h);
  }
  Vec alpha(n);
  for (int a = 0; a < n; ++a) alpha[a] = inner(nabla[a] + rep.gamma(a) * d, center).real();

  DivergenceCheck out;
  for (int a = 0; a < n; ++a) {
    for (int mu = 0; mu < n; ++mu) out.div_alpha += geo.frame.e(mu, a) * partial[mu][a];
    for (int b = 0; b < n; ++b) out.div_alpha -= geo.connection.omega(a, a, b) * alpha[b];
  }
  out.scalar_curvature = curvature(m, x, policy).scalar;
  for (const CVec& v : nabla) out.nabla_sq += v.squaredNorm();
  out.dirac_sq = d.squaredNorm();
  out.rhs = 0.25 * out.scalar_curvature * center.squaredNorm() + out.nabla_sq - out.dirac_sq;
  out.residual = std::abs(out.div_alpha - out.rhs);
  return out;
}

BoundaryReport boundary_mass_check(const MetricField& m, const SpinorField& phi0, const std::vector<double>& radii,
                                   const QuadratureSpec& spec, int threads, const StepPolicy& policy) {
  require_increasing(radii, 3);
  if (!m.has_background()) throw InvalidArgument("boundary check needs a background metric");
  const Chart& chart = m.chart();
  const int n = m.dim(), k = chart.dim_base;
  const CliffordRep& rep = *phi0.rep;
  const ShellQuadrature quad(chart, spec);

  BoundaryReport report;
  report.omega_k = sphere_volume(k);
  report.fiber_volume = chart.fiber_volume();
  const double norm = report.omega_k * report.fiber_volume;

  struct NodeValues {
    double boundary, flux, gap;
  };
  std::vector<double> boundary_norm;
  for (double radius : radii) {
    if (!(radius > chart.r_min)) throw ChartError("shell radius inside the excised region");
    std::vector<NodeValues> nodes(quad.size());
    parallel_evaluate(quad.size(), threads, [&](int i) {
      const Vec x = quad.point(i, radius);
      const Vec& dir = quad.direction(i);
      const LocalGeometry geo = local_geometry(m, rep, x, policy);
      const std::vector<CVec> nabla = covariant_derivatives(m, geo, phi0);
      const CVec d = dirac(rep, nabla);
      const CVec center = phi0(x);

      Vec dr = Vec::Zero(n);
      dr.head(k) = dir;
      const Mat ginv = geo.jet.g.inverse();
      const double dr_norm = std::sqrt(dr.dot(ginv * dr));
      const Vec nu = geo.frame.e.transpose() * dr / dr_norm;  // frame components of the unit normal
      const double measure = std::sqrt(geo.jet.g.determinant()) * dr_norm;

      Vec lhs(n);
      for (int a = 0; a < n; ++a) lhs[a] = inner(nabla[a] + rep.gamma(a) * d, center).real();

      const std::vector<Mat> along = background_derivatives(m, x);
      Vec rhs(n);
      for (int a = 0; a < n; ++a) {
        double s = 0.0;
        for (int b = 0; b < n; ++b) s += along[b](a, b) - along[a](b, b);
        rhs[a] = 0.25 * s * center.squaredNorm();
      }
      const Vec nrm0 = geo.frame.e0.inverse() * dr;
      nodes[i] = {nu.dot(lhs) * measure, nrm0.dot(rhs), (lhs - rhs).cwiseAbs().maxCoeff()};
      return 0.0;
    });
    std::vector<double> b(quad.size()), f(quad.size());
    BoundaryRow row;
    row.radius = radius;
    for (int i = 0; i < quad.size(); ++i) {
      const double w = quad.weight(i, radius);
      b[i] = w * nodes[i].boundary;
      f[i] = w * nodes[i].flux;
      row.pointwise_gap = std::max(row.pointwise_gap, nodes[i].gap);
    }
    row.boundary = pairwise_sum(b);
    row.flux_side = pairwise_sum(f);
    row.gap = std::abs(row.boundary - row.flux_side);
    report.rows.push_back(row);
    boundary_norm.push_back(row.boundary / norm);
  }

  std::vector<double> gaps, pointwise;
  for (const BoundaryRow& row : report.rows) {
    gaps.push_back(row.gap);
    pointwise.push_back(row.pointwise_gap);
  }
  report.gap_exponent = fitted_decay(radii, gaps);
  report.pointwise_exponent = fitted_decay(radii, pointwise);
  report.normalized_boundary = boundary_norm.back();
  report.boundary_limit = extrapolate_power_law(radii, boundary_norm);
  return report;
}

ShellDecay parallel_spinor_decay(const MetricField& m, const SpinorField& phi0, const std::vector<double>& radii,
                                 int samples, std::uint64_t seed, const StepPolicy& policy) {
  require_increasing(radii, 2);
  ShellDecay out;
  out.radii = radii;
  for (double r : radii) {
    double sup = 0.0;
    for (const Vec& x : shell_samples(m.chart(), r, samples, seed)) {
      const LocalGeometry geo = local_geometry(m, *phi0.rep, x, policy);
      for (const CVec& v : covariant_derivatives(m, geo, phi0)) sup = std::max(sup, v.norm());
    }
    out.sup_norms.push_back(sup);
  }
  out.exponent = fitted_decay(radii, out.sup_norms);
  return out;
}

ShellDecay connection_difference_decay(const MetricField& m, const CliffordRep& rep, const std::vector<double>& radii,
                                       int samples, std::uint64_t seed, const StepPolicy& policy) {
  require_increasing(radii, 2);
  ShellDecay out;
  out.radii = radii;
  for (double r : radii) {
    double sup = 0.0;
    for (const Vec& x : shell_samples(m.chart(), r, samples, seed)) {
      for (int a = 0; a < m.dim(); ++a) {
        const ConnectionDifference cd = connection_difference(m, rep, x, a, policy);
        const CMat gap = cd.exact - cd.leading;
        sup = std::max(sup, Eigen::JacobiSVD<CMat>(gap).singularValues()[0]);
      }
    }
    out.sup_norms.push_back(sup);
  }
  out.exponent = fitted_decay(radii, out.sup_norms);
  return out;
}

}  // namespace kkmass
