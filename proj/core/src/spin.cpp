#include "kkmass/spin.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace kkmass {

CVec SpinorField::operator()(const Vec& x) const {
  CVec v = eval(x);
  if (v.size() != rep->fiber_dim()) throw InvalidArgument("spinor field returned the wrong fiber dimension");
  return v;
}

double SpinConnection::antisymmetry_residual() const {
  const int n = omega.dim();
  double r = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) r = std::max(r, std::abs(omega(a, b, c) + omega(a, c, b)));
  return r;
}

namespace {

void require_dims(const MetricField& m, const CliffordRep& rep) {
  if (rep.dim() != m.dim()) {
    throw InvalidArgument("Clifford dimension " + std::to_string(rep.dim()) + " does not match manifold dimension " +
                          std::to_string(m.dim()));
  }
}

// omega(a, b, c) = g(nabla_{e_a} e_b, e_c) from the metric jet and the exact
// frame gradient.
Tensor3 levi_civita_coefficients(const MetricJet& jet, const Mat& e, const std::vector<Mat>& de) {
  const int n = static_cast<int>(e.cols());
  Tensor3 omega(n);
  for (int a = 0; a < n; ++a) {
    Mat along = Mat::Zero(n, n);  // column b: e_a(e_b)
    for (int mu = 0; mu < n; ++mu) along += e(mu, a) * de[mu];
    // christ(l, nu) = sum_mu Gamma_{l, mu nu} e_a^mu
    Mat christ = Mat::Zero(n, n);
    for (int l = 0; l < n; ++l)
      for (int nu = 0; nu < n; ++nu) {
        double s = 0.0;
        for (int mu = 0; mu < n; ++mu) {
          s += e(mu, a) * (jet.dg[mu](l, nu) + jet.dg[nu](l, mu) - jet.dg[l](mu, nu));
        }
        christ(l, nu) = 0.5 * s;
      }
    const Mat lowered = jet.g * along + christ * e;  // column b: g(nabla_{e_a} e_b, .)
    const Mat proj = e.transpose() * lowered;        // (c, b)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) omega(a, b, c) = proj(c, b);
  }
  return omega;
}

CMat spin_matrix_from(const CliffordRep& rep, const Tensor3& coeff, int a) {
  const int n = rep.dim();
  CMat out = CMat::Zero(rep.fiber_dim(), rep.fiber_dim());
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c) {
      if (b != c && coeff(a, b, c) != 0.0) out += (0.25 * coeff(a, b, c)) * rep.product(b, c);
    }
  return out;
}

Vec shifted(const Vec& x, int c, double h) {
  Vec y = x;
  y[c] += h;
  return y;
}

}  // namespace

LocalGeometry local_geometry(const MetricField& m, const CliffordRep& rep, const Vec& x, const StepPolicy& policy) {
  require_dims(m, rep);
  LocalGeometry geo;
  geo.x = x;
  geo.step = policy.at(m.chart().base_radius(x));
  geo.jet = metric_derivatives(m, x, 1, policy);
  geo.frame = orthonormal_frames(m, x);
  geo.frame_gradient = frame_gradient(geo.frame.e0, geo.jet.g, geo.jet.dg);
  geo.connection.omega = levi_civita_coefficients(geo.jet, geo.frame.e, geo.frame_gradient);
  // Constant-coefficient background: nabla_bg e0 = 0, hence nabla0 e = A nabla_bg e0 = 0.
  geo.connection.omega0 = Tensor3(m.dim());
  geo.spin_matrix.reserve(m.dim());
  for (int a = 0; a < m.dim(); ++a) geo.spin_matrix.push_back(spin_matrix_from(rep, geo.connection.omega, a));
  return geo;
}

SpinConnection spin_connection(const MetricField& m, const Vec& x, const StepPolicy& policy) {
  const MetricJet jet = metric_derivatives(m, x, 1, policy);
  const FrameData frame = orthonormal_frames(m, x);
  SpinConnection out;
  out.omega = levi_civita_coefficients(jet, frame.e, frame_gradient(frame.e0, jet.g, jet.dg));
  out.omega0 = Tensor3(m.dim());
  return out;
}

std::vector<CVec> covariant_derivatives(const MetricField& m, const LocalGeometry& geo, const SpinorField& phi) {
  const int n = m.dim();
  const double h = geo.step;
  std::vector<CVec> partial(n);
  for (int mu = 0; mu < n; ++mu) {
    const Vec xp = shifted(geo.x, mu, h), xm = shifted(geo.x, mu, -h);
    if (!m.chart().contains(xp) || !m.chart().contains(xm)) {
      throw ChartError("spinor stencil leaves the chart");
    }
    partial[mu] = (phi(xp) - phi(xm)) / (2.0 * h);
  }
  const CVec center = phi(geo.x);
  std::vector<CVec> out(n);
  for (int a = 0; a < n; ++a) {
    CVec d = geo.spin_matrix[a] * center;
    for (int mu = 0; mu < n; ++mu) d += geo.frame.e(mu, a) * partial[mu];
    out[a] = std::move(d);
  }
  return out;
}

CVec covariant_derivative(const MetricField& m, const SpinorField& phi, const Vec& x, int a, const StepPolicy& policy) {
  if (a < 0 || a >= m.dim()) throw InvalidArgument("frame index out of range");
  const LocalGeometry geo = local_geometry(m, *phi.rep, x, policy);
  return covariant_derivatives(m, geo, phi)[a];
}

CVec dirac(const CliffordRep& rep, const std::vector<CVec>& nabla) {
  CVec out = CVec::Zero(rep.fiber_dim());
  for (int a = 0; a < rep.dim(); ++a) out += rep.gamma(a) * nabla[a];
  return out;
}

CVec dirac(const MetricField& m, const SpinorField& phi, const Vec& x, const StepPolicy& policy) {
  const LocalGeometry geo = local_geometry(m, *phi.rep, x, policy);
  return dirac(*phi.rep, covariant_derivatives(m, geo, phi));
}

SpinorField dirac_field(const MetricField& m, SpinorField phi, StepPolicy policy) {
  auto rep = phi.rep;
  return SpinorField{rep, [m, phi = std::move(phi), policy](const Vec& x) { return dirac(m, phi, x, policy); }};
}

SpinorField covariant_derivative_field(const MetricField& m, SpinorField phi, int a, StepPolicy policy) {
  auto rep = phi.rep;
  return SpinorField{rep, [m, phi = std::move(phi), a, policy](const Vec& x) {
                       return covariant_derivative(m, phi, x, a, policy);
                     }};
}

CVec spinor_laplacian(const MetricField& m, const SpinorField& phi, const Vec& x, const StepPolicy& policy) {
  const int n = m.dim();
  const LocalGeometry geo = local_geometry(m, *phi.rep, x, policy);
  const std::vector<CVec> nabla = covariant_derivatives(m, geo, phi);
  CVec out = CVec::Zero(phi.rep->fiber_dim());
  for (int a = 0; a < n; ++a) {
    const SpinorField inner_field = covariant_derivative_field(m, phi, a, policy);
    out -= covariant_derivatives(m, geo, inner_field)[a];
    for (int b = 0; b < n; ++b) out += geo.connection.omega(a, a, b) * nabla[b];
  }
  return out;
}

namespace {

// frame(p, q, r, s) = riemann contracted with e on every slot
Tensor4 frame_riemann(const CurvatureData& curv, const Mat& e) {
  const int n = curv.riemann.dim();
  Tensor4 t1(n), t2(n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          double v = 0.0;
          for (int u = 0; u < n; ++u) v += curv.riemann(p, q, r, u) * e(u, s);
          t1(p, q, r, s) = v;
        }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          double v = 0.0;
          for (int u = 0; u < n; ++u) v += t1(p, q, u, s) * e(u, r);
          t2(p, q, r, s) = v;
        }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          double v = 0.0;
          for (int u = 0; u < n; ++u) v += t2(p, u, r, s) * e(u, q);
          t1(p, q, r, s) = v;
        }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          double v = 0.0;
          for (int u = 0; u < n; ++u) v += t1(u, q, r, s) * e(u, p);
          t2(p, q, r, s) = v;
        }
  return t2;
}

}  // namespace

std::vector<CMat> spinor_curvature(const CliffordRep& rep, const CurvatureData& curv, const Mat& frame) {
  const int n = rep.dim();
  const Tensor4 fr = frame_riemann(curv, frame);
  std::vector<CMat> out(static_cast<std::size_t>(n) * n, CMat::Zero(rep.fiber_dim(), rep.fiber_dim()));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      CMat& r = out[static_cast<std::size_t>(a) * n + b];
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          // g(R(e_a, e_b) e_c, e_d) = fr(d, c, a, b)
          if (c != d) r += (0.25 * fr(d, c, a, b)) * rep.product(c, d);
        }
    }
  return out;
}

Mat frame_ricci(const CurvatureData& curv, const Mat& frame) {
  return frame.transpose() * curv.ricci * frame;
}

Tensor3 torsion_tensor(const MetricField& m, const Vec& x, const StepPolicy& policy) {
  const int n = m.dim();
  const double h = policy.at(m.chart().base_radius(x));
  const FrameData frame = orthonormal_frames(m, x);
  std::vector<Mat> de(n);
  for (int mu = 0; mu < n; ++mu) {
    const Vec xp = shifted(x, mu, h), xm = shifted(x, mu, -h);
    if (!m.chart().contains(xp) || !m.chart().contains(xm)) throw ChartError("frame stencil leaves the chart");
    de[mu] = (orthonormal_frames(m, xp).e - orthonormal_frames(m, xm).e) / (2.0 * h);
  }
  const Mat& e = frame.e;
  const Mat e0inv = frame.e0.inverse();
  const Mat einv = e.inverse();
  // d_X A for the endomorphism A = e e0^-1 (background frame is constant)
  auto grad_gauge = [&](const Vec& dir) {
    Mat d = Mat::Zero(n, n);
    for (int mu = 0; mu < n; ++mu) d += dir[mu] * de[mu];
    return Mat(d * e0inv);
  };
  const Mat ainv = frame.e0 * einv;  // A^-1 = e0 e^-1
  const Mat lowered = e.transpose() * m(x);
  Tensor3 t(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Vec ea = e.col(a), eb = e.col(b);
      const Vec tv = -grad_gauge(ea) * ainv * eb + grad_gauge(eb) * ainv * ea;
      const Vec comps = lowered * tv;
      for (int c = 0; c < n; ++c) t(a, b, c) = comps[c];
    }
  return t;
}

Vec torsion_of_nabla0(const MetricField& m, const Vec& x, int a, int b, const StepPolicy& policy) {
  const int n = m.dim();
  if (a < 0 || a >= n || b < 0 || b >= n) throw InvalidArgument("frame index out of range");
  const Tensor3 t = torsion_tensor(m, x, policy);
  Vec out(n);
  for (int c = 0; c < n; ++c) out[c] = t(a, b, c);
  return out;
}

ConnectionDifference connection_difference(const MetricField& m, const CliffordRep& rep, const Vec& x, int a,
                                           const StepPolicy& policy) {
  const int n = m.dim();
  if (a < 0 || a >= n) throw InvalidArgument("frame index out of range");
  const LocalGeometry geo = local_geometry(m, rep, x, policy);

  Tensor3 diff(n);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c) diff(a, b, c) = geo.connection.omega(a, b, c) - geo.connection.omega0(a, b, c);

  ConnectionDifference out;
  out.exact = spin_matrix_from(rep, diff, a);

  const Mat& e0 = geo.frame.e0;
  std::vector<Mat> along(n);  // derivative of background-frame components along e0_b
  for (int b = 0; b < n; ++b) {
    Mat d = Mat::Zero(n, n);
    for (int mu = 0; mu < n; ++mu) d += e0(mu, b) * geo.jet.dg[mu];
    along[b] = e0.transpose() * d * e0;
  }
  out.leading = CMat::Zero(rep.fiber_dim(), rep.fiber_dim());
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c) {
      if (b == c) continue;
      out.leading += (0.125 * (along[b](a, c) - along[c](a, b))) * rep.product(b, c);
    }
  return out;
}

CMat connection_difference_from_torsion(const CliffordRep& rep, const Tensor3& t, int a) {
  const int n = rep.dim();
  Tensor3 diff(n);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c) diff(a, b, c) = -0.5 * (t(a, b, c) - t(a, c, b) - t(b, c, a));
  return spin_matrix_from(rep, diff, a);
}

SpinorField approx_parallel_spinor(const MetricField& m, std::shared_ptr<const CliffordRep> rep, const CVec& base_spinor,
                                   const CVec& fiber_spinor) {
  require_dims(m, *rep);
  const int k = m.chart().dim_base, f = m.chart().dim_fiber();
  const long n0 = 1L << (k / 2), n1 = 1L << (f / 2);
  if (base_spinor.size() != n0) throw InvalidArgument("base spinor must have 2^floor(k/2) components");
  if (fiber_spinor.size() != n1) throw InvalidArgument("fiber spinor must have 2^floor(dim X/2) components");
  if (std::abs(base_spinor.norm() - 1.0) > 1e-12 || std::abs(fiber_spinor.norm() - 1.0) > 1e-12) {
    throw InvalidArgument("approximate parallel spinor needs unit-norm factors");
  }
  CVec comps(n0 * n1);
  for (long i = 0; i < n0; ++i) comps.segment(i * n1, n1) = base_spinor[i] * fiber_spinor;
  if (comps.size() != rep->fiber_dim()) {
    if (2 * comps.size() != rep->fiber_dim()) throw InvalidArgument("spinor factors do not fit the representation");
    CVec padded = CVec::Zero(rep->fiber_dim());
    for (Eigen::Index i = 0; i < comps.size(); ++i) padded[2 * i] = comps[i];
    comps = padded;
  }
  return SpinorField{std::move(rep), [comps](const Vec&) { return comps; }};
}

SpinorField probe_spinor(std::shared_ptr<const CliffordRep> rep, const Chart& chart, ProbeSpinor kind) {
  const int k = chart.dim_base;
  const int n = chart.dim();
  const int nf = rep->fiber_dim();
  const std::vector<double> periods = chart.fiber_periods;
  constexpr double two_pi = 2.0 * std::numbers::pi;

  // fiber phase: periodic in every fiber coordinate
  auto fiber_phase = [k, n, periods](const Vec& x, int j) {
    double s = 0.0;
    for (int a = k; a < n; ++a) s += std::sin(two_pi * x[a] / periods[a - k] + 0.7 * j + 0.3 * a);
    return s;
  };
  auto coeff = [](int i, int j, double shift) { return std::cos(1.7 * i + 0.9 * j + shift); };

  std::function<CVec(const Vec&)> eval;
  switch (kind) {
    case ProbeSpinor::Polynomial:
      eval = [=](const Vec& x) {
        CVec v(nf);
        for (int j = 0; j < nf; ++j) {
          double re = 1.0 + 0.1 * j, im = 0.2 - 0.05 * j;
          for (int i = 0; i < k; ++i) {
            re += 0.3 * coeff(i, j, 0.4) * x[i] + 0.05 * coeff(i, j, 1.1) * x[i] * x[(i + 1) % k];
            im += 0.2 * coeff(i, j, 2.3) * x[i] - 0.04 * coeff(i, j, 0.2) * x[i] * x[i];
          }
          re += 0.2 * fiber_phase(x, j);
          v[j] = Complex(re, im);
        }
        return v;
      };
      break;
    case ProbeSpinor::Trigonometric:
      eval = [=](const Vec& x) {
        CVec v(nf);
        for (int j = 0; j < nf; ++j) {
          double a1 = 0.3 * j, a2 = 1.0 - 0.2 * j;
          for (int i = 0; i < k; ++i) {
            a1 += (0.6 + 0.2 * coeff(i, j, 0.5)) * x[i];
            a2 += (0.5 + 0.3 * coeff(i, j, 1.9)) * x[i];
          }
          v[j] = Complex(std::sin(a1) + 0.3 * fiber_phase(x, j), 0.8 * std::cos(a2));
        }
        return v;
      };
      break;
    case ProbeSpinor::Gaussian:
      eval = [=](const Vec& x) {
        const double r2 = x.head(k).squaredNorm();
        const double envelope = std::exp(-r2 / 18.0);
        CVec v(nf);
        for (int j = 0; j < nf; ++j) {
          double re = 1.0, im = 0.5 * coeff(0, j, 0.1);
          for (int i = 0; i < k; ++i) {
            re += 0.4 * coeff(i, j, 0.8) * x[i];
            im += 0.3 * coeff(i, j, 2.6) * x[i];
          }
          v[j] = envelope * Complex(re + 0.2 * fiber_phase(x, j), im);
        }
        return v;
      };
      break;
  }
  return SpinorField{std::move(rep), std::move(eval)};
}

const char* to_string(ProbeSpinor kind) {
  switch (kind) {
    case ProbeSpinor::Polynomial: return "polynomial";
    case ProbeSpinor::Trigonometric: return "trigonometric";
    case ProbeSpinor::Gaussian: return "gaussian";
  }
  return "unknown";
}

}  // namespace kkmass
