#include "kkmass/geometry.hpp"

#include "kkmass/fit.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace kkmass {

double Chart::fiber_volume() const {
  double v = 1.0;
  for (double p : fiber_periods) v *= p;
  return v;
}

double Chart::base_radius(const Vec& x) const { return x.head(dim_base).norm(); }

bool Chart::contains(const Vec& x) const {
  if (x.size() != dim()) return false;
  if (!x.allFinite()) return false;
  const double r = base_radius(x);
  return r > r_min && r <= r_max;
}

void Chart::validate() const {
  if (dim_base < 1) throw InvalidArgument("chart needs a Euclidean factor of dimension >= 1");
  for (double p : fiber_periods) {
    if (!(p > 0.0) || !std::isfinite(p)) throw InvalidArgument("fiber periods must be positive");
  }
  if (!(r_min >= 0.0) || !(r_max > r_min)) throw InvalidArgument("chart radii must satisfy 0 <= r_min < r_max");
}

double StepPolicy::at(double r) const { return relative ? step * std::max(1.0, r) : step; }

MetricField::MetricField(Chart chart, MetricFn metric, std::optional<Mat> background,
                         double claimed_decay, GradientFn gradient)
    : chart_(std::move(chart)),
      metric_(std::move(metric)),
      background_(std::move(background)),
      claimed_decay_(claimed_decay),
      gradient_(std::move(gradient)) {
  chart_.validate();
  if (!metric_) throw InvalidArgument("metric evaluator is empty");
  if (background_) {
    const int n = chart_.dim();
    if (background_->rows() != n || background_->cols() != n) {
      throw InvalidArgument("background metric has the wrong size");
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(*background_);
    if (es.eigenvalues().minCoeff() <= 0.0) {
      throw InvalidArgument("background metric is not positive definite");
    }
  }
}

Mat MetricField::operator()(const Vec& x) const {
  if (!chart_.contains(x)) {
    std::ostringstream os;
    os << "point outside chart (r = " << (x.size() == dim() ? chart_.base_radius(x) : -1.0)
       << ", r_min = " << chart_.r_min << ")";
    throw ChartError(os.str());
  }
  Mat g = metric_(x);
  if (g.rows() != dim() || g.cols() != dim()) throw SingularMetric("metric evaluator returned the wrong size");
  if (!g.allFinite()) throw SingularMetric("metric evaluator returned non-finite values");
  return g;
}

const Mat& MetricField::background() const {
  if (!background_) throw InvalidArgument("metric has no background product metric");
  return *background_;
}

std::vector<Mat> MetricField::exact_gradient(const Vec& x) const {
  if (!gradient_) throw InvalidArgument("metric has no closed-form gradient");
  if (!chart_.contains(x)) throw ChartError("point outside chart");
  auto dg = gradient_(x);
  if (static_cast<int>(dg.size()) != dim()) throw SingularMetric("gradient evaluator returned the wrong size");
  for (const auto& d : dg) {
    if (!d.allFinite()) throw SingularMetric("gradient evaluator returned non-finite values");
  }
  return dg;
}

namespace {

Vec shifted(const Vec& x, int c, double h) {
  Vec y = x;
  y[c] += h;
  return y;
}

void require_stencil(const Chart& chart, const Vec& x, double h, int reach) {
  if (!chart.contains(x)) throw ChartError("point outside chart");
  const int n = chart.dim();
  for (int c = 0; c < n; ++c) {
    for (int s : {-reach, reach}) {
      if (!chart.contains(shifted(x, c, s * h))) {
        throw ChartError("point too close to chart boundary for the finite-difference stencil");
      }
    }
  }
}

std::vector<Mat> gradient_at(const MetricField& m, const Vec& x, double h) {
  if (m.has_exact_gradient()) return m.exact_gradient(x);
  const int n = m.dim();
  std::vector<Mat> dg(n);
  for (int c = 0; c < n; ++c) {
    dg[c] = (m(shifted(x, c, h)) - m(shifted(x, c, -h))) / (2.0 * h);
  }
  return dg;
}

}  // namespace

MetricJet metric_derivatives(const MetricField& m, const Vec& x, int order, const StepPolicy& policy) {
  if (order != 1 && order != 2) throw InvalidArgument("derivative order must be 1 or 2");
  const Chart& chart = m.chart();
  const int n = m.dim();
  if (x.size() != n) throw InvalidArgument("point has the wrong dimension");
  const double h = policy.at(chart.base_radius(x));
  if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");

  const bool exact = m.has_exact_gradient();
  // First derivatives of g need reach 1; second derivatives from g need reach
  // 2 on the diagonal and the (+-h, +-h) corners, which the reach-2 check covers
  // up to the corners themselves.
  require_stencil(chart, x, h, (order == 2 && !exact) ? 2 : 1);

  MetricJet jet;
  jet.g = m(x);
  jet.dg = gradient_at(m, x, h);
  if (order == 1) return jet;

  jet.ddg.assign(n, std::vector<Mat>(n));
  if (exact) {
    for (int c = 0; c < n; ++c) {
      const auto plus = m.exact_gradient(shifted(x, c, h));
      const auto minus = m.exact_gradient(shifted(x, c, -h));
      for (int d = 0; d < n; ++d) jet.ddg[c][d] = (plus[d] - minus[d]) / (2.0 * h);
    }
    return jet;
  }
  for (int c = 0; c < n; ++c) {
    const Mat gp = m(shifted(x, c, h));
    const Mat gm = m(shifted(x, c, -h));
    jet.ddg[c][c] = (gp - 2.0 * jet.g + gm) / (h * h);
    for (int d = c + 1; d < n; ++d) {
      Vec pp = x, pm = x, mp = x, mm = x;
      pp[c] += h; pp[d] += h;
      pm[c] += h; pm[d] -= h;
      mp[c] -= h; mp[d] += h;
      mm[c] -= h; mm[d] -= h;
      for (const auto* p : {&pp, &pm, &mp, &mm}) {
        if (!chart.contains(*p)) throw ChartError("point too close to chart boundary for the finite-difference stencil");
      }
      jet.ddg[c][d] = (m(pp) - m(pm) - m(mp) + m(mm)) / (4.0 * h * h);
      jet.ddg[d][c] = jet.ddg[c][d];
    }
  }
  return jet;
}

CurvatureData curvature(const MetricField& m, const Vec& x, const StepPolicy& policy) {
  const int n = m.dim();
  const MetricJet jet = metric_derivatives(m, x, 2, policy);

  CurvatureData out;
  out.metric = jet.g;
  Eigen::FullPivLU<Mat> lu(jet.g);
  if (!lu.isInvertible()) throw SingularMetric("metric is singular at the evaluation point");
  const Mat ginv = lu.inverse();
  out.inverse_metric = ginv;

  // lowered(d, a, b) = d_a g_db + d_b g_da - d_d g_ab
  Tensor3 lowered(n);
  for (int d = 0; d < n; ++d)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        lowered(d, a, b) = jet.dg[a](d, b) + jet.dg[b](d, a) - jet.dg[d](a, b);

  Tensor3& gamma = out.christoffel = Tensor3(n);
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int d = 0; d < n; ++d) s += ginv(c, d) * lowered(d, a, b);
        gamma(c, a, b) = 0.5 * s;
      }

  // dgamma[e](c, a, b) = d_e Gamma^c_ab
  std::vector<Tensor3> dgamma(n, Tensor3(n));
  for (int e = 0; e < n; ++e) {
    const Mat dginv = -ginv * jet.dg[e] * ginv;
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double s = 0.0;
          for (int d = 0; d < n; ++d) {
            const double dl = jet.ddg[e][a](d, b) + jet.ddg[e][b](d, a) - jet.ddg[e][d](a, b);
            s += dginv(c, d) * lowered(d, a, b) + ginv(c, d) * dl;
          }
          dgamma[e](c, a, b) = 0.5 * s;
        }
  }

  // up(d, c, a, b) = R^d_cab, R(d_a, d_b) d_c = R^d_cab d_d
  Tensor4 up(n);
  for (int d = 0; d < n; ++d)
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double s = dgamma[a](d, b, c) - dgamma[b](d, a, c);
          for (int e = 0; e < n; ++e) s += gamma(d, a, e) * gamma(e, b, c) - gamma(d, b, e) * gamma(e, a, c);
          up(d, c, a, b) = s;
        }

  out.riemann = Tensor4(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double s = 0.0;
          for (int p = 0; p < n; ++p) s += jet.g(a, p) * up(p, b, c, d);
          out.riemann(a, b, c, d) = s;
        }

  out.ricci = Mat::Zero(n, n);
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) s += up(a, d, a, b);
      out.ricci(b, d) = s;
    }
  out.scalar = (ginv.cwiseProduct(out.ricci)).sum();
  return out;
}

double CurvatureData::antisymmetry_residual() const {
  const int n = riemann.dim();
  double r = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          r = std::max(r, std::abs(riemann(a, b, c, d) + riemann(b, a, c, d)));
          r = std::max(r, std::abs(riemann(a, b, c, d) + riemann(a, b, d, c)));
        }
  return r;
}

double CurvatureData::bianchi_residual() const {
  const int n = riemann.dim();
  double r = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          r = std::max(r, std::abs(riemann(a, b, c, d) + riemann(a, c, d, b) + riemann(a, d, b, c)));
  return r;
}

double CurvatureData::trace_residual() const {
  const int n = riemann.dim();
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) s += inverse_metric(a, c) * inverse_metric(b, d) * riemann(a, b, c, d);
  return std::abs(scalar - s);
}

double FrameData::orthonormality_residual(const Mat& g) const {
  const int n = static_cast<int>(e.cols());
  return (e.transpose() * g * e - Mat::Identity(n, n)).cwiseAbs().maxCoeff();
}

namespace {

Mat inverse_sqrt(const Mat& s) {
  Eigen::SelfAdjointEigenSolver<Mat> es(s);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
    throw SingularMetric("metric is not positive definite at the evaluation point");
  }
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace

FrameData orthonormal_frames(const MetricField& m, const Vec& x) {
  FrameData f;
  f.e0 = inverse_sqrt(m.background());
  const Mat g = m(x);
  const Mat gram = f.e0.transpose() * g * f.e0;
  f.gauge = inverse_sqrt(0.5 * (gram + gram.transpose()));
  f.e = f.e0 * f.gauge;
  return f;
}

std::vector<Mat> frame_gradient(const Mat& e0, const Mat& g, const std::vector<Mat>& dg) {
  const Mat gram = e0.transpose() * g * e0;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (gram + gram.transpose()));
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
    throw SingularMetric("metric is not positive definite at the evaluation point");
  }
  const Mat& q = es.eigenvectors();
  const Vec s = es.eigenvalues().cwiseSqrt();
  const auto n = s.size();
  // divided difference of t -> t^{-1/2} between eigenvalues s_i^2 and s_j^2
  Mat weight(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) weight(i, j) = -1.0 / (s[i] * s[j] * (s[i] + s[j]));

  std::vector<Mat> out;
  out.reserve(dg.size());
  for (const Mat& d : dg) {
    const Mat rotated = q.transpose() * (e0.transpose() * d * e0) * q;
    out.push_back(e0 * (q * rotated.cwiseProduct(weight) * q.transpose()));
  }
  return out;
}

Mat perturbation(const MetricField& m, const Vec& x) {
  const Mat e0 = inverse_sqrt(m.background());
  return e0.transpose() * (m(x) - m.background()) * e0;
}

std::vector<Vec> shell_samples(const Chart& chart, double radius, int count, std::uint64_t seed) {
  if (count < 1) throw InvalidArgument("need at least one sample per shell");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vec> out;
  out.reserve(count);
  for (int s = 0; s < count; ++s) {
    Vec x(chart.dim());
    Vec dir(chart.dim_base);
    do {
      for (int i = 0; i < chart.dim_base; ++i) dir[i] = normal(rng);
    } while (dir.norm() < 1e-12);
    x.head(chart.dim_base) = radius * dir / dir.norm();
    for (int a = 0; a < chart.dim_fiber(); ++a) x[chart.dim_base + a] = unit(rng) * chart.fiber_periods[a];
    out.push_back(std::move(x));
  }
  return out;
}

DecayReport decay_order(const MetricField& m, const std::vector<double>& radii, const DecayOptions& options) {
  if (radii.size() < 3) throw InvalidArgument("decay fit needs at least three radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > m.chart().r_min)) throw InvalidArgument("decay radius inside the excluded ball");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw InvalidArgument("decay radii must be strictly increasing");
  }
  const int n = m.dim();
  const Mat e0 = inverse_sqrt(m.background());

  DecayReport report;
  report.radii = radii;
  report.base_dim = m.chart().dim_base;
  DecayFit fh{"h", {}, 0, 0, false}, fg{"grad_h", {}, 0, 0, false}, fhh{"hess_h", {}, 0, 0, false};

  for (double radius : radii) {
    double nh = 0.0, ng = 0.0, nhh = 0.0;
    for (const Vec& x : shell_samples(m.chart(), radius, options.samples_per_shell, options.seed)) {
      const MetricJet jet = metric_derivatives(m, x, 2, options.policy);
      nh = std::max(nh, (e0.transpose() * (jet.g - m.background()) * e0).cwiseAbs().maxCoeff());
      // derivatives along e0_c of background-frame components
      for (int c = 0; c < n; ++c) {
        Mat d = Mat::Zero(n, n);
        for (int mu = 0; mu < n; ++mu) d += e0(mu, c) * jet.dg[mu];
        ng = std::max(ng, (e0.transpose() * d * e0).cwiseAbs().maxCoeff());
        for (int c2 = 0; c2 < n; ++c2) {
          Mat dd = Mat::Zero(n, n);
          for (int mu = 0; mu < n; ++mu)
            for (int nu = 0; nu < n; ++nu) dd += e0(mu, c) * e0(nu, c2) * jet.ddg[mu][nu];
          nhh = std::max(nhh, (e0.transpose() * dd * e0).cwiseAbs().maxCoeff());
        }
      }
    }
    fh.norms.push_back(nh);
    fg.norms.push_back(ng);
    fhh.norms.push_back(nhh);
  }

  double tau = std::numeric_limits<double>::infinity();
  int order = 0;
  for (DecayFit* f : {&fh, &fg, &fhh}) {
    f->below_noise = std::all_of(f->norms.begin(), f->norms.end(),
                                 [&](double v) { return v < options.noise_floor; });
    if (!f->below_noise) {
      if (std::any_of(f->norms.begin(), f->norms.end(), [](double v) { return !(v > 0.0); })) {
        throw InvalidArgument("degenerate decay fit: " + f->quantity + " vanishes on some shells");
      }
      f->slope = -loglog_slope(radii, f->norms);
      f->tau = f->slope - order;
      tau = std::min(tau, f->tau);
    } else {
      f->slope = f->tau = std::numeric_limits<double>::infinity();
    }
    ++order;
  }
  report.fits = {fh, fg, fhh};
  report.exact_background = fh.below_noise;
  report.tau = report.exact_background ? std::numeric_limits<double>::infinity() : tau;
  const double threshold = 0.5 * (report.base_dim - 2);
  report.mass_well_defined = report.tau > threshold;
  if (!report.mass_well_defined) report.flag = "mass possibly coordinate-dependent";
  return report;
}

}  // namespace kkmass
