#include "kkmass/fit.hpp"
#include "kkmass/models.hpp"
#include "kkmass/spin.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>

namespace kkmass {
namespace {

using testing::random_point;
using testing::random_spinor;

MetricField model(ModelName name, std::map<std::string, double> params, std::vector<double> fiber = {},
                  PerturbationShape shape = PerturbationShape::PureTrace) {
  ModelSpec spec;
  spec.name = name;
  spec.parameters = std::move(params);
  spec.fiber_periods = std::move(fiber);
  spec.shape = shape;
  return build_model(spec);
}

MetricField generic_model() {
  return model(ModelName::PerturbedProduct, {{"k", 3}, {"epsilon", 0.4}, {"tau", 1.0}}, {1.0},
               PerturbationShape::Anisotropic);
}

std::shared_ptr<const CliffordRep> rep_for(const MetricField& m) {
  return std::make_shared<const CliffordRep>(m.dim());
}

// Conformally flat slice g = e^{2f} delta with f = 2 log(1 + m / 2r).
struct ConformalOracle {
  double mass;
  double f(const Vec& x) const { return 2.0 * std::log(1.0 + mass / (2.0 * x.norm())); }
  Vec df(const Vec& x) const {
    const double r = x.norm();
    const double psi = 1.0 + mass / (2.0 * r);
    return (2.0 / psi) * (-mass / (2.0 * r * r * r)) * x;
  }
  // omega(a, b, c) = e^{-f} (delta_ac f_b - delta_ab f_c)
  double omega(const Vec& x, int a, int b, int c) const {
    const Vec d = df(x);
    return std::exp(-f(x)) * ((a == c ? d[b] : 0.0) - (a == b ? d[c] : 0.0));
  }
  // torsion of the flat connection that parallelizes e = e^{-f} d:
  // T(e_a, e_b) = e^{-f} (f_a e_b - f_b e_a)
  double torsion(const Vec& x, int a, int b, int c) const {
    const Vec d = df(x);
    return std::exp(-f(x)) * ((b == c ? d[a] : 0.0) - (a == c ? d[b] : 0.0));
  }
};

TEST(SpinConnection, VanishesOnFlatAndProductMetrics) {
  std::mt19937_64 rng(1);
  for (const MetricField& m : {model(ModelName::Flat, {{"k", 4}}), model(ModelName::ProductFlat, {{"k", 3}}, {1.0, 2.0})}) {
    const SpinConnection c = spin_connection(m, random_point(m.chart().dim_base, m.chart().dim_fiber(), 2.0, 5.0, rng));
    for (double v : c.omega.data()) EXPECT_EQ(v, 0.0);
    for (double v : c.omega0.data()) EXPECT_EQ(v, 0.0);
  }
}

TEST(SpinConnection, MatchesConformalOracleOnSchwarzschild) {
  const ConformalOracle oracle{1.0};
  const MetricField m = model(ModelName::SchwarzschildSlice, {{"m", 1.0}});
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    const Vec x = random_point(3, 0, 1.0, 10.0, rng);
    const SpinConnection c = spin_connection(m, x);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int cc = 0; cc < 3; ++cc) EXPECT_NEAR(c.omega(a, b, cc), oracle.omega(x, a, b, cc), 1e-12);
  }
}

TEST(SpinConnection, IsAntisymmetricInTheLastTwoSlots) {
  std::mt19937_64 rng(3);
  for (const MetricField& m : {generic_model(), model(ModelName::EuclideanRN, {{"m", 1.0}, {"q", 1.0}}),
                               model(ModelName::PerturbedProduct, {{"k", 3}, {"epsilon", 0.3}, {"tau", 1.5}}, {1.0},
                                     PerturbationShape::Mixing)}) {
    const Vec x = random_point(3, 1, 4.0, 8.0, rng);
    EXPECT_LT(spin_connection(m, x).antisymmetry_residual(), 1e-10);
  }
}

TEST(SpinConnection, DimensionMismatchIsRejected) {
  const MetricField m = generic_model();
  const CliffordRep wrong(3);
  EXPECT_THROW(local_geometry(m, wrong, Vec::Constant(4, 2.0)), InvalidArgument);
}

TEST(Dirac, LinearSpinorOnFlatSpace) {
  const MetricField m = model(ModelName::Flat, {{"k", 3}});
  const auto rep = rep_for(m);
  std::mt19937_64 rng(4);
  const CVec c0 = random_spinor(2, rng), c1 = random_spinor(2, rng);
  const SpinorField phi{rep, [=](const Vec& x) { return CVec(c0 + x[0] * c1); }};
  Vec x(3);
  x << 1.0, 2.0, 3.0;
  EXPECT_LT((covariant_derivative(m, phi, x, 0) - c1).norm(), 1e-9);
  EXPECT_LT(covariant_derivative(m, phi, x, 1).norm(), 1e-12);
  EXPECT_LT((dirac(m, phi, x) - rep->gamma(0) * c1).norm(), 1e-9);
  EXPECT_THROW(covariant_derivative(m, phi, x, 3), InvalidArgument);
}

TEST(Dirac, SpinorFieldChecksItsFiberDimension) {
  const SpinorField bad{std::make_shared<const CliffordRep>(3), [](const Vec&) { return CVec(CVec::Zero(3)); }};
  EXPECT_THROW(bad(Vec::Ones(3)), InvalidArgument);
}

TEST(Dirac, LichnerowiczFormulaHoldsToSecondOrder) {
  const MetricField m = generic_model();
  const auto rep = rep_for(m);
  std::mt19937_64 rng(5);
  const Vec x = random_point(3, 1, 2.0, 3.0, rng);
  const double scalar = curvature(m, x).scalar;
  ASSERT_GT(std::abs(scalar), 1e-3);
  const SpinorField phi = probe_spinor(rep, m.chart(), ProbeSpinor::Polynomial);
  const std::vector<double> steps{0.02, 0.01, 0.005};
  std::vector<double> residual;
  for (double h : steps) {
    const StepPolicy p{h, false};
    const CVec dd = dirac(m, dirac_field(m, phi, p), x, p);
    const CVec rhs = spinor_laplacian(m, phi, x, p) + 0.25 * scalar * phi(x);
    residual.push_back((dd - rhs).norm());
  }
  EXPECT_LT(residual.back(), 1e-3);
  EXPECT_GE(refinement_order(steps, residual), 1.8);
}

TEST(SpinorCurvature, MatchesFiniteDifferenceCommutator) {
  const MetricField m = generic_model();
  const auto rep = rep_for(m);
  std::mt19937_64 rng(6);
  const Vec x = random_point(3, 1, 2.0, 3.0, rng);
  const StepPolicy p{2e-3, false};
  const CurvatureData curv = curvature(m, x);
  const LocalGeometry geo = local_geometry(m, *rep, x, p);
  const auto rs = spinor_curvature(*rep, curv, geo.frame.e);
  const SpinorField phi = probe_spinor(rep, m.chart(), ProbeSpinor::Trigonometric);
  const auto nabla = covariant_derivatives(m, geo, phi);
  const int n = m.dim();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      CVec fd = covariant_derivatives(m, geo, covariant_derivative_field(m, phi, b, p))[a] -
                covariant_derivatives(m, geo, covariant_derivative_field(m, phi, a, p))[b];
      for (int c = 0; c < n; ++c) {
        fd -= (geo.connection.omega(a, b, c) - geo.connection.omega(b, a, c)) * nabla[c];
      }
      const CVec exact = rs[a * n + b] * phi(x);
      EXPECT_LT((fd - exact).norm(), 1e-4 * std::max(1.0, exact.norm())) << a << b;
    }
}

TEST(SpinorCurvature, CliffordContractionGivesQuarterScalar) {
  const MetricField m = generic_model();
  const CliffordRep rep(m.dim());
  std::mt19937_64 rng(7);
  const Vec x = random_point(3, 1, 2.0, 3.0, rng);
  const CurvatureData curv = curvature(m, x);
  const Mat e = orthonormal_frames(m, x).e;
  const auto rs = spinor_curvature(rep, curv, e);
  const int n = m.dim();
  CMat sum = CMat::Zero(rep.fiber_dim(), rep.fiber_dim());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) sum += 0.5 * rep.product(a, b) * rs[a * n + b];
  EXPECT_LT((sum - 0.25 * curv.scalar * rep.identity()).norm(), 1e-8);
}

// With R(X, Y) = [nabla_X, nabla_Y] - nabla_[X,Y]: sum_a e_a . R(e_a, X) = 1/2 Ric(X) .
TEST(SpinorCurvature, RicciIdentity) {
  const MetricField m = generic_model();
  const CliffordRep rep(m.dim());
  std::mt19937_64 rng(8);
  const Vec x = random_point(3, 1, 2.0, 3.0, rng);
  const CurvatureData curv = curvature(m, x);
  const Mat e = orthonormal_frames(m, x).e;
  const auto rs = spinor_curvature(rep, curv, e);
  const Mat ric = frame_ricci(curv, e);
  EXPECT_NEAR(ric.trace(), curv.scalar, 1e-10);
  const int n = m.dim();
  for (int b = 0; b < n; ++b) {
    CMat lhs = CMat::Zero(rep.fiber_dim(), rep.fiber_dim());
    CMat rhs = CMat::Zero(rep.fiber_dim(), rep.fiber_dim());
    for (int a = 0; a < n; ++a) {
      lhs += rep.gamma(a) * rs[a * n + b];
      rhs += (0.5 * ric(b, a)) * rep.gamma(a);
    }
    EXPECT_LT((lhs - rhs).norm(), 1e-8) << "b = " << b;
  }
}

TEST(Torsion, VanishesOnProductMetric) {
  const MetricField m = model(ModelName::ProductFlat, {{"k", 3}}, {1.0});
  const Tensor3 t = torsion_tensor(m, Vec::Constant(4, 2.0));
  for (double v : t.data()) EXPECT_EQ(v, 0.0);
}

TEST(Torsion, MatchesConformalOracle) {
  const ConformalOracle oracle{1.0};
  const MetricField m = model(ModelName::SchwarzschildSlice, {{"m", 1.0}});
  std::mt19937_64 rng(9);
  const Vec x = random_point(3, 0, 2.0, 6.0, rng);
  const Tensor3 t = torsion_tensor(m, x);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      for (int c = 0; c < 3; ++c) {
        EXPECT_NEAR(t(a, b, c), oracle.torsion(x, a, b, c), 1e-8);
        EXPECT_NEAR(t(a, b, c), -t(b, a, c), 1e-14);
      }
      const Vec tv = torsion_of_nabla0(m, x, a, b);
      for (int c = 0; c < 3; ++c) EXPECT_EQ(tv[c], t(a, b, c));
    }
  EXPECT_THROW(torsion_of_nabla0(m, x, 0, 3), InvalidArgument);
}

TEST(ConnectionDifference, TorsionRouteAgrees) {
  std::mt19937_64 rng(10);
  for (const MetricField& m : {generic_model(), model(ModelName::PerturbedProduct,
                                                       {{"k", 3}, {"epsilon", 0.3}, {"tau", 1.5}}, {1.0},
                                                       PerturbationShape::Mixing)}) {
    const CliffordRep rep(m.dim());
    const Vec x = random_point(3, 1, 2.0, 4.0, rng);
    const Tensor3 t = torsion_tensor(m, x);
    for (int a = 0; a < m.dim(); ++a) {
      const ConnectionDifference d = connection_difference(m, rep, x, a);
      EXPECT_LT((d.exact - connection_difference_from_torsion(rep, t, a)).norm(), 1e-8);
    }
  }
}

TEST(ConnectionDifference, LeadingTermCapturesFirstOrder) {
  const MetricField m = generic_model();
  const CliffordRep rep(m.dim());
  std::vector<double> radii{20, 40, 80, 160}, remainder;
  for (double r : radii) {
    Vec x = Vec::Zero(4);
    x.head(3) << r * 0.6, r * 0.0, r * 0.8;
    const ConnectionDifference d = connection_difference(m, rep, x, 1);
    remainder.push_back((d.exact - d.leading).norm());
  }
  // exact - leading is quadratic in (h, dh): order r^{-(2 tau + 1)} with tau = 1
  EXPECT_LE(loglog_slope(radii, remainder), -2.9);
}

TEST(ConnectionDifference, ExactTermActsAsCovariantDerivativeOfConstantSpinor) {
  const MetricField m = generic_model();
  const auto rep = rep_for(m);
  const CVec base = CVec::Unit(2, 0), fiber = CVec::Unit(1, 0);
  const SpinorField phi0 = approx_parallel_spinor(m, rep, base, fiber);
  std::mt19937_64 rng(11);
  const Vec x = random_point(3, 1, 2.0, 4.0, rng);
  for (int a = 0; a < 4; ++a) {
    const ConnectionDifference d = connection_difference(m, *rep, x, a);
    EXPECT_LT((covariant_derivative(m, phi0, x, a) - d.exact * phi0(x)).norm(), 1e-12);
  }
  EXPECT_THROW(connection_difference(m, *rep, x, 4), InvalidArgument);
}

TEST(ParallelSpinor, UnitNormAndPadding) {
  std::mt19937_64 rng(12);
  // k = 3, one fiber circle: 2 x 1 components padded into the 4-dim representation
  const MetricField odd = generic_model();
  const SpinorField p = approx_parallel_spinor(odd, rep_for(odd), CVec::Unit(2, 1), CVec::Unit(1, 0));
  const CVec v = p(random_point(3, 1, 2.0, 4.0, rng));
  ASSERT_EQ(v.size(), 4);
  EXPECT_NEAR(v.norm(), 1.0, 1e-15);
  EXPECT_EQ(v[2], Complex(1.0, 0.0));

  // k = 4, two fiber circles: 4 x 2 = 8 = 2^3, no padding
  const MetricField even = model(ModelName::ProductFlat, {{"k", 4}}, {1.0, 1.0});
  CVec b = random_spinor(4, rng), f = random_spinor(2, rng);
  b.normalize();
  f.normalize();
  const CVec w = approx_parallel_spinor(even, rep_for(even), b, f)(random_point(4, 2, 2.0, 4.0, rng));
  EXPECT_NEAR(w.norm(), 1.0, 1e-14);
  EXPECT_EQ(w[3], b[1] * f[1]);
}

TEST(ParallelSpinor, RejectsBadFactors) {
  const MetricField m = generic_model();
  const auto rep = rep_for(m);
  EXPECT_THROW(approx_parallel_spinor(m, rep, CVec::Unit(4, 0), CVec::Unit(1, 0)), InvalidArgument);
  EXPECT_THROW(approx_parallel_spinor(m, rep, CVec::Unit(2, 0), CVec::Unit(2, 0)), InvalidArgument);
  EXPECT_THROW(approx_parallel_spinor(m, rep, 2.0 * CVec::Unit(2, 0), CVec::Unit(1, 0)), InvalidArgument);
  EXPECT_THROW(approx_parallel_spinor(m, std::make_shared<const CliffordRep>(3), CVec::Unit(2, 0), CVec::Unit(1, 0)),
               InvalidArgument);
}

TEST(ProbeSpinor, PeriodicInTheFiber) {
  const Chart chart{3, {1.5, 2.5}, 0.0};
  const auto rep = std::make_shared<const CliffordRep>(5);
  std::mt19937_64 rng(13);
  for (ProbeSpinor kind : {ProbeSpinor::Polynomial, ProbeSpinor::Trigonometric, ProbeSpinor::Gaussian}) {
    const SpinorField phi = probe_spinor(rep, chart, kind);
    const Vec x = random_point(3, 2, 1.0, 3.0, rng);
    Vec y = x;
    y[3] += 1.5;
    y[4] -= 2.5;
    EXPECT_LT((phi(x) - phi(y)).norm(), 1e-12) << to_string(kind);
    EXPECT_GT(phi(x).norm(), 0.0);
  }
}

}  // namespace
}  // namespace kkmass
