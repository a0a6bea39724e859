#include "kkmass/models.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace kkmass {
namespace {

using testing::random_point;

constexpr double pi = std::numbers::pi;

ModelSpec spec_of(ModelName name, std::map<std::string, double> params, std::vector<double> fiber = {},
                  PerturbationShape shape = PerturbationShape::PureTrace) {
  ModelSpec spec;
  spec.name = name;
  spec.parameters = std::move(params);
  spec.fiber_periods = std::move(fiber);
  spec.shape = shape;
  return spec;
}

TEST(Models, ParameterLookupFallsBack) {
  const ModelSpec s = spec_of(ModelName::Flat, {{"k", 4}});
  EXPECT_EQ(s.get("k", 3), 4);
  EXPECT_EQ(s.get("missing", 1.5), 1.5);
}

TEST(Models, FlatAndProductFlatAreExactBackgrounds) {
  const MetricField flat = build_model(spec_of(ModelName::Flat, {{"k", 5}}));
  EXPECT_EQ(flat.dim(), 5);
  EXPECT_TRUE(std::isinf(flat.claimed_decay()));
  EXPECT_EQ((flat(Vec::Ones(5)) - Mat::Identity(5, 5)).norm(), 0.0);

  const MetricField prod = build_model(spec_of(ModelName::ProductFlat, {{"k", 3}}, {1.0, 2.0}));
  EXPECT_EQ(prod.dim(), 5);
  EXPECT_DOUBLE_EQ(prod.chart().fiber_volume(), 2.0);
  EXPECT_EQ(prod.background(), Mat(Mat::Identity(5, 5)));
  EXPECT_THROW(build_model(spec_of(ModelName::Flat, {}, {1.0})), InvalidArgument);
}

TEST(Models, SchwarzschildConformalFactor) {
  const MetricField m = build_model(spec_of(ModelName::SchwarzschildSlice, {{"m", 1.0}}));
  Vec x(3);
  x << 2.0, 0.0, 0.0;
  const Mat g = m(x);
  EXPECT_DOUBLE_EQ(g(0, 0), 2.44140625);  // (1 + 1/4)^4
  EXPECT_DOUBLE_EQ(g(1, 1), 2.44140625);
  EXPECT_EQ(g(0, 1), 0.0);
  EXPECT_EQ(m.claimed_decay(), 1.0);
  EXPECT_EQ(m.chart().r_min, 0.0);
}

TEST(Models, SchwarzschildNegativeMassNeedsExcision) {
  EXPECT_THROW(build_model(spec_of(ModelName::SchwarzschildSlice, {{"m", -1.0}, {"r_min", 0.4}})), InvalidArgument);
  const MetricField m = build_model(spec_of(ModelName::SchwarzschildSlice, {{"m", -1.0}}));
  EXPECT_DOUBLE_EQ(m.chart().r_min, 0.75);
}

TEST(Models, SchwarzschildAcceptsFiberFactor) {
  const MetricField m = build_model(spec_of(ModelName::SchwarzschildSlice, {{"m", 1.0}}, {3.0}));
  EXPECT_EQ(m.dim(), 4);
  Vec x(4);
  x << 2.0, 0.0, 0.0, 1.0;
  EXPECT_EQ(m(x)(3, 3), 1.0);
}

TEST(Models, ExactGradientsMatchFiniteDifferences) {
  std::vector<ModelSpec> specs{
      spec_of(ModelName::SchwarzschildSlice, {{"m", 2.0}}, {1.0}),
      spec_of(ModelName::EuclideanRN, {{"m", 1.0}, {"q", 1.0}}),
      spec_of(ModelName::EuclideanRN, {{"m", -1.0}, {"q2", 3.0}}),
  };
  for (PerturbationShape s : {PerturbationShape::PureTrace, PerturbationShape::FiberOnly, PerturbationShape::Mixing,
                              PerturbationShape::Anisotropic}) {
    specs.push_back(spec_of(ModelName::PerturbedProduct, {{"k", 3}, {"epsilon", 0.3}, {"tau", 1.5}}, {1.0, 2.0}, s));
  }
  specs.push_back(spec_of(ModelName::PerturbedProduct, {{"k", 4}, {"epsilon", 0.2}, {"tau", 2.0}}, {1.0},
                          PerturbationShape::Mixing));
  std::mt19937_64 rng(1);
  for (const ModelSpec& spec : specs) {
    const MetricField m = build_model(spec);
    const int k = m.chart().dim_base, f = m.chart().dim_fiber();
    const double r0 = std::max(2.0, 2.0 * m.chart().r_min);
    for (int trial = 0; trial < 4; ++trial) {
      const Vec x = random_point(k, f, r0, 4.0 * r0, rng);
      const auto dg = m.exact_gradient(x);
      const double h = 1e-5;
      for (int c = 0; c < m.dim(); ++c) {
        Vec p = x, q = x;
        p[c] += h;
        q[c] -= h;
        const Mat fd = (m(p) - m(q)) / (2.0 * h);
        EXPECT_LT((dg[c] - fd).cwiseAbs().maxCoeff(), 1e-8) << to_string(spec.name) << " " << to_string(spec.shape);
      }
    }
  }
}

TEST(ReissnerNordstrom, ClosedFormValues) {
  EXPECT_EQ(rn_mass_closed_form(0.0, 1.0), 0.0);
  EXPECT_NEAR(rn_mass_closed_form(1.0, 1.0), 0.0193087, 1e-7);
  EXPECT_NEAR(rn_mass_closed_form(-1.0, 3.0), -1.0 / (2.0 * pi), 1e-15);
  EXPECT_NEAR(rn_horizon(1.0, 1.0), 1.0 + std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(rn_circle_length(0.0, 1.0), 2.0 * pi, 1e-15);
}

TEST(ReissnerNordstrom, RejectsInvalidParameters) {
  EXPECT_THROW(rn_horizon(1.0, -0.5), InvalidArgument);
  EXPECT_THROW(rn_horizon(-1.0, 0.0), InvalidArgument);
  EXPECT_THROW(rn_horizon(std::nan(""), 1.0), InvalidArgument);
  EXPECT_THROW(build_model(spec_of(ModelName::EuclideanRN, {{"m", 1.0}}, {2.0})), InvalidArgument);
  EXPECT_THROW(build_model(spec_of(ModelName::EuclideanRN, {{"m", 1.0}, {"margin", 0.0}})), InvalidArgument);
}

TEST(ReissnerNordstrom, MetricComponentsAndChart) {
  const double mass = 1.0, q2 = 1.0;
  const MetricField m = build_model(spec_of(ModelName::EuclideanRN, {{"m", mass}, {"q2", q2}}));
  const double rp = rn_horizon(mass, q2);
  EXPECT_DOUBLE_EQ(m.chart().r_min, 1.1 * rp);
  ASSERT_EQ(m.chart().dim_fiber(), 1);
  EXPECT_DOUBLE_EQ(m.chart().fiber_periods[0], rn_circle_length(mass, q2));
  for (double r : {5.0, 50.0, 500.0}) {
    Vec x(4);
    x << 0.0, r, 0.0, 0.3;
    const Mat g = m(x);
    EXPECT_NEAR((g(3, 3) - 1.0 + 2.0 * mass / r) * r * r, -q2, 1e-9 * r * r);
    EXPECT_NEAR(g(1, 1) * g(3, 3), 1.0, 1e-12);  // radial block is 1/V
    EXPECT_DOUBLE_EQ(g(0, 0), 1.0);
  }
}

TEST(ReissnerNordstrom, ChargeForCircleRoundTrips) {
  for (double mass : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    const double length = rn_circle_length(1.0, 1.0);
    const double q2 = rn_charge_for_circle(mass, length);
    EXPECT_GE(q2, 0.0);
    EXPECT_NEAR(rn_circle_length(mass, q2), length, 1e-10 * length) << "m = " << mass;
  }
  EXPECT_THROW(rn_charge_for_circle(1.0, -1.0), InvalidArgument);
  EXPECT_THROW(rn_charge_for_circle(10.0, 1.0), InvalidArgument);
}

TEST(ReissnerNordstrom, MassIsMonotoneAtFixedCircle) {
  const double length = rn_circle_length(1.0, 1.0);
  double previous = -1e300;
  for (double mass : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    const double value = rn_mass_closed_form(mass, rn_charge_for_circle(mass, length));
    EXPECT_GT(value, previous);
    previous = value;
  }
}

TEST(PerturbedProduct, ValidatesParameters) {
  EXPECT_THROW(build_model(spec_of(ModelName::PerturbedProduct, {{"tau", 0.0}}, {1.0})), InvalidArgument);
  EXPECT_THROW(build_model(spec_of(ModelName::PerturbedProduct, {{"r_min", 0.0}}, {1.0})), InvalidArgument);
  EXPECT_THROW(build_model(spec_of(ModelName::PerturbedProduct, {{"epsilon", 1.5}}, {1.0})), InvalidArgument);
  EXPECT_THROW(build_model(spec_of(ModelName::PerturbedProduct, {}, {}, PerturbationShape::Mixing)), InvalidArgument);
  EXPECT_THROW(build_model(spec_of(ModelName::PerturbedProduct, {}, {}, PerturbationShape::FiberOnly)),
               InvalidArgument);
  EXPECT_NO_THROW(build_model(spec_of(ModelName::PerturbedProduct, {{"epsilon", 0.5}}, {})));
}

TEST(PerturbedProduct, ShapesHaveTheirStructure) {
  Vec x(5);
  x << 0.0, 0.0, 2.0, 0.1, 0.2;
  const double w = 0.4 * std::pow(2.0, -1.5);
  auto g_of = [&](PerturbationShape s) {
    return build_model(spec_of(ModelName::PerturbedProduct, {{"k", 3}, {"epsilon", 0.4}, {"tau", 1.5}}, {1.0, 1.0}, s))(
        x);
  };
  EXPECT_LT((g_of(PerturbationShape::PureTrace) - (1.0 + w) * Mat::Identity(5, 5)).norm(), 1e-15);

  Mat fiber = Mat::Identity(5, 5);
  fiber.bottomRightCorner(2, 2) *= 1.0 + w;
  EXPECT_LT((g_of(PerturbationShape::FiberOnly) - fiber).norm(), 1e-15);

  const Mat mixing = g_of(PerturbationShape::Mixing);
  EXPECT_NEAR(mixing(2, 3), w, 1e-15);  // n = e_3 couples to the first fiber direction only
  EXPECT_EQ(mixing(0, 3), 0.0);
  EXPECT_EQ(mixing(2, 4), 0.0);

  EXPECT_LT((g_of(PerturbationShape::Anisotropic) - Mat::Identity(5, 5) - w * anisotropic_shape(5)).norm(), 1e-15);
}

TEST(PerturbedProduct, AnisotropicShapeIsSymmetricAndFull) {
  const Mat s = anisotropic_shape(6);
  EXPECT_EQ((s - s.transpose()).norm(), 0.0);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) EXPECT_NE(s(a, b), 0.0);
}

TEST(Models, NamesRoundTrip) {
  for (ModelName n : {ModelName::Flat, ModelName::ProductFlat, ModelName::SchwarzschildSlice, ModelName::EuclideanRN,
                      ModelName::PerturbedProduct}) {
    EXPECT_EQ(parse_model_name(to_string(n)), n);
  }
  for (PerturbationShape s : {PerturbationShape::PureTrace, PerturbationShape::Mixing, PerturbationShape::FiberOnly,
                              PerturbationShape::Anisotropic}) {
    EXPECT_EQ(parse_shape(to_string(s)), s);
  }
  EXPECT_THROW(parse_model_name("kerr"), InvalidArgument);
  EXPECT_THROW(parse_shape("twisted"), InvalidArgument);
}

}  // namespace
}  // namespace kkmass
