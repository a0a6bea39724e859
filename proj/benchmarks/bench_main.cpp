#include "kkmass/mass.hpp"
#include "kkmass/models.hpp"

#include <benchmark/benchmark.h>

#include <memory>

namespace {

using namespace kkmass;

MetricField rn_model() {
  ModelSpec spec;
  spec.name = ModelName::EuclideanRN;
  spec.parameters = {{"m", 1.0}, {"q", 1.0}};
  return build_model(spec);
}

MetricField anisotropic_model() {
  ModelSpec spec;
  spec.name = ModelName::PerturbedProduct;
  spec.parameters = {{"epsilon", 0.3}, {"tau", 1.5}};
  spec.fiber_periods = {1.0};
  spec.shape = PerturbationShape::Anisotropic;
  return build_model(spec);
}

void BM_ShellQuadratureConstruction(benchmark::State& state) {
  const QuadratureSpec spec{static_cast<int>(state.range(0)), 2 * static_cast<int>(state.range(0)), 8};
  for (auto _ : state) benchmark::DoNotOptimize(ShellQuadrature(Chart{3, {1.0}, 0.0}, spec).size());
}
BENCHMARK(BM_ShellQuadratureConstruction)->Arg(8)->Arg(16)->Arg(32);

void BM_LocalGeometry(benchmark::State& state) {
  const MetricField m = anisotropic_model();
  const CliffordRep rep(m.dim());
  Vec x(4);
  x << 3.0, -2.0, 1.0, 0.4;
  for (auto _ : state) benchmark::DoNotOptimize(local_geometry(m, rep, x).spin_matrix.size());
}
BENCHMARK(BM_LocalGeometry);

void BM_DivergenceIdentity(benchmark::State& state) {
  const MetricField m = anisotropic_model();
  auto rep = std::make_shared<const CliffordRep>(m.dim());
  const SpinorField phi = probe_spinor(rep, m.chart(), ProbeSpinor::Polynomial);
  Vec x(4);
  x << 3.0, -2.0, 1.0, 0.4;
  for (auto _ : state) benchmark::DoNotOptimize(divergence_identity_residual(m, phi, x, {0.01, false}).residual);
}
BENCHMARK(BM_DivergenceIdentity);

void BM_RnMass(benchmark::State& state) {
  const MetricField m = rn_model();
  const auto radii = geometric_ladder(62.5);
  MassOptions options;
  options.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mass(m, radii, {}, options).limit);
}
BENCHMARK(BM_RnMass)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
