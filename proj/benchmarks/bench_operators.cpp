#include <benchmark/benchmark.h>

#include <memory>

#include "twp/cutoffs.hpp"
#include "twp/decompose.hpp"
#include "twp/generator.hpp"
#include "twp/grid.hpp"
#include "twp/operators.hpp"
#include "twp/symbol.hpp"

namespace {

twp::GridFunction2D input(const twp::GridGeometry& geo, std::uint64_t seed) {
  twp::Generator g;
  g.kind = twp::GeneratorKind::band_limited_random;
  g.center = {0.5 * geo.l(), 0.5 * geo.l()};
  g.width = geo.l() / 12.0;
  g.annulus = {0.0, 1.5};
  g.check_support = false;
  g.seed = seed;
  return twp::sample(g, geo);
}

void BM_ForwardTransform(benchmark::State& state) {
  twp::GridGeometry geo(static_cast<std::size_t>(state.range(0)), 16.0);
  auto f = input(geo, 1);
  for (auto _ : state) benchmark::DoNotOptimize(twp::forward_transform(f));
}
BENCHMARK(BM_ForwardTransform)->Arg(64)->Arg(128)->Arg(256);

void BM_TwistedMultiplier(benchmark::State& state) {
  twp::GridGeometry geo(static_cast<std::size_t>(state.range(0)), 16.0);
  auto f = input(geo, 1);
  auto g = input(geo, 2);
  auto m = twp::cone_symbol(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(twp::apply_twisted_multiplier(m, f, g));
}
BENCHMARK(BM_TwistedMultiplier)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Paraproduct(benchmark::State& state) {
  twp::GridGeometry geo(static_cast<std::size_t>(state.range(0)), 16.0);
  auto f = input(geo, 1);
  auto g = input(geo, 2);
  twp::ParaproductSpec spec{twp::theta_profile(), twp::vartheta_profile(), {}};
  auto r = twp::default_scale_range(geo);
  for (int k = r.k_min; k <= r.k_max; ++k) spec.lambda[k] = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(twp::apply_paraproduct(spec, f, g));
}
BENCHMARK(BM_Paraproduct)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Coefficients(benchmark::State& state) {
  auto m = std::make_shared<const twp::TwistedSymbol>(twp::cone_symbol(1.0));
  auto slice = twp::slice_symbol(m, 0, twp::shift_exponent(1.0));
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(twp::fourier_coefficients_fixed(slice, n, twp::default_resolution(n)));
}
BENCHMARK(BM_Coefficients)->Arg(2)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_ApplyDecomposed(benchmark::State& state) {
  twp::GridGeometry geo(64, 16.0);
  auto m = std::make_shared<const twp::TwistedSymbol>(twp::cone_symbol(1.0));
  twp::DecompositionOptions opts;
  opts.n_max = static_cast<int>(state.range(0));
  opts.resolution = 512;
  auto d = twp::decompose(m, geo, opts);
  auto f = input(geo, 1);
  auto g = input(geo, 2);
  for (auto _ : state) benchmark::DoNotOptimize(twp::apply_decomposed(d, f, g));
}
BENCHMARK(BM_ApplyDecomposed)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
