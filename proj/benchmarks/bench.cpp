#include <benchmark/benchmark.h>

#include "minsurf/families.hpp"
#include "minsurf/kernel.hpp"
#include "minsurf/shape.hpp"

namespace {

using namespace minsurf;

void bm_fd_jet(benchmark::State& state) {
  const Immersion imm = make_example11(Example11Params::standard_basis());
  DiffConfig cfg;
  cfg.use_analytic = false;
  const Vec3 p(0.3, 0.7, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(jet_of(imm, p, cfg));
}
BENCHMARK(bm_fd_jet);

void bm_analytic_jet(benchmark::State& state) {
  const Immersion imm = make_example11(Example11Params::standard_basis());
  const DiffConfig cfg;
  const Vec3 p(0.3, 0.7, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(jet_of(imm, p, cfg));
}
BENCHMARK(bm_analytic_jet);

void bm_pencil_eig(benchmark::State& state) {
  Mat3 A, B;
  A << 2, 1, 0, 1, -1, 0.5, 0, 0.5, -1.2;
  B << 2, 0.1, 0, 0.1, 1.5, 0, 0, 0, 1.1;
  for (auto _ : state) benchmark::DoNotOptimize(generalized_sym_eig3(A, B));
}
BENCHMARK(bm_pencil_eig);

void bm_curvature(benchmark::State& state) {
  const Immersion imm = make_example11(Example11Params::standard_basis());
  const DiffConfig cfg;
  const Vec3 p(0.3, 0.7, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(curvature(imm, p, cfg));
}
BENCHMARK(bm_curvature);

void bm_codazzi(benchmark::State& state) {
  const Immersion imm = make_example11(Example11Params::standard_basis());
  const DiffConfig cfg;
  const Vec3 p(0.3, 0.7, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(codazzi_residuals(imm, p, cfg));
}
BENCHMARK(bm_codazzi);

}  // namespace

BENCHMARK_MAIN();
