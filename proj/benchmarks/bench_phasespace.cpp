#include <benchmark/benchmark.h>

#include "phasespace/decoherence.hpp"
#include "phasespace/metrology.hpp"
#include "phasespace/states.hpp"
#include "phasespace/wigner.hpp"

namespace {

using namespace phasespace;

constexpr double kSigma = 0.5;
constexpr double kX0 = 4.5;
constexpr double kP0 = 10.0;

StateSpec reference_mixture() {
  return make_mixed(make_cat_position(kSigma, kX0), make_cat_momentum(kSigma, kP0), 0.5);
}

PhaseSpaceGrid square_grid(std::size_t n) {
  return PhaseSpaceGrid(Bounds{-8.0, 8.0, -14.0, 14.0}, n, n);
}

void BM_ClosedFormField(benchmark::State& st) {
  const StateSpec state = reference_mixture();
  const PhaseSpaceGrid grid = square_grid(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(wigner_field(state, grid).values.data());
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_ClosedFormField)->Arg(101)->Arg(201)->Arg(401);

void BM_OracleTransform(benchmark::State& st) {
  const StateSpec state = make_cat_position(kSigma, kX0);
  const PhaseSpaceGrid grid = square_grid(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(wigner_transform(state, grid).values.data());
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_OracleTransform)->Arg(101)->Arg(201);

void BM_EvolvedWigner(benchmark::State& st) {
  const CatSpec state = make_cat_position(kSigma, kX0);
  const BathParams bath{1.0, 1.0, 1.0};
  EvolutionGridOptions opt;
  opt.n = static_cast<std::size_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(evolved_wigner(state, bath, 0.01, opt).values.data());
}
BENCHMARK(BM_EvolvedWigner)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_OverlapEvaluation(benchmark::State& st) {
  const StateSpec state = reference_mixture();
  const OverlapEvaluator overlap(field_function(state), overlap_grid(state));
  for (auto _ : st) benchmark::DoNotOptimize(overlap.unit(0.35, 0.157));
}
BENCHMARK(BM_OverlapEvaluation)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
