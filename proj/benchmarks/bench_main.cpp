#include <benchmark/benchmark.h>

#include "classagg/rules.hpp"
#include "classagg/theorem_lab.hpp"

using namespace classagg;

namespace {

void BM_SearchSovereign(benchmark::State& state) {
  SearchSpec spec{.params = Params::make(static_cast<int>(state.range(0)), 3, 2)};
  spec.required.citizen_sovereignty = true;
  spec.prune_category_symmetry = state.range(1) != 0;
  for (auto _ : state) {
    auto report = enumerate_independent_cafs(spec);
    benchmark::DoNotOptimize(report.valid_count);
    state.counters["checks"] = static_cast<double>(report.checks);
  }
}
BENCHMARK(BM_SearchSovereign)->Args({2, 0})->Args({2, 1})->Args({3, 0})->Args({3, 1})->Unit(benchmark::kMillisecond);

void BM_SearchUnanimousThreeCategories(benchmark::State& state) {
  SearchSpec spec{.params = Params::make(2, 3, 3)};
  spec.required.unanimity = true;
  spec.constraint = TableConstraint::UnanimousOnConstants;
  spec.prune_category_symmetry = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_independent_cafs(spec).valid_count);
}
BENCHMARK(BM_SearchUnanimousThreeCategories)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CheckValidity(benchmark::State& state) {
  const auto params = Params::make(static_cast<int>(state.range(0)), 4, 3);
  const auto caf = make_essential_dictatorship(params, 0, CategoryPermutation::identity(3)).independent;
  for (auto _ : state) benchmark::DoNotOptimize(check_validity(caf).pass);
}
BENCHMARK(BM_CheckValidity)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

void BM_CheckIndependencePlurality(benchmark::State& state) {
  const auto params = Params::make(static_cast<int>(state.range(0)), 3, 2);
  const auto rule = make_plurality(params, TieBreakOrder::descending_lex(params));
  for (auto _ : state) benchmark::DoNotOptimize(check_independence(rule).pass);
}
BENCHMARK(BM_CheckIndependencePlurality)->Arg(3)->Arg(5)->Unit(benchmark::kMicrosecond);

void BM_ExtractPivotal(benchmark::State& state) {
  const auto params = Params::make(static_cast<int>(state.range(0)), 4, 3);
  const auto caf = make_essential_dictatorship(params, 1, CategoryPermutation::make({2, 0, 1})).independent;
  for (auto _ : state) benchmark::DoNotOptimize(extract_dictator_pivotal(caf).individual);
}
BENCHMARK(BM_ExtractPivotal)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
