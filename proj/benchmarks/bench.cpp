#include <benchmark/benchmark.h>

#include "chf/christoffel.hpp"
#include "chf/verification.hpp"

namespace {

void BM_EvaluatorBuildDisc(benchmark::State& state) {
  chf::Domain disc = chf::gallery("disc");
  int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto ev = chf::ChristoffelEvaluator::build(disc, n);
    benchmark::DoNotOptimize(ev.gram());
  }
}
BENCHMARK(BM_EvaluatorBuildDisc)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_LambdaEval(benchmark::State& state) {
  chf::Domain disc = chf::gallery("disc");
  int n = static_cast<int>(state.range(0));
  auto ev = chf::ChristoffelEvaluator::build(disc, n);
  chf::Point2 x{0.3, 0.2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ev.lambda(x));
    x.x = -x.x;
  }
}
BENCHMARK(BM_LambdaEval)->Arg(8)->Arg(16);

void BM_GramSquare(benchmark::State& state) {
  chf::Domain square = chf::gallery("square");
  int n = static_cast<int>(state.range(0));
  chf::PolyBasis basis(n, square.bounding_box());
  for (auto _ : state) {
    auto g = chf::gram_matrix(square, basis);
    benchmark::DoNotOptimize(g);
  }
}
BENCHMARK(BM_GramSquare)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
