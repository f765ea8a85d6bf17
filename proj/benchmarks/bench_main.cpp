#include <benchmark/benchmark.h>

#include <cmath>
#include <string>

#include "sfreject/experiment.hpp"
#include "sfreject/nelder_mead.hpp"
#include "sfreject/semifactual.hpp"

using namespace sfreject;

namespace {

struct Fixture {
  Dataset data;
  std::vector<FoldSplit> folds;
  ExperimentConfig config;
  FoldModel model;
  Vector rejected;
};

Fixture load(const std::string& name, ClassifierKind kind) {
  Fixture f;
  f.data = load_csv(std::string(SFREJECT_BENCH_DATA_DIR) + "/" + name + ".csv", "label");
  f.config.classifier.kind = kind;
  f.folds = experiment_folds(f.data, f.config);
  f.model = fit_fold(f.data, f.folds, 0, f.config);
  for (std::size_t row : f.model.split.test_indices) {
    const auto x = f.model.standardized.row(row);
    if (f.model.rejector->decide(x).rejected) {
      f.rejected.assign(x.begin(), x.end());
      break;
    }
  }
  return f;
}

const Fixture& fixture(int which) {
  static const Fixture knn = load("wine", ClassifierKind::kKnn);
  static const Fixture gnb = load("wine", ClassifierKind::kGnb);
  return which == 0 ? knn : gnb;
}

const char* label(int which) { return which == 0 ? "knn/wine" : "gnb/wine"; }

void BM_Credibility(benchmark::State& state) {
  const Fixture& f = fixture(static_cast<int>(state.range(0)));
  state.SetLabel(label(static_cast<int>(state.range(0))));
  const auto x = f.model.standardized.row(f.model.split.test_indices.front());
  for (auto _ : state) benchmark::DoNotOptimize(f.model.rejector->credibility(x));
}
BENCHMARK(BM_Credibility)->Arg(0)->Arg(1);

void BM_MinimizeRosenbrock(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const Objective rosen = [](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      s += 100.0 * std::pow(x[i + 1] - x[i] * x[i], 2) + std::pow(1.0 - x[i], 2);
    }
    return s;
  };
  const Vector x0(d, -1.0);
  SimplexConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(minimize(rosen, x0, cfg).f_best);
}
BENCHMARK(BM_MinimizeRosenbrock)->Arg(2)->Arg(5)->Arg(10);

void BM_DiverseSemifactuals(benchmark::State& state) {
  const Fixture& f = fixture(static_cast<int>(state.range(0)));
  state.SetLabel(label(static_cast<int>(state.range(0))));
  if (f.rejected.empty()) {
    state.SkipWithError("no rejected test row in fold 0");
    return;
  }
  SemifactualConfig cfg = f.config.semifactual;
  cfg.box = explanation_box(f.model, f.rejected, f.config);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        compute_diverse_semifactuals(f.rejected, 3, *f.model.rejector, cfg).semifactuals.size());
  }
}
BENCHMARK(BM_DiverseSemifactuals)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
