// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "sfreject/classifier.hpp"
#include "sfreject/conformal.hpp"
#include "sfreject/experiment.hpp"
#include "sfreject/nelder_mead.hpp"
#include "sfreject/semifactual.hpp"
#include "test_support.hpp"

using namespace sfreject;
using namespace sfreject::testing;

namespace {

int failures = 0;

void report(const std::string& id, bool pass, const std::string& detail) {
  std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Every explanation set produced below, for the diversity check.
std::vector<ExplanationSet> all_sets;

SearchBox cube(std::span<const double> x, double r) {
  SearchBox b;
  for (double v : x) {
    b.lower.push_back(v - r);
    b.upper.push_back(v + r);
  }
  return b;
}

// ---------------------------------------------------------------------------
// 1. Results-table bands on the bundled data sets

void table_bands(const std::string& data_dir) {
  struct Band {
    const char* model;
    const char* dataset;
    double min_feas;
    double max_spars;  // < 0: unchecked
    bool check_div;
    double max_recall;  // < 0: unchecked
  };
  const std::vector<Band> bands{
      {"knn", "wine", 0.90, 0.20, true, 0.40},
      {"knn", "breast_cancer", 0.90, 0.15, false, 0.30},
      {"gnb", "wine", 0.80, -1.0, false, -1.0},
      {"gnb", "breast_cancer", 0.70, -1.0, false, -1.0},
  };
  for (const auto& b : bands) {
    const std::string id = std::string("1 table ") + b.model + "/" + b.dataset;
    const auto path = std::filesystem::path(data_dir) / (std::string(b.dataset) + ".csv");
    if (!std::filesystem::exists(path)) {
      report(id, false, "missing " + path.string() + " (run scripts/fetch_datasets.py)");
      continue;
    }
    const Dataset data = load_csv(path, "label");
    ExperimentConfig config;
    config.classifier.kind = parse_classifier_kind(b.model);
    config.jobs = 1;
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentReport r = run_experiment(data, config, b.dataset);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& s : r.samples) all_sets.push_back(s.explanation);

    bool pass = r.feasibility.n > 0 && r.feasibility.mean >= b.min_feas;
    std::string detail = "Feas " + fmt("%.3f", r.feasibility.mean) + " >= " +
                         fmt("%.2f", b.min_feas);
    if (b.max_spars >= 0.0) {
      pass = pass && r.sparsity.mean <= b.max_spars;
      detail += ", Spars " + fmt("%.3f", r.sparsity.mean) + " <= " + fmt("%.2f", b.max_spars);
    }
    if (b.check_div) {
      pass = pass && r.diversity.mean == 0.0;
      detail += ", Div " + fmt("%.3f", r.diversity.mean) + " == 0";
    }
    if (b.max_recall >= 0.0) {
      pass = pass && r.recall.mean <= b.max_recall;
      detail += ", Recall " + fmt("%.3f", r.recall.mean) + " <= " + fmt("%.2f", b.max_recall);
    }
    if (std::string(b.model) == "knn" && std::string(b.dataset) == "wine") {
      pass = pass && secs < 300.0;
      detail += ", runtime " + fmt("%.1f", secs) + " s < 300 s (1 thread)";
    } else {
      detail += ", runtime " + fmt("%.1f", secs) + " s";
    }
    detail += ", explained " + std::to_string(r.samples.size());
    report(id, pass, detail);
  }
}

// ---------------------------------------------------------------------------
// Synthetic two-class task in 2-D

struct Task {
  Dataset data;
  std::shared_ptr<const ConformalRejector> rejector;
};

// Threshold from the knee of the training rows' credibility, as in the harness.
Task two_gaussian_task(ClassifierKind kind, std::uint64_t seed) {
  Task t{two_gaussians(800, 2, 2.0, seed), nullptr};
  ClassifierConfig cfg;
  cfg.kind = kind;
  const auto model = fit_classifier(cfg, t.data, iota_rows(0, 400));
  const auto base = ConformalRejector::calibrate(model, t.data, iota_rows(400, 800));
  std::vector<double> cred;
  for (std::size_t i = 0; i < 400; ++i) cred.push_back(base.credibility(t.data.row(i)));
  t.rejector = std::make_shared<ConformalRejector>(
      base.with_theta(select_threshold_knee(cred).separating_threshold));
  return t;
}

// Fresh draws from the task distribution that the rejector rejects.
std::vector<Vector> rejected_draws(const Task& t, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  std::vector<Vector> out;
  for (std::size_t tries = 0; out.size() < n && tries < 1000000; ++tries) {
    Vector x{noise(rng) + (coin(rng) ? 1.0 : -1.0), noise(rng)};
    if (t.rejector->decide(x).rejected) out.push_back(std::move(x));
  }
  return out;
}

// Credibility recomputed from the classifier and the stored calibration
// scores by counting.
double counted_credibility(const ConformalRejector& r, std::span<const double> x) {
  const auto probs = r.model().predict_proba(x);
  double best = 0.0;
  for (std::size_t y = 0; y < probs.size(); ++y) {
    double other = -1.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (i != y) other = std::max(other, probs[i]);
    }
    const double phi = other - probs[y];
    std::size_t ge = 0;
    for (double a : r.calib_scores()) ge += a >= phi;
    best = std::max(best, (static_cast<double>(ge) + 1.0) /
                              (static_cast<double>(r.calib_scores().size()) + 1.0));
  }
  return best;
}

// ---------------------------------------------------------------------------
// 2. Every feasible semifactual re-verified

void semifactual_validity() {
  for (auto kind : {ClassifierKind::kGnb, ClassifierKind::kKnn}) {
    const Task t = two_gaussian_task(kind, 101);
    const auto xs = rejected_draws(t, 200, 202);
    std::size_t feasible = 0;
    std::size_t total = 0;
    std::size_t violations = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      SemifactualConfig cfg = default_semifactual_config();
      cfg.box = cube(xs[i], 3.0);
      cfg.optimizer.seed = i;
      const auto set = compute_diverse_semifactuals(xs[i], 3, *t.rejector, cfg);
      all_sets.push_back(set);
      const double r_x = counted_credibility(*t.rejector, xs[i]);
      for (const auto& sf : set.semifactuals) {
        ++total;
        if (!sf.feasible) continue;
        ++feasible;
        const double r_sf = counted_credibility(*t.rejector, sf.x_sf);
        const bool ok = r_sf < t.rejector->theta() && r_sf >= r_x &&
                        t.rejector->decide(sf.x_sf).rejected &&
                        t.rejector->credibility(sf.x_sf) == r_sf;
        violations += !ok;
      }
    }
    report(std::string("2 validity ") + to_string(kind),
           xs.size() == 200 && violations == 0 && feasible > 0,
           "theta " + fmt("%.3f", t.rejector->theta()) + ", " + std::to_string(xs.size()) +
               " rejected samples, " + std::to_string(feasible) + "/" +
               std::to_string(total) + " semifactuals feasible, " +
               std::to_string(violations) + " failed re-verification");
  }
}

// ---------------------------------------------------------------------------
// 4. Lattice oracle

void lattice_optimality() {
  for (auto kind : {ClassifierKind::kGnb, ClassifierKind::kKnn}) {
    const Task t = two_gaussian_task(kind, 303);
    const auto xs = rejected_draws(t, 20, 404);
    std::size_t worse = 0;
    double worst_gap = -1e300;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      SemifactualConfig cfg = default_semifactual_config();
      cfg.box = cube(xs[i], 3.0);
      cfg.optimizer.seed = i;
      const auto sf = compute_semifactual(xs[i], BlacklistSet{}, *t.rejector, cfg);
      const double loss = total_loss(sf.x_sf, xs[i], *t.rejector, BlacklistSet{}, cfg.weights,
                                     cfg.change_epsilon);
      const double oracle =
          lattice_best_loss(*t.rejector, xs[i], cfg.box, cfg.weights, cfg.change_epsilon, 200);
      worst_gap = std::max(worst_gap, loss - oracle);
      worse += loss > oracle + 0.05;
    }
    report(std::string("4 lattice oracle ") + to_string(kind), xs.size() == 20 && worse == 0,
           std::to_string(xs.size() - worse) + "/" + std::to_string(xs.size()) +
               " within 0.05 of the 200x200 lattice optimum (worst loss - lattice = " +
               fmt("%.4f", worst_gap) + ")");
  }
}

// ---------------------------------------------------------------------------
// 3. Hard-blacklist disjointness over everything produced above

void diversity_guarantee() {
  std::size_t bad = 0;
  std::size_t pairs = 0;
  for (const auto& set : all_sets) {
    const auto& sfs = set.semifactuals;
    for (std::size_t a = 0; a < sfs.size(); ++a) {
      for (std::size_t b = a + 1; b < sfs.size(); ++b) {
        ++pairs;
        bad += diversity_overlap(sfs[a].delta, sfs[b].delta, 1e-6) != 0;
      }
    }
  }
  report("3 diversity", bad == 0 && !all_sets.empty(),
         std::to_string(all_sets.size()) + " explanation sets, " + std::to_string(pairs) +
             " pairs, " + std::to_string(bad) + " with overlap > 0");
}

// ---------------------------------------------------------------------------
// 5. Conformal calibration

void calibration() {
  for (auto kind : {ClassifierKind::kGnb, ClassifierKind::kKnn}) {
    const Dataset d = two_gaussians(1800, 2, 1.5, 505);
    ClassifierConfig cfg;
    cfg.kind = kind;
    const auto model = fit_classifier(cfg, d, iota_rows(0, 300));
    const auto r = ConformalRejector::calibrate(model, d, iota_rows(300, 800));
    bool pass = true;
    std::string detail;
    for (double eps : {0.05, 0.1, 0.2}) {
      std::size_t hits = 0;
      for (std::size_t i = 800; i < 1800; ++i) hits += r.p_value(d.row(i), d.label(i)) <= eps;
      const double rate = static_cast<double>(hits) / 1000.0;
      pass = pass && rate <= eps + 0.05;
      detail += "P(p<=" + fmt("%.2f", eps) + ")=" + fmt("%.3f", rate) + " ";
    }
    report(std::string("5 calibration ") + to_string(kind), pass,
           detail + "(bound eps + 0.05, 1000 samples)");
  }
}

// ---------------------------------------------------------------------------
// 6. Optimizer sanity

void optimizer() {
  const SimplexConfig cfg;
  const auto rosen = [](std::span<const double> z) {
    return (1.0 - z[0]) * (1.0 - z[0]) + 100.0 * std::pow(z[1] - z[0] * z[0], 2);
  };
  const auto r = minimize(rosen, Vector{-1.2, 1.0}, cfg);
  std::size_t max_iter = 0;
  for (const auto& tr : r.best_trace) max_iter = std::max(max_iter, tr.size());

  std::mt19937_64 rng(606);
  std::normal_distribution<double> n(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = 2 + t % 4;
    // A = B B^T + I, minimum at c
    std::vector<double> b(d * d);
    for (auto& v : b) v = n(rng);
    Vector c(d);
    for (auto& v : c) v = 2.0 * n(rng);
    const auto quad = [&](std::span<const double> z) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        double proj = 0.0;
        for (std::size_t i = 0; i < d; ++i) proj += b[i * d + k] * (z[i] - c[i]);
        s += proj * proj;
      }
      for (std::size_t i = 0; i < d; ++i) s += (z[i] - c[i]) * (z[i] - c[i]);
      return s;
    };
    const auto q = minimize(quad, Vector(d, 0.0), cfg);
    double err = 0.0;
    for (std::size_t i = 0; i < d; ++i) err += std::pow(q.x_best[i] - c[i], 2);
    worst = std::max(worst, std::sqrt(err));
    for (const auto& tr : q.best_trace) max_iter = std::max(max_iter, tr.size());
  }
  report("6 optimizer", r.f_best < 1e-4 && worst < 1e-3 && max_iter <= 500,
         "Rosenbrock f=" + fmt("%.2e", r.f_best) + " < 1e-4, worst quadratic |x-x*|=" +
             fmt("%.2e", worst) + " < 1e-3 (20 quadratics, d=2..5), max iterations per start " +
             std::to_string(max_iter) + " <= 500");
}

// ---------------------------------------------------------------------------
// 7. Determinism of the benchmark command

void determinism(const std::string& data_dir) {
  const auto dir = temp_dir("acceptance_det");
  const auto csv = std::filesystem::path(data_dir) / "wine.csv";
  std::vector<std::string> files;
  int code = 0;
  for (const char* o : {"a", "b"}) {
    std::ostringstream out, err;
    code |= cli::run({"benchmark", "--dataset", csv.string(), "--seed", "0", "--jobs", "1",
                      "--out", (dir / o).string()},
                     out, err);
    files.push_back(read_file(dir / o / "report.json"));
  }
  const bool same = !files[0].empty() && files[0] == files[1];
  report("7 determinism", code == 0 && same,
         std::string("two benchmark runs, seed 0, --jobs 1: report.json ") +
             (same ? "byte-identical" : "differs") + " (" + std::to_string(files[0].size()) +
             " bytes)");
}

}  // namespace

int main(int argc, char** argv) {
  const std::string data_dir = argc > 1 ? argv[1] : SFREJECT_TEST_DATA_DIR;
  table_bands(data_dir);
  semifactual_validity();
  lattice_optimality();
  diversity_guarantee();
  calibration();
  optimizer();
  determinism(data_dir);
  std::printf("%s: %d criterion line(s) failed\n", failures == 0 ? "ACCEPTED" : "NOT ACCEPTED",
              failures);
  return failures == 0 ? 0 : 1;
}
