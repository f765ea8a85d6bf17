#include "sfreject/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "sfreject/error.hpp"

namespace sfreject {

void SimplexConfig::validate() const {
  if (!(reflection > 0.0)) throw ConfigError("optimizer.reflection must be > 0");
  if (!(expansion > 1.0)) throw ConfigError("optimizer.expansion must be > 1");
  if (!(contraction > 0.0 && contraction < 1.0)) {
    throw ConfigError("optimizer.contraction must lie in (0, 1)");
  }
  if (!(shrink > 0.0 && shrink < 1.0)) throw ConfigError("optimizer.shrink must lie in (0, 1)");
  if (max_iter < 1) throw ConfigError("optimizer.max_iter must be >= 1");
  if (!(x_tol >= 0.0) || !(f_tol >= 0.0)) throw ConfigError("optimizer tolerances must be >= 0");
  if (!(initial_step > 0.0)) throw ConfigError("optimizer.initial_step must be > 0");
  if (n_restarts < 1) throw ConfigError("optimizer.n_restarts must be >= 1");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Vertex {
  Vector z;  // free coordinates only
  double f = kInf;
};

// Evaluates the objective on the reduced (free-coordinate) space.
class ReducedObjective {
 public:
  ReducedObjective(const Objective& objective, std::span<const double> x0, IndexSet free)
      : objective_(objective), full_(x0.begin(), x0.end()), free_(std::move(free)) {}

  double operator()(const Vector& z) {
    ++n_evals_;
    const double f = objective_(embed(z));
    return std::isfinite(f) ? f : kInf;
  }

  const Vector& embed(const Vector& z) {
    for (std::size_t k = 0; k < free_.size(); ++k) full_[free_[k]] = z[k];
    return full_;
  }

  std::size_t n_evals() const { return n_evals_; }

 private:
  const Objective& objective_;
  Vector full_;
  IndexSet free_;
  std::size_t n_evals_ = 0;
};

struct RunResult {
  Vertex best;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

Vector affine(const Vector& base, const Vector& towards, double t) {
  // base + t * (towards - base)
  Vector out(base.size());
  for (std::size_t k = 0; k < base.size(); ++k) out[k] = base[k] + t * (towards[k] - base[k]);
  return out;
}

RunResult run_simplex(ReducedObjective& f, std::vector<Vertex> simplex,
                      const SimplexConfig& cfg) {
  const std::size_t m = simplex.size() - 1;
  RunResult run;
  const auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };

  for (; run.iterations < cfg.max_iter; ++run.iterations) {
    std::stable_sort(simplex.begin(), simplex.end(), by_value);
    const Vertex& best = simplex.front();
    const Vertex& worst = simplex.back();

    double diameter = 0.0;
    for (std::size_t i = 1; i <= m; ++i) {
      for (std::size_t k = 0; k < m; ++k) {
        diameter = std::max(diameter, std::abs(simplex[i].z[k] - best.z[k]));
      }
    }
    if (diameter < cfg.x_tol || worst.f - best.f < cfg.f_tol) {
      run.converged = true;
      break;
    }

    Vector centroid(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t k = 0; k < m; ++k) centroid[k] += simplex[i].z[k];
    }
    for (double& c : centroid) c /= static_cast<double>(m);

    Vertex reflected{affine(centroid, worst.z, -cfg.reflection), 0.0};
    reflected.f = f(reflected.z);

    if (reflected.f < best.f) {
      Vertex expanded{affine(centroid, reflected.z, cfg.expansion), 0.0};
      expanded.f = f(expanded.z);
      simplex.back() = expanded.f < reflected.f ? std::move(expanded) : std::move(reflected);
    } else if (reflected.f < simplex[m - 1].f) {
      simplex.back() = std::move(reflected);
    } else {
      bool accepted = false;
      if (reflected.f < worst.f) {
        Vertex outside{affine(centroid, reflected.z, cfg.contraction), 0.0};
        outside.f = f(outside.z);
        if (outside.f <= reflected.f) {
          simplex.back() = std::move(outside);
          accepted = true;
        }
      } else {
        Vertex inside{affine(centroid, worst.z, cfg.contraction), 0.0};
        inside.f = f(inside.z);
        if (inside.f < worst.f) {
          simplex.back() = std::move(inside);
          accepted = true;
        }
      }
      if (!accepted) {
        for (std::size_t i = 1; i <= m; ++i) {
          simplex[i].z = affine(simplex.front().z, simplex[i].z, cfg.shrink);
          simplex[i].f = f(simplex[i].z);
        }
      }
    }
    run.trace.push_back(std::min_element(simplex.begin(), simplex.end(), by_value)->f);
  }

  run.best = *std::min_element(simplex.begin(), simplex.end(), by_value);
  return run;
}

}  // namespace

OptimResult minimize(const Objective& objective, std::span<const double> x0,
                     const SimplexConfig& config, const IndexSet& frozen) {
  config.validate();
  const std::size_t d = x0.size();
  std::vector<bool> is_frozen(d, false);
  for (std::size_t i : frozen) {
    if (i >= d) {
      throw PreconditionError("minimize: frozen coordinate " + std::to_string(i) +
                              " outside dimension " + std::to_string(d));
    }
    is_frozen[i] = true;
  }
  IndexSet free;
  for (std::size_t i = 0; i < d; ++i) {
    if (!is_frozen[i]) free.push_back(i);
  }

  const double f0 = objective(x0);
  if (!std::isfinite(f0)) throw PreconditionError("minimize: objective is not finite at x0");

  OptimResult result;
  result.x_best.assign(x0.begin(), x0.end());
  result.f_best = f0;
  result.n_evals = 1;
  if (free.empty()) {
    result.converged = true;
    return result;
  }

  const std::size_t m = free.size();
  Vector z0(m);
  for (std::size_t k = 0; k < m; ++k) z0[k] = x0[free[k]];

  ReducedObjective reduced(objective, x0, free);
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> magnitude(0.5, 1.5);
  std::bernoulli_distribution flip(0.5);

  Vertex best{z0, f0};
  for (std::size_t start = 0; start < config.n_restarts; ++start) {
    std::vector<Vertex> simplex;
    simplex.reserve(m + 1);
    simplex.push_back({z0, f0});
    for (std::size_t k = 0; k < m; ++k) {
      Vertex v{z0, 0.0};
      double step = config.initial_step;
      if (start > 0) step *= magnitude(rng) * (flip(rng) ? -1.0 : 1.0);
      v.z[k] += step;
      v.f = reduced(v.z);
      simplex.push_back(std::move(v));
    }
    RunResult run = run_simplex(reduced, std::move(simplex), config);
    result.n_iterations += run.iterations;
    result.converged = result.converged || run.converged;
    result.best_trace.push_back(std::move(run.trace));
    if (run.best.f < best.f) best = std::move(run.best);
  }

  result.x_best = reduced.embed(best.z);
  result.f_best = objective(result.x_best);
  result.n_evals = reduced.n_evals() + 2;
  return result;
}

}  // namespace sfreject
