#include "sfreject/semifactual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sfreject/error.hpp"

namespace sfreject {

void LossWeights::validate() const {
  if (!(c_feasibility > 0.0 && c_sf > 0.0 && c_simple > 0.0 && c_similarity > 0.0 &&
        c_diverse > 0.0)) {
    throw ConfigError("all loss weights must be positive");
  }
  if (mu < 1) throw ConfigError("loss.mu must be >= 1");
}

BlacklistSet::BlacklistSet(IndexSet features) : features_(std::move(features)) {
  std::sort(features_.begin(), features_.end());
  features_.erase(std::unique(features_.begin(), features_.end()), features_.end());
}

bool BlacklistSet::contains(std::size_t feature) const {
  return std::binary_search(features_.begin(), features_.end(), feature);
}

void BlacklistSet::insert(std::size_t feature) {
  const auto it = std::lower_bound(features_.begin(), features_.end(), feature);
  if (it == features_.end() || *it != feature) features_.insert(it, feature);
}

void BlacklistSet::insert(const IndexSet& features) {
  for (std::size_t f : features) insert(f);
}

IndexSet changed_features(std::span<const double> delta, double change_epsilon) {
  IndexSet out;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (std::abs(delta[i]) > change_epsilon) out.push_back(i);
  }
  return out;
}

double loss_feas_sf(double r_sf, double r_x, double theta, const LossWeights& w) {
  return w.c_feasibility * std::max(r_sf - theta, 0.0) + w.c_sf * std::max(r_x - r_sf, 0.0);
}

double loss_simple(std::span<const double> delta, const LossWeights& w, double change_epsilon) {
  const auto n_changed = static_cast<double>(changed_features(delta, change_epsilon).size());
  return w.c_simple * std::max(n_changed - static_cast<double>(w.mu), 0.0);
}

double loss_similarity(std::span<const double> delta, const LossWeights& w) {
  double sq = 0.0;
  for (double v : delta) sq += v * v;
  return -w.c_similarity * std::sqrt(sq);
}

double loss_diverse(std::span<const double> delta, const BlacklistSet& blacklist,
                    const LossWeights& w, double change_epsilon) {
  std::size_t hits = 0;
  for (std::size_t j : blacklist.features()) {
    if (j < delta.size() && std::abs(delta[j]) > change_epsilon) ++hits;
  }
  return w.c_diverse * static_cast<double>(hits);
}

std::size_t diversity_overlap(std::span<const double> delta_j, std::span<const double> delta_k,
                              double change_epsilon) {
  if (delta_j.size() != delta_k.size()) {
    throw DimensionError("diversity_overlap: deltas differ in length");
  }
  std::size_t n = 0;
  for (std::size_t i = 0; i < delta_j.size(); ++i) {
    if (std::abs(delta_j[i]) > change_epsilon && std::abs(delta_k[i]) > change_epsilon) ++n;
  }
  return n;
}

SemifactualLoss::SemifactualLoss(const RejectOption& reject_option, std::span<const double> x,
                                 BlacklistSet blacklist, LossWeights weights,
                                 double change_epsilon, std::optional<double> certainty_of_x)
    : reject_option_(reject_option),
      x_(x.begin(), x.end()),
      blacklist_(std::move(blacklist)),
      weights_(weights),
      change_epsilon_(change_epsilon),
      r_x_(certainty_of_x ? *certainty_of_x : reject_option.certainty(x)),
      theta_(reject_option.theta()) {
  if (x_.size() != reject_option.n_features()) {
    throw DimensionError("semifactual loss: input dimension does not match the model");
  }
}

double SemifactualLoss::operator()(std::span<const double> x_sf) const {
  return evaluate(x_sf, reject_option_.certainty(x_sf));
}

double SemifactualLoss::evaluate(std::span<const double> x_sf, double r_sf) const {
  if (x_sf.size() != x_.size()) throw DimensionError("semifactual loss: dimension mismatch");
  Vector delta(x_.size());
  for (std::size_t i = 0; i < x_.size(); ++i) delta[i] = x_sf[i] - x_[i];
  return loss_feas_sf(r_sf, r_x_, theta_, weights_) +
         loss_diverse(delta, blacklist_, weights_, change_epsilon_) +
         loss_similarity(delta, weights_) + loss_simple(delta, weights_, change_epsilon_);
}

double total_loss(std::span<const double> x_sf, std::span<const double> x,
                  const RejectOption& reject_option, const BlacklistSet& blacklist,
                  const LossWeights& w, double change_epsilon) {
  return SemifactualLoss(reject_option, x, blacklist, w, change_epsilon)(x_sf);
}

Vector SearchBox::clamp(std::span<const double> x) const {
  Vector out(x.begin(), x.end());
  if (empty()) return out;
  if (lower.size() != x.size() || upper.size() != x.size()) {
    throw DimensionError("search box: dimension mismatch");
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::clamp(out[i], lower[i], upper[i]);
  return out;
}

SearchBox SearchBox::around(const Dataset& data, const IndexSet& rows, std::span<const double> x,
                            double margin) {
  const std::size_t d = data.n_features();
  if (x.size() != d) throw DimensionError("search box: dimension mismatch");
  SearchBox box{Vector(x.begin(), x.end()), Vector(x.begin(), x.end())};
  for (std::size_t i : rows) {
    for (std::size_t j = 0; j < d; ++j) {
      box.lower[j] = std::min(box.lower[j], data.at(i, j));
      box.upper[j] = std::max(box.upper[j], data.at(i, j));
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    const double pad = margin * (box.upper[j] - box.lower[j]);
    box.lower[j] -= pad;
    box.upper[j] += pad;
  }
  return box;
}

std::string to_string(SupportSearch s) {
  return s == SupportSearch::kGreedy ? "greedy" : "none";
}

SupportSearch parse_support_search(const std::string& name) {
  if (name == "greedy") return SupportSearch::kGreedy;
  if (name == "none") return SupportSearch::kNone;
  throw ConfigError("unknown support search '" + name + "' (expected greedy or none)");
}

void SemifactualConfig::validate() const {
  weights.validate();
  optimizer.validate();
  if (!(change_epsilon >= 0.0)) throw ConfigError("change_epsilon must be >= 0");
  if (box.lower.size() != box.upper.size()) throw ConfigError("search box bounds differ in length");
  for (std::size_t i = 0; i < box.lower.size(); ++i) {
    if (!(box.lower[i] <= box.upper[i])) throw ConfigError("search box has lower > upper");
  }
}

namespace {

struct Candidate {
  Vector x;
  double f = std::numeric_limits<double>::infinity();
};

// Box widened, if necessary, so that it contains x.
SearchBox box_containing(const SearchBox& box, std::span<const double> x) {
  if (box.empty()) return box;
  if (box.lower.size() != x.size()) throw DimensionError("search box: dimension mismatch");
  SearchBox out = box;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.lower[i] = std::min(out.lower[i], x[i]);
    out.upper[i] = std::max(out.upper[i], x[i]);
  }
  return out;
}

IndexSet complement(std::size_t d, const IndexSet& keep) {
  std::vector<bool> kept(d, false);
  for (std::size_t i : keep) kept[i] = true;
  IndexSet out;
  for (std::size_t i = 0; i < d; ++i) {
    if (!kept[i]) out.push_back(i);
  }
  return out;
}

}  // namespace

Semifactual compute_semifactual(std::span<const double> x, const BlacklistSet& blacklist,
                                const RejectOption& reject_option,
                                const SemifactualConfig& config,
                                std::optional<double> certainty_of_x) {
  config.validate();
  const std::size_t d = x.size();
  if (d != reject_option.n_features()) {
    throw DimensionError("compute_semifactual: input dimension does not match the model");
  }
  for (std::size_t j : blacklist.features()) {
    if (j >= d) throw DimensionError("compute_semifactual: blacklisted feature out of range");
  }
  const double r_x = certainty_of_x ? *certainty_of_x : reject_option.certainty(x);
  const double theta = reject_option.theta();
  if (!(r_x < theta)) {
    throw PreconditionError("compute_semifactual: input is not rejected (certainty " +
                            std::to_string(r_x) + " >= threshold " + std::to_string(theta) + ")");
  }

  const SemifactualLoss loss(reject_option, x, blacklist, config.weights, config.change_epsilon,
                             r_x);
  const SearchBox box = box_containing(config.box, x);
  const Objective objective = [&](std::span<const double> z) {
    return box.empty() ? loss(z) : loss(box.clamp(z));
  };

  Semifactual sf;
  Candidate best{Vector(x.begin(), x.end()), 0.0};
  std::uint64_t run = 0;
  const auto solve = [&](std::span<const double> start, const IndexSet& frozen) {
    SimplexConfig opt = config.optimizer;
    opt.seed = config.optimizer.seed + 0x9E3779B97F4A7C15ULL * ++run;
    OptimResult r = minimize(objective, start, opt, frozen);
    sf.n_evals += r.n_evals;
    sf.converged = sf.converged || r.converged;
    Candidate c{box.clamp(r.x_best), r.f_best};
    if (c.f < best.f) best = c;
    return c;
  };

  try {
    best.f = objective(x);
    solve(x, blacklist.features());

    if (config.support_search == SupportSearch::kGreedy) {
      const IndexSet free = complement(d, blacklist.features());
      IndexSet support;
      Candidate current{Vector(x.begin(), x.end()), best.f};
      const std::size_t max_support = std::min(config.weights.mu, free.size());
      while (support.size() < max_support) {
        std::optional<std::size_t> best_feature;
        Candidate best_step = current;
        for (std::size_t j : free) {
          if (std::find(support.begin(), support.end(), j) != support.end()) continue;
          IndexSet active = support;
          active.push_back(j);
          const Candidate c = solve(current.x, complement(d, active));
          if (c.f < best_step.f) {
            best_step = c;
            best_feature = j;
          }
        }
        if (!best_feature) break;
        support.push_back(*best_feature);
        current = best_step;
      }
    }
  } catch (const Error& e) {
    best = Candidate{Vector(x.begin(), x.end()), std::numeric_limits<double>::quiet_NaN()};
    sf.diagnostic = e.what();
  }

  sf.x_sf = best.x;
  sf.delta.resize(d);
  for (std::size_t i = 0; i < d; ++i) sf.delta[i] = sf.x_sf[i] - x[i];
  sf.credibility_sf = reject_option.certainty(sf.x_sf);
  sf.feasible = sf.credibility_sf < theta && sf.credibility_sf >= r_x;
  sf.changed_features = changed_features(sf.delta, config.change_epsilon);
  sf.loss = sf.diagnostic.empty() ? loss.evaluate(sf.x_sf, sf.credibility_sf) : best.f;
  return sf;
}

ExplanationSet compute_diverse_semifactuals(std::span<const double> x, std::size_t k,
                                            const RejectOption& reject_option,
                                            const SemifactualConfig& config) {
  if (k < 1) throw ConfigError("number of semifactuals k must be >= 1");
  ExplanationSet out;
  out.original_x.assign(x.begin(), x.end());
  out.k = k;
  out.theta = reject_option.theta();
  out.credibility_x = reject_option.certainty(x);
  if (!(out.credibility_x < out.theta)) {
    throw PreconditionError("compute_diverse_semifactuals: input is not rejected");
  }

  BlacklistSet blacklist;
  for (std::size_t i = 0; i < k; ++i) {
    if (blacklist.size() >= x.size()) {
      out.truncated = true;
      break;
    }
    out.blacklist_trace.push_back(blacklist);
    SemifactualConfig step = config;
    step.optimizer.seed = config.optimizer.seed + i;
    out.semifactuals.push_back(
        compute_semifactual(x, blacklist, reject_option, step, out.credibility_x));
    blacklist.insert(out.semifactuals.back().changed_features);
  }
  return out;
}

}  // namespace sfreject
