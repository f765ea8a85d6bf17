#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sfreject/dataset.hpp"
#include "sfreject/nelder_mead.hpp"
#include "sfreject/reject_option.hpp"

namespace sfreject {

/// Regularisation strengths of the composite semifactual loss.
struct LossWeights {
  double c_feasibility = 10.0;
  double c_sf = 5.0;
  double c_simple = 2.0;
  double c_similarity = 1.0;
  double c_diverse = 10.0;
  /// Number of features that may change before the simplicity penalty starts.
  std::size_t mu = 2;

  void validate() const;
};

/// Features already used by earlier semifactuals of the same input.
class BlacklistSet {
 public:
  BlacklistSet() = default;
  explicit BlacklistSet(IndexSet features);

  bool contains(std::size_t feature) const;
  void insert(std::size_t feature);
  void insert(const IndexSet& features);
  std::size_t size() const { return features_.size(); }
  bool empty() const { return features_.empty(); }
  /// Sorted, unique.
  const IndexSet& features() const { return features_; }

  bool operator==(const BlacklistSet&) const = default;

 private:
  IndexSet features_;
};

/// Indices i with |delta_i| > change_epsilon.
IndexSet changed_features(std::span<const double> delta, double change_epsilon);

/// c_feasibility * max(r_sf - theta, 0) + c_sf * max(r_x - r_sf, 0).
double loss_feas_sf(double r_sf, double r_x, double theta, const LossWeights& w);
/// c_simple * max(#changed - mu, 0).
double loss_simple(std::span<const double> delta, const LossWeights& w, double change_epsilon);
/// -c_similarity * ||delta||_2.
double loss_similarity(std::span<const double> delta, const LossWeights& w);
/// c_diverse * #{j in blacklist : |delta_j| > change_epsilon}.
double loss_diverse(std::span<const double> delta, const BlacklistSet& blacklist,
                    const LossWeights& w, double change_epsilon);

/// Number of features changed in both deltas. Throws DimensionError on a
/// length mismatch.
std::size_t diversity_overlap(std::span<const double> delta_j, std::span<const double> delta_k,
                              double change_epsilon);

/// Sum of the four loss terms for one candidate. Evaluates the certainty of
/// the original input once (on construction) and of the candidate once per
/// call.
class SemifactualLoss {
 public:
  SemifactualLoss(const RejectOption& reject_option, std::span<const double> x,
                  BlacklistSet blacklist, LossWeights weights, double change_epsilon,
                  std::optional<double> certainty_of_x = std::nullopt);

  double operator()(std::span<const double> x_sf) const;
  /// Same as operator() but reuses an already computed certainty of x_sf.
  double evaluate(std::span<const double> x_sf, double r_sf) const;

  double certainty_of_original() const { return r_x_; }
  double theta() const { return theta_; }

 private:
  const RejectOption& reject_option_;
  Vector x_;
  BlacklistSet blacklist_;
  LossWeights weights_;
  double change_epsilon_;
  double r_x_;
  double theta_;
};

/// Free-function form of SemifactualLoss (recomputes r(x) on every call).
double total_loss(std::span<const double> x_sf, std::span<const double> x,
                  const RejectOption& reject_option, const BlacklistSet& blacklist,
                  const LossWeights& w, double change_epsilon);

/// Axis-aligned box the semifactual must lie in. Candidates proposed by the
/// optimizer are clamped into it before evaluation.
struct SearchBox {
  Vector lower;
  Vector upper;

  bool empty() const { return lower.empty(); }
  Vector clamp(std::span<const double> x) const;
  /// Smallest box containing `rows` of `data` and the point `x`, widened by
  /// `margin` times each feature's range on both sides.
  static SearchBox around(const Dataset& data, const IndexSet& rows,
                          std::span<const double> x, double margin);
};

enum class SupportSearch {
  /// One simplex run over all non-blacklisted features.
  kNone,
  /// Also run the simplex on single features and greedily grown supports of
  /// up to mu features; the lowest loss wins.
  kGreedy,
};

std::string to_string(SupportSearch s);
SupportSearch parse_support_search(const std::string& name);

struct SemifactualConfig {
  LossWeights weights;
  SimplexConfig optimizer;
  double change_epsilon = 1e-6;
  SupportSearch support_search = SupportSearch::kGreedy;
  /// Unbounded when empty.
  SearchBox box;

  void validate() const;
};

struct Semifactual {
  Vector x_sf;
  /// x_sf - x, exactly.
  Vector delta;
  double credibility_sf = 0.0;
  /// credibility_sf < theta and credibility_sf >= r(x).
  bool feasible = false;
  IndexSet changed_features;
  double loss = 0.0;
  std::size_t n_evals = 0;
  bool converged = false;
  /// Non-empty when the optimizer failed and x itself was returned.
  std::string diagnostic;
};

struct ExplanationSet {
  Vector original_x;
  double credibility_x = 0.0;
  double theta = 0.0;
  std::size_t k = 0;
  std::vector<Semifactual> semifactuals;
  /// Blacklist in force when the corresponding semifactual was computed.
  std::vector<BlacklistSet> blacklist_trace;
  /// The blacklist covered every feature before k semifactuals were found.
  bool truncated = false;
};

/// One semifactual of the rejected input x. Blacklisted features are frozen
/// at their original values. Throws PreconditionError if x is not rejected.
/// `certainty_of_x` lets callers pass a cached r(x).
Semifactual compute_semifactual(std::span<const double> x, const BlacklistSet& blacklist,
                                const RejectOption& reject_option,
                                const SemifactualConfig& config,
                                std::optional<double> certainty_of_x = std::nullopt);

/// Up to k semifactuals; after each one its changed features join the
/// blacklist. Stops early (truncated) once every feature is blacklisted.
ExplanationSet compute_diverse_semifactuals(std::span<const double> x, std::size_t k,
                                            const RejectOption& reject_option,
                                            const SemifactualConfig& config);

}  // namespace sfreject
