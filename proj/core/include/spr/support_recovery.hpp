#pragma once

// Greedy support recovery from unlabeled, possibly noisy pairwise
// differences, with an optional lookup-table cache and three noise
// resilience strategies (pruning, symmetric cost, partial denoising).

#include <cstddef>
#include <vector>

#include "spr/model.hpp"

namespace spr {

struct RecoveryConfig {
  bool use_caching = false;
  // Drop the 2k differences explained by each newly accepted point.
  bool prune_differences = false;
  // Score p - x and x - p jointly.
  bool symmetric_cost = false;
  // Re-estimate the partial solution from its labeled differences after
  // every acceptance. Incompatible with caching.
  bool denoise_partials = false;

  // Throws InvalidArgument when caching and denoising are both requested.
  void validate() const;

  static RecoveryConfig AllImprovements() { return {false, true, true, true}; }
  friend bool operator==(const RecoveryConfig&, const RecoveryConfig&) = default;
};

// Square table of labeled differences d_ij for the points of a partial
// solution. The diagonal is zero and d_ji = -d_ij.
class PairLabels {
 public:
  PairLabels(std::size_t points, int dimension);

  std::size_t points() const { return points_; }
  int dimension() const { return dimension_; }
  ConstPoint operator()(std::size_t i, std::size_t j) const {
    return {data_.data() + (i * points_ + j) * dimension_, static_cast<std::size_t>(dimension_)};
  }
  MutablePoint operator()(std::size_t i, std::size_t j) {
    return {data_.data() + (i * points_ + j) * dimension_, static_cast<std::size_t>(dimension_)};
  }

  // Sets d_ij = value and d_ji = -value.
  void set_antisymmetric(std::size_t i, std::size_t j, ConstPoint value);

 private:
  std::size_t points_;
  int dimension_;
  std::vector<double> data_;
};

// State of the greedy search between two acceptances.
struct PartialSolution {
  PointSet points;                     // points[0] is the origin
  std::vector<std::size_t> candidates; // pool, as indices into the difference set
  PairLabels labels;                   // one label per ordered pair of points
};

// Recovers K points (the first at the origin) whose pairwise differences
// best explain `diffs`. Throws InvalidArgument on a size or dimension
// mismatch, or for an invalid config.
Support recover_support(const DifferenceSet& diffs, int k, const RecoveryConfig& config,
                        int dimension);

// Sum over partial points x of min_d ||p - x - d||^2 over all of `diffs`,
// plus min_d' ||x - p - d'||^2 when `symmetric`.
double candidate_cost(ConstPoint p, const PartialSolution& partial, const DifferenceSet& diffs,
                      bool symmetric);

// Same cost, with the minimum taken over the subset `active` of `diffs`.
double candidate_cost(ConstPoint p, const PartialSolution& partial, const DifferenceSet& diffs,
                      const std::vector<std::size_t>& active, bool symmetric);

// Removes from `working` (ascending indices into `diffs`) the element nearest
// to +(new_point - x) and the one nearest to -(new_point - x) for every
// partial point x, 2k removals in total, each element at most once. Index 0,
// the element closest to the origin, is never removed.
std::vector<std::size_t> prune_used_differences(const PartialSolution& partial,
                                                ConstPoint new_point, const DifferenceSet& diffs,
                                                std::vector<std::size_t> working);

// Replaces each point x_i by the mean over j of its labels d_ij, then
// translates so that the first point is the origin.
PartialSolution denoise_partial(PartialSolution partial);

// Sum over ordered pairs i != j of min_d ||x_i - x_j - d||^2.
double support_matching_cost(const PointSet& points, const DifferenceSet& diffs);

// Exhaustive search over subsets {0, d_N} u S, S drawn from the remaining
// elements, for the lowest support_matching_cost. Refuses K > 6.
Support brute_force_turnpike(const DifferenceSet& diffs, int k);

inline constexpr int kBruteForceMaxK = 6;

}  // namespace spr
