#include "spr/support_recovery.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

#include "spr/errors.hpp"

namespace spr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Match {
  double distance = kInf;  // squared
  std::size_t index = 0;   // into the difference set
};

// Nearest element to `target` among the rows of `coords` (contiguous,
// dimension D). Ties go to the lowest row, so `indices` must be ascending.
template <int D>
Match nearest_fixed(const double* target, const std::vector<double>& coords,
                    const std::vector<std::size_t>& indices) {
  Match best;
  const std::size_t n = indices.size();
  const double* row = coords.data();
  for (std::size_t r = 0; r < n; ++r, row += D) {
    double s = 0.0;
    for (int c = 0; c < D; ++c) {
      const double d = target[c] - row[c];
      s += d * d;
    }
    if (s < best.distance) {
      best.distance = s;
      best.index = indices[r];
    }
  }
  return best;
}

Match nearest_dynamic(const double* target, int dim, const std::vector<double>& coords,
                      const std::vector<std::size_t>& indices) {
  Match best;
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const double* row = coords.data() + r * dim;
    double s = 0.0;
    for (int c = 0; c < dim; ++c) {
      const double d = target[c] - row[c];
      s += d * d;
    }
    if (s < best.distance) {
      best.distance = s;
      best.index = indices[r];
    }
  }
  return best;
}

// A subset of the difference set laid out contiguously for linear scans.
class MatchSet {
 public:
  MatchSet(const DifferenceSet& diffs, std::vector<std::size_t> indices)
      : diffs_(&diffs), indices_(std::move(indices)) {
    rebuild();
  }

  static MatchSet All(const DifferenceSet& diffs) {
    std::vector<std::size_t> all(diffs.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return MatchSet(diffs, std::move(all));
  }

  Match nearest(const double* target) const {
    switch (diffs_->dimension()) {
      case 1: return nearest_fixed<1>(target, coords_, indices_);
      case 2: return nearest_fixed<2>(target, coords_, indices_);
      default: return nearest_dynamic(target, diffs_->dimension(), coords_, indices_);
    }
  }

  const std::vector<std::size_t>& indices() const { return indices_; }

  void reset(std::vector<std::size_t> indices) {
    indices_ = std::move(indices);
    rebuild();
  }

 private:
  void rebuild() {
    const int dim = diffs_->dimension();
    coords_.resize(indices_.size() * dim);
    for (std::size_t r = 0; r < indices_.size(); ++r) {
      const ConstPoint p = (*diffs_)[indices_[r]];
      std::copy(p.begin(), p.end(), coords_.begin() + static_cast<std::ptrdiff_t>(r * dim));
    }
  }

  const DifferenceSet* diffs_;
  std::vector<std::size_t> indices_;
  std::vector<double> coords_;
};

// a - b into out.
inline void subtract(ConstPoint a, ConstPoint b, double* out) {
  for (std::size_t c = 0; c < a.size(); ++c) out[c] = a[c] - b[c];
}

double cost_against(ConstPoint p, const PointSet& points, const MatchSet& set, bool symmetric) {
  double target[8];
  std::vector<double> heap;
  double* t = target;
  if (p.size() > 8) {
    heap.resize(p.size());
    t = heap.data();
  }
  double cost = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    subtract(p, points[i], t);
    double term = set.nearest(t).distance;
    if (symmetric) {
      subtract(points[i], p, t);
      term += set.nearest(t).distance;
    }
    cost += term;
  }
  return cost;
}

}  // namespace

void RecoveryConfig::validate() const {
  if (use_caching && denoise_partials)
    throw InvalidArgument("caching cannot be combined with denoising of partial solutions");
}

PairLabels::PairLabels(std::size_t points, int dimension)
    : points_(points), dimension_(dimension), data_(points * points * dimension, 0.0) {}

void PairLabels::set_antisymmetric(std::size_t i, std::size_t j, ConstPoint value) {
  MutablePoint ij = (*this)(i, j);
  MutablePoint ji = (*this)(j, i);
  for (int c = 0; c < dimension_; ++c) {
    ij[c] = value[c];
    ji[c] = -value[c];
  }
}

double candidate_cost(ConstPoint p, const PartialSolution& partial, const DifferenceSet& diffs,
                      bool symmetric) {
  return cost_against(p, partial.points, MatchSet::All(diffs), symmetric);
}

double candidate_cost(ConstPoint p, const PartialSolution& partial, const DifferenceSet& diffs,
                      const std::vector<std::size_t>& active, bool symmetric) {
  return cost_against(p, partial.points, MatchSet(diffs, active), symmetric);
}

std::vector<std::size_t> prune_used_differences(const PartialSolution& partial,
                                                ConstPoint new_point, const DifferenceSet& diffs,
                                                std::vector<std::size_t> working) {
  const int dim = diffs.dimension();
  std::vector<double> target(dim);
  for (std::size_t i = 0; i < partial.points.size(); ++i) {
    for (int sign : {+1, -1}) {
      for (int c = 0; c < dim; ++c) target[c] = sign * (new_point[c] - partial.points[i][c]);
      std::size_t best_pos = working.size();
      double best = kInf;
      for (std::size_t pos = 0; pos < working.size(); ++pos) {
        if (working[pos] == 0) continue;
        const double d = squared_distance(target, diffs[working[pos]]);
        if (d < best) {
          best = d;
          best_pos = pos;
        }
      }
      if (best_pos < working.size()) working.erase(working.begin() + static_cast<std::ptrdiff_t>(best_pos));
    }
  }
  return working;
}

PartialSolution denoise_partial(PartialSolution partial) {
  const std::size_t n = partial.points.size();
  const int dim = partial.points.dimension();
  if (partial.labels.points() != n)
    throw InvalidArgument("denoise_partial: labels do not cover the partial solution");
  PointSet updated(dim);
  updated.reserve(n);
  std::vector<double> mean(dim);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(mean.begin(), mean.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const ConstPoint d = partial.labels(i, j);
      for (int c = 0; c < dim; ++c) mean[c] += d[c];
    }
    for (double& v : mean) v /= static_cast<double>(n);
    updated.push_back(mean);
  }
  std::vector<double> shift(updated[0].begin(), updated[0].end());
  for (double& v : shift) v = -v;
  updated.translate(shift);
  partial.points = std::move(updated);
  return partial;
}

double support_matching_cost(const PointSet& points, const DifferenceSet& diffs) {
  const MatchSet full = MatchSet::All(diffs);
  std::vector<double> target(points.dimension());
  double cost = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (i == j) continue;
      subtract(points[i], points[j], target.data());
      cost += full.nearest(target.data()).distance;
    }
  }
  return cost;
}

namespace {

class GreedyRecovery {
 public:
  GreedyRecovery(const DifferenceSet& diffs, int k, const RecoveryConfig& config)
      : diffs_(diffs),
        k_(k),
        config_(config),
        full_(MatchSet::All(diffs)),
        active_(MatchSet::All(diffs)),
        partial_{PointSet(diffs.dimension()), {}, PairLabels(0, diffs.dimension())} {}

  Support run() {
    const std::size_t n = diffs_.size();
    const int dim = diffs_.dimension();

    // Initialization: the origin and the longest difference.
    partial_.points.push_back(std::vector<double>(dim, 0.0));
    for (std::size_t j = 1; j + 1 < n; ++j) partial_.candidates.push_back(j);
    accept_point(n - 1);

    for (int k = 2; k < k_; ++k) {
      if (partial_.candidates.empty())
        throw DegenerateInputError("recover_support: candidate pool exhausted");
      const std::size_t chosen = select_candidate();
      accept_point(chosen);
    }
    return Support(std::move(partial_.points));
  }

 private:
  // Index into the difference set of the lowest-cost pool candidate.
  std::size_t select_candidate() {
    if (config_.use_caching) fill_cache();
    double best = kInf;
    std::size_t best_index = partial_.candidates.front();
    for (std::size_t j : partial_.candidates) {
      double cost;
      if (config_.use_caching) {
        cost = 0.0;
        for (std::size_t i = 0; i < partial_.points.size(); ++i) {
          double term = plus_[i][j].distance;
          if (config_.symmetric_cost) term += minus_[i][j].distance;
          cost += term;
        }
      } else {
        cost = cost_against(diffs_[j], partial_.points, active_, config_.symmetric_cost);
      }
      if (cost < best) {
        best = cost;
        best_index = j;
      }
    }
    return best_index;
  }

  void accept_point(std::size_t index) {
    const ConstPoint p = diffs_[index];
    std::erase(partial_.candidates, index);

    if (config_.prune_differences) {
      std::vector<std::size_t> before = active_.indices();
      std::vector<std::size_t> after =
          prune_used_differences(partial_, p, diffs_, before);
      std::vector<std::size_t> removed;
      std::set_difference(before.begin(), before.end(), after.begin(), after.end(),
                          std::back_inserter(removed));
      std::vector<std::size_t> pool;
      std::set_intersection(partial_.candidates.begin(), partial_.candidates.end(),
                            after.begin(), after.end(), std::back_inserter(pool));
      partial_.candidates = std::move(pool);
      active_.reset(std::move(after));
      if (config_.use_caching) repair_cache(removed);
    }

    partial_.points.push_back(p);

    if (config_.denoise_partials && partial_.points.size() > 2) {
      relabel();
      partial_ = denoise_partial(std::move(partial_));
    }
  }

  void relabel() {
    const std::size_t count = partial_.points.size();
    const int dim = diffs_.dimension();
    PairLabels labels(count, dim);
    std::vector<double> target(dim), label(dim);
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = i + 1; j < count; ++j) {
        subtract(partial_.points[i], partial_.points[j], target.data());
        const ConstPoint forward = diffs_[full_.nearest(target.data()).index];
        subtract(partial_.points[j], partial_.points[i], target.data());
        const ConstPoint backward = diffs_[full_.nearest(target.data()).index];
        for (int c = 0; c < dim; ++c) label[c] = 0.5 * (forward[c] - backward[c]);
        labels.set_antisymmetric(i, j, label);
      }
    }
    partial_.labels = std::move(labels);
  }

  // Computes lookup rows for points that do not have one yet.
  void fill_cache() {
    const int dim = diffs_.dimension();
    std::vector<double> target(dim);
    while (plus_.size() < partial_.points.size()) {
      const std::size_t i = plus_.size();
      plus_.emplace_back(diffs_.size());
      minus_.emplace_back(diffs_.size());
      for (std::size_t j : partial_.candidates) {
        subtract(diffs_[j], partial_.points[i], target.data());
        plus_[i][j] = active_.nearest(target.data());
        if (config_.symmetric_cost) {
          subtract(partial_.points[i], diffs_[j], target.data());
          minus_[i][j] = active_.nearest(target.data());
        }
      }
    }
  }

  // Recomputes cached matches whose difference was just pruned. Removing
  // other elements cannot change a lowest-index argmin.
  void repair_cache(const std::vector<std::size_t>& removed) {
    if (plus_.empty() || removed.empty()) return;
    std::vector<char> gone(diffs_.size(), 0);
    for (std::size_t r : removed) gone[r] = 1;
    const int dim = diffs_.dimension();
    std::vector<double> target(dim);
    for (std::size_t i = 0; i < plus_.size(); ++i) {
      for (std::size_t j : partial_.candidates) {
        if (gone[plus_[i][j].index]) {
          subtract(diffs_[j], partial_.points[i], target.data());
          plus_[i][j] = active_.nearest(target.data());
        }
        if (config_.symmetric_cost && gone[minus_[i][j].index]) {
          subtract(partial_.points[i], diffs_[j], target.data());
          minus_[i][j] = active_.nearest(target.data());
        }
      }
    }
  }

  const DifferenceSet& diffs_;
  int k_;
  RecoveryConfig config_;
  MatchSet full_;
  MatchSet active_;
  PartialSolution partial_;
  // Cached nearest matches, indexed [point][difference index].
  std::vector<std::vector<Match>> plus_;
  std::vector<std::vector<Match>> minus_;
};

}  // namespace

Support recover_support(const DifferenceSet& diffs, int k, const RecoveryConfig& config,
                        int dimension) {
  config.validate();
  if (k < 2) throw InvalidArgument("recover_support: K must be at least 2");
  if (diffs.size() != static_cast<std::size_t>(k) * k - k + 1)
    throw InvalidArgument("recover_support: expected K^2 - K + 1 differences");
  if (diffs.dimension() != dimension)
    throw InvalidArgument("recover_support: dimension does not match the differences");
  return GreedyRecovery(diffs, k, config).run();
}

Support brute_force_turnpike(const DifferenceSet& diffs, int k) {
  if (k > kBruteForceMaxK)
    throw InvalidArgument("brute_force_turnpike: refused for K > 6 (exponential cost)");
  if (k < 2) throw InvalidArgument("brute_force_turnpike: K must be at least 2");
  const std::size_t n = diffs.size();
  if (n != static_cast<std::size_t>(k) * k - k + 1)
    throw InvalidArgument("brute_force_turnpike: expected K^2 - K + 1 differences");
  const int dim = diffs.dimension();

  // Candidate elements: origin, then d_1..d_{N-2} (excluding d_0 and d_{N-1}),
  // then d_{N-1}. pair_cost[a][b] = min_d ||e_a - e_b - d||^2.
  PointSet elements(dim);
  elements.push_back(std::vector<double>(dim, 0.0));
  for (std::size_t j = 1; j + 1 < n; ++j) elements.push_back(diffs[j]);
  elements.push_back(diffs[n - 1]);
  const std::size_t m = elements.size();
  const MatchSet full = MatchSet::All(diffs);
  std::vector<double> pair_cost(m * m, 0.0);
  std::vector<double> target(dim);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (a != b) {
        subtract(elements[a], elements[b], target.data());
        pair_cost[a * m + b] = full.nearest(target.data()).distance;
      }

  const std::size_t free_count = static_cast<std::size_t>(k) - 2;
  std::vector<std::size_t> chosen(free_count);
  for (std::size_t i = 0; i < free_count; ++i) chosen[i] = 1 + i;
  std::vector<std::size_t> best_chosen = chosen;
  double best = kInf;
  std::vector<std::size_t> members;
  const std::size_t last_free = m - 2;  // inclusive
  for (;;) {
    members.assign({0, m - 1});
    members.insert(members.end(), chosen.begin(), chosen.end());
    double cost = 0.0;
    for (std::size_t a : members)
      for (std::size_t b : members)
        if (a != b) cost += pair_cost[a * m + b];
    if (cost < best) {
      best = cost;
      best_chosen = chosen;
    }
    // Next combination in lexicographic order.
    std::ptrdiff_t i = static_cast<std::ptrdiff_t>(free_count) - 1;
    while (i >= 0 && chosen[i] == last_free - (free_count - 1 - i)) --i;
    if (i < 0) break;
    ++chosen[i];
    for (std::size_t j = i + 1; j < free_count; ++j) chosen[j] = chosen[j - 1] + 1;
  }

  PointSet out(dim);
  out.push_back(elements[0]);
  out.push_back(elements[m - 1]);
  for (std::size_t c : best_chosen) out.push_back(elements[c]);
  return Support(std::move(out));
}

}  // namespace spr
