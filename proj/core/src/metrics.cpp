#include "spr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "spr/errors.hpp"

namespace spr {
namespace {

constexpr std::size_t kExhaustiveMax = 8;

std::vector<std::size_t> exhaustive_assignment(const Eigen::MatrixXd& cost) {
  const std::size_t n = cost.rows();
  std::vector<std::size_t> perm(n), best;
  std::iota(perm.begin(), perm.end(), 0);
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < n && c < best_cost; ++i) c += cost(i, perm[i]);
    if (c < best_cost) {
      best_cost = c;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Shortest augmenting path with potentials, O(n^3).
std::vector<std::size_t> hungarian(const Eigen::MatrixXd& cost) {
  const std::size_t n = cost.rows();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> owner(n + 1, 0), way(n + 1, 0);
  for (std::size_t row = 1; row <= n; ++row) {
    owner[0] = row;
    std::size_t col = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[col] = true;
      const std::size_t i = owner[col];
      double delta = inf;
      std::size_t next = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double reduced = cost(i - 1, j - 1) - u[i] - v[j];
        if (reduced < minv[j]) {
          minv[j] = reduced;
          way[j] = col;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          next = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      col = next;
    } while (owner[col] != 0);
    do {
      const std::size_t prev = way[col];
      owner[col] = owner[prev];
      col = prev;
    } while (col != 0);
  }
  std::vector<std::size_t> result(n);
  for (std::size_t j = 1; j <= n; ++j) result[owner[j] - 1] = j - 1;
  return result;
}

void check_sizes(const Support& a, const Support& b, const char* what) {
  if (a.size() != b.size()) throw InvalidArgument(std::string(what) + ": cardinality mismatch");
  if (a.dimension() != b.dimension())
    throw InvalidArgument(std::string(what) + ": dimension mismatch");
}

std::vector<double> centroid(const PointSet& s) {
  std::vector<double> c(s.dimension(), 0.0);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (int d = 0; d < s.dimension(); ++d) c[d] += s[i][d];
  for (double& v : c) v /= static_cast<double>(s.size());
  return c;
}

PointSet centered(const PointSet& s) {
  PointSet out = s;
  std::vector<double> c = centroid(s);
  for (double& v : c) v = -v;
  out.translate(c);
  return out;
}

Eigen::MatrixXd pair_costs(const PointSet& truth, const PointSet& estimate) {
  Eigen::MatrixXd cost(truth.size(), estimate.size());
  for (std::size_t i = 0; i < truth.size(); ++i)
    for (std::size_t j = 0; j < estimate.size(); ++j)
      cost(i, j) = squared_distance(truth[i], estimate[j]);
  return cost;
}

double matched_cost(const Eigen::MatrixXd& cost, const std::vector<std::size_t>& match) {
  double total = 0.0;
  for (std::size_t i = 0; i < match.size(); ++i) total += cost(i, match[i]);
  return total;
}

// Canonical solution r (x_k - x_anchor).
PointSet canonical_form(const PointSet& truth, std::size_t anchor, int reflection) {
  PointSet out = truth;
  std::vector<double> shift(truth.dimension());
  for (int d = 0; d < truth.dimension(); ++d) shift[d] = -truth[anchor][d];
  out.translate(shift);
  if (reflection < 0) out.negate();
  return out;
}

bool has_perfect_matching(const std::vector<std::vector<std::size_t>>& adjacency) {
  const std::size_t n = adjacency.size();
  std::vector<std::size_t> match(n, n);
  std::vector<bool> seen;
  auto augment = [&](auto&& self, std::size_t row) -> bool {
    for (std::size_t col : adjacency[row]) {
      if (seen[col]) continue;
      seen[col] = true;
      if (match[col] == n || self(self, match[col])) {
        match[col] = row;
        return true;
      }
    }
    return false;
  };
  for (std::size_t row = 0; row < n; ++row) {
    seen.assign(n, false);
    if (!augment(augment, row)) return false;
  }
  return true;
}

}  // namespace

std::vector<std::size_t> optimal_assignment(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols()) throw InvalidArgument("optimal_assignment: cost must be square");
  if (cost.rows() == 0) return {};
  if (static_cast<std::size_t>(cost.rows()) <= kExhaustiveMax) return exhaustive_assignment(cost);
  return hungarian(cost);
}

Alignment align_supports(const Support& truth, const Support& estimate) {
  check_sizes(truth, estimate, "align_supports");
  const PointSet t = centered(truth.points());
  const std::vector<double> ct = centroid(truth.points());
  const std::vector<double> ce = centroid(estimate.points());

  Alignment best;
  best.error = std::numeric_limits<double>::infinity();
  for (int r : {1, -1}) {
    PointSet e = centered(estimate.points());
    if (r < 0) e.negate();
    const Eigen::MatrixXd cost = pair_costs(t, e);
    std::vector<std::size_t> match = optimal_assignment(cost);
    const double err = matched_cost(cost, match);
    if (err < best.error) {
      best.error = err;
      best.reflection = r;
      best.matching = std::move(match);
      best.shift.resize(ct.size());
      for (std::size_t d = 0; d < ct.size(); ++d) best.shift[d] = ct[d] - r * ce[d];
    }
  }
  return best;
}

double l2_error_aligned(const Support& truth, const Support& estimate) {
  return align_supports(truth, estimate).error;
}

double solution_form_error(const Support& estimate, const Support& truth) {
  check_sizes(estimate, truth, "solution_form_error");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t anchor = 0; anchor < truth.size(); ++anchor) {
    for (int r : {1, -1}) {
      const PointSet form = canonical_form(truth.points(), anchor, r);
      const Eigen::MatrixXd cost = pair_costs(form, estimate.points());
      best = std::min(best, matched_cost(cost, optimal_assignment(cost)));
    }
  }
  return best;
}

int index_based_error(const Support& estimate, const Support& truth, double sigma) {
  check_sizes(estimate, truth, "index_based_error");
  if (!(sigma >= 0.0)) throw InvalidArgument("index_based_error: sigma must be >= 0");
  const double tol = sigma > 0.0 ? 6.0 * sigma : 1e-9;
  const std::size_t k = truth.size();
  const int dim = truth.dimension();

  // Each estimated point is attributed to its nearest true difference; a
  // point that noise has carried closer to another difference does not count.
  const DifferenceSet all = difference_set(truth);
  std::vector<double> nearest(k, std::numeric_limits<double>::infinity());
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t t = 0; t < all.size(); ++t)
      nearest[j] = std::min(nearest[j], squared_distance(estimate[j], all[t]));

  for (std::size_t anchor = 0; anchor < k; ++anchor) {
    for (int r : {1, -1}) {
      const PointSet form = canonical_form(truth.points(), anchor, r);
      std::vector<std::vector<std::size_t>> adjacency(k);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
          bool close = true;
          for (int d = 0; d < dim && close; ++d)
            close = std::abs(form[i][d] - estimate[j][d]) <= tol;
          const double d2 = squared_distance(form[i], estimate[j]);
          if (close && d2 <= nearest[j] * (1.0 + 1e-9) + 1e-20) adjacency[i].push_back(j);
        }
      }
      if (has_perfect_matching(adjacency)) return 0;
    }
  }
  return 1;
}

double success_rate(const std::vector<double>& errors, double threshold) {
  if (errors.empty()) throw InvalidArgument("success_rate: no errors given");
  if (!(threshold > 0.0)) throw InvalidArgument("success_rate: threshold must be positive");
  const auto ok = std::count_if(errors.begin(), errors.end(), [&](double e) { return e <= threshold; });
  return static_cast<double>(ok) / static_cast<double>(errors.size());
}

}  // namespace spr
