#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "spr/errors.hpp"
#include "spr/metrics.hpp"
#include "spr/model.hpp"
#include "spr/random.hpp"
#include "spr/support_recovery.hpp"

namespace spr {
namespace {

// True if `estimate` equals {r (x_k - x_l)} for some anchor l and sign r,
// every point matched within `tol`.
bool is_canonical_solution(const Support& estimate, const Support& truth, double tol) {
  const std::size_t k = truth.size();
  const int dim = truth.dimension();
  if (estimate.size() != k) return false;
  for (std::size_t l = 0; l < k; ++l)
    for (int r : {1, -1}) {
      std::vector<bool> used(k, false);
      bool all = true;
      for (std::size_t i = 0; i < k && all; ++i) {
        bool found = false;
        for (std::size_t j = 0; j < k && !found; ++j) {
          if (used[j]) continue;
          double d = 0.0;
          for (int c = 0; c < dim; ++c)
            d = std::max(d, std::abs(estimate[j][c] - r * (truth[i][c] - truth[l][c])));
          if (d <= tol) found = used[j] = true;
        }
        all = found;
      }
      if (all) return true;
    }
  return false;
}

PartialSolution partial_with(PointSet points, std::size_t n_diffs) {
  PairLabels labels(points.size(), points.dimension());
  PartialSolution p{std::move(points), {}, std::move(labels)};
  for (std::size_t i = 1; i < n_diffs; ++i) p.candidates.push_back(i);
  return p;
}

TEST(RecoveryConfig, CachingExcludesDenoising) {
  EXPECT_THROW((RecoveryConfig{true, false, false, true}.validate()), InvalidArgument);
  EXPECT_NO_THROW((RecoveryConfig{true, true, true, false}.validate()));
  EXPECT_NO_THROW(RecoveryConfig::AllImprovements().validate());
}

TEST(RecoverSupport, TwoPointsIsInitialization) {
  const DifferenceSet d(PointSet::FromScalars({-0.7, 1e-4, 0.7}));
  const Support s = recover_support(d, 2, {}, 1);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0][0], 0.0);
  EXPECT_EQ(std::abs(s[1][0]), 0.7);
}

TEST(RecoverSupport, HandInstanceIsCanonical) {
  const Support truth(PointSet::FromScalars({0.0, 0.2, 0.5, 1.0}));
  for (const RecoveryConfig& c : {RecoveryConfig{}, RecoveryConfig::AllImprovements()}) {
    const Support s = recover_support(difference_set(truth), 4, c, 1);
    EXPECT_TRUE(is_canonical_solution(s, truth, 1e-12));
    EXPECT_EQ(index_based_error(s, truth, 0.0), 0);
  }
}

TEST(RecoverSupport, CoincidentPointsStillExplainTheData) {
  // x3 == x4: the difference x4 - x3 collides with the origin. With pruning
  // the duplicate zeros are consumed and the support comes back exactly.
  const Support truth(PointSet::FromScalars({0.0, 1.0, 0.3, 0.3}));
  const DifferenceSet d = difference_set(truth);
  RecoveryConfig prune;
  prune.prune_differences = true;
  EXPECT_LT(l2_error_aligned(truth, recover_support(d, 4, prune, 1)), 1e-20);
  EXPECT_LT(l2_error_aligned(truth, recover_support(d, 4, RecoveryConfig::AllImprovements(), 1)),
            1e-20);
  // Without pruning multiplicities are invisible; the output still only uses
  // differences present in the data.
  const Support s = recover_support(d, 4, {}, 1);
  EXPECT_LT(support_matching_cost(s.points(), d), 1e-20);
}

TEST(RecoverSupport, RejectsMismatchedInputs) {
  const DifferenceSet d = difference_set(synthesize_support(4, 1, {0.0, 1.0}, 1));
  EXPECT_THROW(recover_support(d, 5, {}, 1), InvalidArgument);
  EXPECT_THROW(recover_support(d, 4, {}, 2), InvalidArgument);
  EXPECT_THROW(recover_support(d, 4, RecoveryConfig{true, false, false, true}, 1), InvalidArgument);
}

// Noiseless correctness for every configuration, K in 3..8, D in {1, 2}.
class NoiselessRecovery : public ::testing::TestWithParam<std::tuple<int, int>> {};

TEST_P(NoiselessRecovery, CanonicalOnRandomInstances) {
  const auto [k, dim] = GetParam();
  const RecoveryConfig configs[] = {{}, {true, true, true, false}, RecoveryConfig::AllImprovements()};
  for (int trial = 0; trial < 500; ++trial) {
    const Support truth = synthesize_support(k, dim, {0.0, 1.0}, derive_seed(77, k * 10 + dim, trial));
    const DifferenceSet d = difference_set(truth);
    const RecoveryConfig& c = configs[trial % 3];
    const Support s = recover_support(d, k, c, dim);
    ASSERT_TRUE(is_canonical_solution(s, truth, 1e-9)) << "K=" << k << " D=" << dim << " trial " << trial;
    ASSERT_EQ(s[0][0], 0.0);
  }
}

INSTANTIATE_TEST_SUITE_P(Grid, NoiselessRecovery,
                         ::testing::Combine(::testing::Range(3, 9), ::testing::Values(1, 2)));

TEST(RecoverSupport, CachingDoesNotChangeOutputs) {
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 4 + trial % 5;
    const Support truth = synthesize_support(k, 1 + trial % 2, {0.0, 1.0}, derive_seed(5, trial));
    const DifferenceSet d = add_difference_noise(difference_set(truth), 0.003, derive_seed(6, trial));
    for (bool prune : {false, true})
      for (bool sym : {false, true}) {
        const Support a = recover_support(d, k, {false, prune, sym, false}, truth.dimension());
        const Support b = recover_support(d, k, {true, prune, sym, false}, truth.dimension());
        ASSERT_EQ(a.points(), b.points()) << "trial " << trial;
      }
  }
}

TEST(RecoverSupport, SuccessRateDoesNotIncreaseWithNoise) {
  const double sigmas[] = {1e-3, 3e-3, 1e-2};
  double rates[3];
  for (int s = 0; s < 3; ++s) {
    int ok = 0;
    for (int trial = 0; trial < 500; ++trial) {
      const Support truth = synthesize_support(5, 1, {0.0, 1.0}, derive_seed(8, 0, trial));
      const DifferenceSet d =
          add_difference_noise(difference_set(truth), sigmas[s], derive_seed(8, s + 1, trial));
      ok += index_based_error(recover_support(d, 5, {}, 1), truth, sigmas[s]) == 0;
    }
    rates[s] = ok / 500.0;
  }
  // Monte Carlo slack of about two standard errors at p = 0.5.
  EXPECT_GE(rates[0] + 0.045, rates[1]);
  EXPECT_GE(rates[1] + 0.045, rates[2]);
  EXPECT_GT(rates[0], rates[2]);
}

TEST(CandidateCost, ZeroForTrueNoiselessPoint) {
  const Support truth(PointSet::FromScalars({0.0, 0.15, 0.55, 0.9}));
  const DifferenceSet d = difference_set(truth);
  const PartialSolution p = partial_with(PointSet::FromScalars({0.0, 0.9}), d.size());
  const double point[] = {0.55};
  EXPECT_LT(candidate_cost(point, p, d, false), 1e-20);
  EXPECT_LT(candidate_cost(point, p, d, true), 1e-20);
}

TEST(CandidateCost, ThreePointHandSum) {
  const DifferenceSet d(PointSet::FromScalars({-0.52, -0.31, -0.19, 0.001, 0.2, 0.29, 0.5}));
  const PartialSolution p = partial_with(PointSet::FromScalars({0.0, 0.5}), d.size());
  const double point[] = {0.3};
  // p - 0 = 0.3 -> 0.29 (1e-4); p - 0.5 = -0.2 -> -0.19 (1e-4).
  EXPECT_NEAR(candidate_cost(point, p, d, false), 2e-4, 1e-15);
  // 0 - p = -0.3 -> -0.31 (1e-4); 0.5 - p = 0.2 -> 0.2 (0).
  EXPECT_NEAR(candidate_cost(point, p, d, true), 3e-4, 1e-15);
  // Sorted by norm the set is 0.001, -0.19, 0.2, 0.29, -0.31, 0.5, -0.52.
  // Restricted to {0.5, -0.52}: 0.3 -> 0.5 (0.04), -0.2 -> -0.52 (0.1024).
  EXPECT_NEAR(candidate_cost(point, p, d, {5, 6}, false), 0.04 + 0.1024, 1e-12);
}

TEST(PruneUsedDifferences, RemovesTwoPerPartialPoint) {
  const Support truth(PointSet::FromScalars({0.0, 0.15, 0.55, 0.9}));
  const DifferenceSet d = difference_set(truth);
  std::vector<std::size_t> all(d.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;

  PartialSolution one = partial_with(PointSet::FromScalars({0.0}), d.size());
  const double dn[] = {0.9};
  const auto after_init = prune_used_differences(one, dn, d, all);
  EXPECT_EQ(after_init.size(), all.size() - 2);

  PartialSolution two = partial_with(PointSet::FromScalars({0.0, 0.9}), d.size());
  const double x3[] = {0.55};
  const auto after = prune_used_differences(two, x3, d, after_init);
  EXPECT_EQ(after.size(), after_init.size() - 4);
  for (std::size_t i : after) {
    EXPECT_GT(std::abs(std::abs(d[i][0]) - 0.9), 1e-12);
    EXPECT_GT(std::abs(std::abs(d[i][0]) - 0.55), 1e-12);
    EXPECT_GT(std::abs(std::abs(d[i][0]) - 0.35), 1e-12);
  }
  EXPECT_EQ(after.front(), 0u);
}

TEST(PruneUsedDifferences, NeverRemovesTheOrigin) {
  const DifferenceSet d(PointSet::FromScalars({0.0, -0.1, 0.1}));
  PartialSolution p = partial_with(PointSet::FromScalars({0.0}), d.size());
  const double q[] = {0.0};
  const auto after = prune_used_differences(p, q, d, {0, 1, 2});
  EXPECT_EQ(after, std::vector<std::size_t>{0});
}

TEST(DenoisePartial, ExactLabelsAreAFixedPoint) {
  PartialSolution p = partial_with(PointSet::FromScalars({0.0, 0.4, 0.7, 0.25}), 1);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const double v[] = {p.points[i][0] - p.points[j][0]};
      p.labels(i, j)[0] = v[0];
    }
  const PartialSolution out = denoise_partial(p);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(out.points[i][0], p.points[i][0], 1e-15);
}

double label_misfit(const PointSet& x, const PairLabels& labels) {
  double j = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a)
    for (std::size_t b = 0; b < x.size(); ++b)
      for (int c = 0; c < x.dimension(); ++c)
        j += std::pow(x[a][c] - x[b][c] - labels(a, b)[c], 2);
  return j;
}

TEST(DenoisePartial, MatchesLeastSquaresOracle) {
  Rng rng(31);
  std::normal_distribution<double> noise(0.0, 0.01);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + trial % 4;
    const int dim = 1 + trial % 2;
    const Support truth = synthesize_support(static_cast<int>(n), dim, {0.0, 1.0}, derive_seed(4, trial));
    PointSet pts = truth.points();
    const ConstPoint first = truth[0];
    std::vector<double> shift(first.begin(), first.end());
    for (double& v : shift) v = -v;
    pts.translate(shift);

    PartialSolution p{pts, {}, PairLabels(n, dim)};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        std::vector<double> v(dim);
        for (int c = 0; c < dim; ++c) v[c] = pts[i][c] - pts[j][c] + noise(rng);
        p.labels.set_antisymmetric(i, j, v);
      }
    const PartialSolution out = denoise_partial(p);

    for (int c = 0; c < dim; ++c) EXPECT_EQ(out.points[0][c], 0.0);
    EXPECT_LE(label_misfit(out.points, p.labels), label_misfit(p.points, p.labels) + 1e-15);

    // Oracle: minimize sum ||x_i - x_j - d_ij||^2 with x_0 = 0 by a generic
    // least squares solve over the unknowns x_1..x_{n-1}.
    for (int c = 0; c < dim; ++c) {
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n * n, n - 1);
      Eigen::VectorXd b(n * n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const std::size_t r = i * n + j;
          if (i > 0) a(r, i - 1) += 1.0;
          if (j > 0) a(r, j - 1) -= 1.0;
          b(r) = p.labels(i, j)[c];
        }
      const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
      for (std::size_t i = 1; i < n; ++i) EXPECT_NEAR(out.points[i][c], x(i - 1), 1e-12);
    }
  }
}

TEST(BruteForceTurnpike, TwoPoints) {
  const DifferenceSet d(PointSet::FromScalars({-0.4, 0.0, 0.4}));
  const Support s = brute_force_turnpike(d, 2);
  EXPECT_EQ(s[0][0], 0.0);
  EXPECT_EQ(std::abs(s[1][0]), 0.4);
}

TEST(BruteForceTurnpike, NoLargerCostThanGreedy) {
  for (int trial = 0; trial < 30; ++trial) {
    const Support truth = synthesize_support(4, 1, {0.0, 1.0}, derive_seed(12, trial));
    const DifferenceSet d = add_difference_noise(difference_set(truth), 0.001, derive_seed(13, trial));
    const double oracle = support_matching_cost(brute_force_turnpike(d, 4).points(), d);
    const double greedy = support_matching_cost(recover_support(d, 4, {}, 1).points(), d);
    EXPECT_LE(oracle, greedy + 1e-15);
  }
}

TEST(BruteForceTurnpike, RefusesLargeK) {
  const DifferenceSet d = difference_set(synthesize_support(7, 1, {0.0, 1.0}, 1));
  EXPECT_THROW(brute_force_turnpike(d, 7), InvalidArgument);
}

}  // namespace
}  // namespace spr
