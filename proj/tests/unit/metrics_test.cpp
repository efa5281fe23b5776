#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "spr/errors.hpp"
#include "spr/metrics.hpp"
#include "spr/model.hpp"
#include "spr/random.hpp"

namespace spr {
namespace {

Support transformed(const Support& s, int reflection, std::vector<double> shift,
                    std::vector<std::size_t> perm) {
  PointSet out(s.dimension());
  for (std::size_t i : perm) {
    std::vector<double> p(s[i].begin(), s[i].end());
    for (std::size_t c = 0; c < p.size(); ++c) p[c] = reflection * p[c] + shift[c];
    out.push_back(p);
  }
  return Support(out);
}

// Exhaustive oracle for the aligned error: every reflection and permutation,
// with the optimal shift in closed form (difference of centroids).
double aligned_error_oracle(const Support& truth, const Support& est) {
  const std::size_t k = truth.size();
  const int dim = truth.dimension();
  std::vector<std::size_t> perm(k);
  double best = INFINITY;
  for (int r : {1, -1}) {
    std::iota(perm.begin(), perm.end(), 0);
    do {
      double err = 0.0;
      for (int c = 0; c < dim; ++c) {
        double mean = 0.0;
        for (std::size_t i = 0; i < k; ++i) mean += truth[i][c] - r * est[perm[i]][c];
        mean /= k;
        for (std::size_t i = 0; i < k; ++i) err += std::pow(truth[i][c] - r * est[perm[i]][c] - mean, 2);
      }
      best = std::min(best, err);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return best;
}

TEST(OptimalAssignment, MatchesExhaustiveSearch) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n : {1, 3, 6, 8, 9, 12}) {
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::MatrixXd cost(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cost(i, j) = u(rng);
      const auto a = optimal_assignment(cost);
      double got = 0.0;
      for (int i = 0; i < n; ++i) got += cost(i, a[i]);
      std::vector<std::size_t> cols(a.begin(), a.end());
      std::sort(cols.begin(), cols.end());
      for (int i = 0; i < n; ++i) ASSERT_EQ(cols[i], static_cast<std::size_t>(i));
      if (n <= 9) {
        std::vector<int> p(n);
        std::iota(p.begin(), p.end(), 0);
        double best = INFINITY;
        do {
          double c = 0.0;
          for (int i = 0; i < n; ++i) c += cost(i, p[i]);
          best = std::min(best, c);
        } while (std::next_permutation(p.begin(), p.end()));
        EXPECT_NEAR(got, best, 1e-12) << "n=" << n;
      }
    }
  }
}

TEST(L2ErrorAligned, ZeroUnderShiftReflectionAndPermutation) {
  const Support t = synthesize_support(5, 2, {0.0, 1.0}, 3);
  EXPECT_NEAR(l2_error_aligned(t, t), 0.0, 1e-24);
  EXPECT_NEAR(l2_error_aligned(t, transformed(t, -1, {0.4, -2.0}, {3, 1, 4, 0, 2})), 0.0, 1e-24);
}

TEST(L2ErrorAligned, HandMinimizationOverShift) {
  const Support t(PointSet::FromScalars({0.0, 0.5, 1.0}));
  const Support e(PointSet::FromScalars({0.0, 0.5, 1.1}));
  EXPECT_NEAR(l2_error_aligned(t, e), 0.02 / 3.0, 1e-15);
}

TEST(L2ErrorAligned, SymmetricInvariantAndMatchesOracle) {
  Rng rng(12);
  std::normal_distribution<double> n(0.0, 0.05);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 3 + trial % 6, dim = 1 + trial % 2;
    const Support t = synthesize_support(k, dim, {0.0, 1.0}, derive_seed(1, trial));
    PointSet noisy = t.points();
    for (double& v : noisy.coords()) v += n(rng);
    const Support e(noisy);
    const double err = l2_error_aligned(t, e);
    EXPECT_NEAR(err, aligned_error_oracle(t, e), 1e-12);
    EXPECT_NEAR(err, l2_error_aligned(e, t), 1e-12);
    std::vector<std::size_t> perm(k);
    std::iota(perm.rbegin(), perm.rend(), 0);
    EXPECT_NEAR(err, l2_error_aligned(t, transformed(e, -1, std::vector<double>(dim, 0.7), perm)),
                1e-12);
    EXPECT_NEAR(err, l2_error_aligned(transformed(t, -1, std::vector<double>(dim, -3.0), perm), e),
                1e-12);
  }
}

TEST(AlignSupports, ReportsTheAlignment) {
  const Support t(PointSet::FromScalars({0.0, 0.2, 0.7}));
  const Support e = transformed(t, -1, {5.0}, {2, 0, 1});
  const Alignment a = align_supports(t, e);
  EXPECT_NEAR(a.error, 0.0, 1e-24);
  EXPECT_EQ(a.reflection, -1);
  ASSERT_EQ(a.shift.size(), 1u);
  for (std::size_t i = 0; i < 3; ++i)
    EXPECT_NEAR(a.reflection * e[a.matching[i]][0] + a.shift[0], t[i][0], 1e-12);
}

TEST(SolutionFormError, AnchoredNoShift) {
  const Support t(PointSet::FromScalars({0.1, 0.4, 0.9}));
  // Canonical solution anchored at x_2, reflected.
  const Support e(PointSet::FromScalars({0.0, 0.3, -0.5}));
  EXPECT_NEAR(solution_form_error(e, t), 0.0, 1e-24);
  const Support off(PointSet::FromScalars({0.0, 0.31, -0.5}));
  EXPECT_NEAR(solution_form_error(off, t), 1e-4, 1e-15);
  // A translated copy is not of the canonical form.
  const Support shifted(PointSet::FromScalars({0.05, 0.35, -0.45}));
  EXPECT_GT(solution_form_error(shifted, t), 1e-3);
}

TEST(IndexBasedError, CanonicalFormsAreZero) {
  const Support t(PointSet::FromScalars({0.0, 0.35, 0.6, 1.0}));
  EXPECT_EQ(index_based_error(transformed(t, 1, {-0.35}, {0, 1, 2, 3}), t, 0.0), 0);
  EXPECT_EQ(index_based_error(transformed(t, -1, {0.35}, {3, 2, 1, 0}), t, 0.0), 0);
  EXPECT_EQ(index_based_error(transformed(t, 1, {-0.3}, {0, 1, 2, 3}), t, 0.0), 1);
  // Within 6 sigma per coordinate.
  const Support noisy(PointSet::FromScalars({0.0, 0.355, 0.6, 1.0}));
  EXPECT_EQ(index_based_error(noisy, t, 1e-3), 0);
  EXPECT_EQ(index_based_error(noisy, t, 5e-4), 1);
}

TEST(IndexBasedError, HomometricAlternativeIsNotCanonical) {
  // {0, 1, 2 x3, x3} explains the same differences as {0, 1, x3, 1 - 2 x3}
  // only through coincidences; it is not of the canonical form.
  const double x3 = 0.23;
  const Support t(PointSet::FromScalars({0.0, 1.0, x3, 1.0 - 2.0 * x3}));
  const Support e(PointSet::FromScalars({0.0, 1.0, 2.0 * x3, x3}));
  EXPECT_EQ(index_based_error(e, t, 0.0), 1);
  EXPECT_GT(l2_error_aligned(t, e), 0.0);
}

TEST(IndexBasedError, ConsistentWithL2Error) {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const double sigma = 1e-3;
    const int k = 4 + trial % 4, dim = 1 + trial % 2;
    const Support t = synthesize_support(k, dim, {0.0, 1.0}, derive_seed(3, trial));
    std::normal_distribution<double> n(0.0, sigma * (trial % 3 == 0 ? 10.0 : 1.0));
    PointSet p = t.points();
    std::vector<double> shift(t[0].begin(), t[0].end());
    for (double& v : shift) v = -v;
    p.translate(shift);
    for (double& v : p.coords()) v += n(rng);
    const Support e(p);
    if (index_based_error(e, t, sigma) == 0)
      EXPECT_LE(l2_error_aligned(t, e), k * std::pow(6 * sigma, 2) * dim);
  }
}

TEST(SuccessRate, Fractions) {
  EXPECT_EQ(success_rate({0.0, 0.0, 0.0}, 0.04), 1.0);
  EXPECT_EQ(success_rate({0.01, 0.05}, 0.04), 0.5);
  EXPECT_THROW(success_rate({}, 0.04), InvalidArgument);
}

}  // namespace
}  // namespace spr
