#pragma once

// Closed-form performance predictions for greedy support recovery: the
// expected squared error of a successful run and the probability that the
// greedy search never picks a wrong candidate.

namespace spr {

// CDF of the F distribution with (k1, k2) degrees of freedom,
// I_{k1 x / (k1 x + k2)}(k1 / 2, k2 / 2).
double f_cdf(double x, int k1, int k2);

// 1 - f_cdf(x, k1, k2), evaluated from the upper beta tail without
// cancellation.
double f_cdf_complement(double x, int k1, int k2);

// Probability that a single greedy step k of a K-point recovery succeeds.
// 2 <= k <= K - 1. The cost ratio at step k is F-distributed with k degrees
// of freedom per coordinate, so D-dimensional points use (D k, D k).
double step_success_probability(int k_total, int step, double sigma, int dimension = 1);

// Product of the per-step probabilities for k = 2..K-1. sigma is in units of
// the support extent; sigma = 0 yields exactly 1.
double success_probability(int k, double sigma, int dimension = 1);

// (K - 1) sigma^2.
double expected_mse(int k, double sigma);

}  // namespace spr
