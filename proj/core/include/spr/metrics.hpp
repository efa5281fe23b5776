#pragma once

// Error measures between a recovered support and the ground truth, invariant
// to the shift and reflection ambiguity of phase retrieval.

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "spr/model.hpp"

namespace spr {

// Minimum-cost perfect matching on a square cost matrix; result[i] is the
// column assigned to row i. Exhaustive for n <= 8, Hungarian otherwise.
std::vector<std::size_t> optimal_assignment(const Eigen::MatrixXd& cost);

struct Alignment {
  double error = 0.0;               // total squared error after alignment
  int reflection = 1;               // +1 or -1 applied to the estimate
  std::vector<double> shift;        // added to the reflected estimate
  std::vector<std::size_t> matching;  // truth index -> estimate index
};

// Best reflection, shift and assignment of `estimate` onto `truth`.
Alignment align_supports(const Support& truth, const Support& estimate);

// min over r, s, pi of sum_k ||r xhat_pi(k) + s - x_k||^2.
double l2_error_aligned(const Support& truth, const Support& estimate);

// Error of `estimate` against the canonical solutions {r (x_k - x_l)}: the
// minimum over anchor l and reflection r, with optimal assignment and no
// shift. For a successful greedy recovery this is the sum of the noise on
// the K - 1 chosen differences.
double solution_form_error(const Support& estimate, const Support& truth);

// 0 if `estimate` has the canonical form {r (x_k - x_l)} up to a per-
// coordinate deviation of 6 sigma (1e-9 when sigma == 0), with every point
// nearest to its own true difference, else 1.
int index_based_error(const Support& estimate, const Support& truth, double sigma);

// Fraction of errors <= threshold.
double success_rate(const std::vector<double>& errors, double threshold);

}  // namespace spr
