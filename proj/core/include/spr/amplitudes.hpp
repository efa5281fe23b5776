#pragma once

// Amplitude recovery from autocorrelation weights and a known support,
// via the rank-one log-domain completion of C = c c^T.

#include <optional>

#include <Eigen/Core>

#include "spr/model.hpp"

namespace spr {

// Off-diagonal entries C_ij ~ c_i c_j; the diagonal is unobserved and kept 0.
struct WeightMatrix {
  Eigen::MatrixXd entries;
  // Autocorrelation at the origin, sum c_i^2. Required when K == 2.
  std::optional<double> acf_zero;

  Eigen::Index size() const { return entries.rows(); }
};

inline constexpr double kDefaultLabelingTolerance = 1e-6;

// Labels each difference x_i - x_j with the weight of the nearest atom and
// symmetrizes. Throws LabelingError when the nearest atom is farther than
// `tolerance`.
WeightMatrix assemble_weight_matrix(const AcfAtoms& atoms, const Support& support,
                                    double tolerance = kDefaultLabelingTolerance);

// (C + C^T) / 2.
WeightMatrix symmetrize(WeightMatrix w);

// c_i = exp(l_i) with l = (row sums of log C - s / (2(K - 1))) / (K - 2) for
// K > 2; for K == 2 the system c_1 c_2 = C_12, c_1^2 + c_2^2 = acf_zero is
// solved with c_1 >= c_2.
Amplitudes recover_amplitudes(const WeightMatrix& w);

}  // namespace spr
