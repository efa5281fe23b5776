#include "spr/amplitudes.hpp"

#include <cmath>
#include <limits>

#include "spr/errors.hpp"

namespace spr {

WeightMatrix assemble_weight_matrix(const AcfAtoms& atoms, const Support& support,
                                    double tolerance) {
  const std::size_t k = support.size();
  if (atoms.size() != k * k - k + 1)
    throw InvalidArgument("assemble_weight_matrix: expected K^2 - K + 1 atoms");
  if (atoms.locations.dimension() != support.dimension())
    throw InvalidArgument("assemble_weight_matrix: atom and support dimensions differ");

  const int dim = support.dimension();
  std::vector<double> target(dim);
  auto nearest = [&](const std::vector<double>& t) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_index = 0;
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      const double d = squared_distance(t, atoms.locations[a]);
      if (d < best) {
        best = d;
        best_index = a;
      }
    }
    if (std::sqrt(best) > tolerance)
      throw LabelingError("assemble_weight_matrix: no atom within tolerance of a difference");
    return best_index;
  };

  WeightMatrix w{Eigen::MatrixXd::Zero(k, k), std::nullopt};
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      for (int c = 0; c < dim; ++c) target[c] = support[i][c] - support[j][c];
      w.entries(i, j) = atoms.weights[nearest(target)];
    }
  }
  std::fill(target.begin(), target.end(), 0.0);
  w.acf_zero = atoms.weights[nearest(target)];
  return symmetrize(std::move(w));
}

WeightMatrix symmetrize(WeightMatrix w) {
  const Eigen::MatrixXd sym = 0.5 * (w.entries + w.entries.transpose());
  w.entries = sym;
  return w;
}

Amplitudes recover_amplitudes(const WeightMatrix& w) {
  const Eigen::Index k = w.size();
  if (k < 2 || w.entries.cols() != k)
    throw InvalidArgument("recover_amplitudes: need a square matrix with K >= 2");
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      if (i != j && !(w.entries(i, j) > 0.0))
        throw DomainError("recover_amplitudes: off-diagonal weights must be positive");

  if (k == 2) {
    if (!w.acf_zero)
      throw InvalidArgument("recover_amplitudes: K = 2 requires the autocorrelation at 0");
    const double product = 0.5 * (w.entries(0, 1) + w.entries(1, 0));
    const double energy = *w.acf_zero;
    const double gap2 = energy - 2.0 * product;
    if (gap2 < 0.0)
      throw InconsistentMeasurementError(
          "recover_amplitudes: autocorrelation at 0 is smaller than 2 C_12");
    // (c1 + c2)^2 = a0 + 2 C_12, (c1 - c2)^2 = a0 - 2 C_12
    const double sum = std::sqrt(energy + 2.0 * product);
    const double diff = std::sqrt(gap2);
    return Amplitudes({0.5 * (sum + diff), 0.5 * (sum - diff)});
  }

  Eigen::MatrixXd logs = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      if (i != j) logs(i, j) = std::log(w.entries(i, j));
  const Eigen::VectorXd rows = logs.rowwise().sum();
  const double total = rows.sum();
  const double common = total / (2.0 * static_cast<double>(k - 1));
  std::vector<double> c(k);
  for (Eigen::Index i = 0; i < k; ++i)
    c[i] = std::exp((rows(i) - common) / static_cast<double>(k - 2));
  return Amplitudes(std::move(c));
}

}  // namespace spr
