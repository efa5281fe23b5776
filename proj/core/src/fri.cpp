#include "spr/fri.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "spr/errors.hpp"

namespace spr {
namespace {

using Complex = std::complex<double>;

// Relative singular-value floor below which the annihilation null space is
// considered more than one-dimensional.
constexpr double kRankTolerance = 1e-12;
// Largest condition number accepted for the Vandermonde weight system.
constexpr double kMaxConditionNumber = 1e12;

struct InBand {
  int half_width;  // samples m = -half_width..half_width
  std::vector<Complex> values;

  int count() const { return static_cast<int>(values.size()); }
  const Complex& at(int m) const { return values[m + half_width]; }
};

InBand in_band_samples(const FourierSamples& samples) {
  const int half = samples.in_band_max_index();
  InBand band{half, {}};
  if (half < 0) return band;
  band.values.reserve(2 * half + 1);
  for (int m = -half; m <= half; ++m) band.values.push_back(samples.at(m));
  return band;
}

// Row r holds A_{m}, A_{m-1}, ..., A_{m-order} with m = -half + order + r.
Eigen::MatrixXcd toeplitz_system(const InBand& band, int order) {
  const int rows = band.count() - order;
  Eigen::MatrixXcd t(rows, order + 1);
  for (int r = 0; r < rows; ++r) {
    const int m = -band.half_width + order + r;
    for (int c = 0; c <= order; ++c) t(r, c) = band.at(m - c);
  }
  return t;
}

}  // namespace

AnnihilatingFilter fit_annihilating_filter(const FourierSamples& samples, int order) {
  if (order < 1) throw InvalidArgument("fit_annihilating_filter: order must be positive");
  const InBand band = in_band_samples(samples);
  if (band.count() < 2 * order + 1)
    throw InvalidArgument("fit_annihilating_filter: need at least 2 * order + 1 in-band samples");

  const Eigen::MatrixXcd t = toeplitz_system(band, order);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(t, Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (!(s(0) > 0.0)) throw DegenerateInputError("fit_annihilating_filter: all samples are zero");
  if (s(order - 1) <= kRankTolerance * s(0))
    throw DegenerateInputError(
        "fit_annihilating_filter: annihilating null space is not one-dimensional; "
        "the model order exceeds the number of distinct exponentials");

  Eigen::VectorXcd h = svd.matrixV().col(order);
  if (std::abs(h(0)) <= std::numeric_limits<double>::epsilon() * h.norm())
    throw DegenerateInputError("fit_annihilating_filter: leading filter tap vanishes");
  h /= h(0);

  AnnihilatingFilter filter;
  filter.coeffs.assign(h.data(), h.data() + h.size());
  return filter;
}

double annihilation_residual(const FourierSamples& samples, const AnnihilatingFilter& filter) {
  const InBand band = in_band_samples(samples);
  const int order = filter.order();
  if (band.count() < order + 1)
    throw InvalidArgument("annihilation_residual: not enough in-band samples");
  const Eigen::MatrixXcd t = toeplitz_system(band, order);
  const Eigen::Map<const Eigen::VectorXcd> h(filter.coeffs.data(), order + 1);
  double norm_a = 0.0;
  for (const auto& v : band.values) norm_a += std::norm(v);
  return (t * h).norm() / std::sqrt(norm_a);
}

RootSet filter_roots(const AnnihilatingFilter& filter) {
  const int degree = filter.order();
  if (degree < 1) throw InvalidArgument("filter_roots: filter of degree 0 has no roots");
  const Complex lead = filter.coeffs[0];
  if (lead == Complex(0.0, 0.0)) throw InvalidArgument("filter_roots: leading tap is zero");

  // Companion matrix of z^N + c_1 z^(N-1) + ... + c_N.
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
  for (int i = 0; i < degree; ++i) companion(0, i) = -filter.coeffs[i + 1] / lead;
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success)
    throw DegenerateInputError("filter_roots: eigenvalue iteration did not converge");
  RootSet out;
  const auto& ev = solver.eigenvalues();
  out.roots.assign(ev.data(), ev.data() + ev.size());
  return out;
}

std::vector<double> roots_to_locations(const RootSet& roots, double step) {
  if (!(step > 0.0)) throw InvalidArgument("roots_to_locations: step must be positive");
  std::vector<double> t;
  t.reserve(roots.roots.size());
  for (const Complex& u : roots.roots) {
    const double r = std::abs(u);
    const Complex on_circle = r > 0.0 ? u / r : Complex(1.0, 0.0);
    t.push_back(-std::arg(on_circle) / step);
  }
  std::sort(t.begin(), t.end());

  std::vector<double> out;
  out.reserve(t.size());
  if (t.size() % 2 == 1) {
    const auto origin = std::min_element(t.begin(), t.end(), [](double a, double b) {
      return std::abs(a) < std::abs(b);
    });
    t.erase(origin);
    out.push_back(0.0);
  }
  const std::size_t pairs = t.size() / 2;
  for (std::size_t i = 0; i < pairs; ++i) {
    const double half = 0.5 * (t[t.size() - 1 - i] - t[i]);
    out.push_back(-half);
    out.push_back(half);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> estimate_atom_weights(const std::vector<double>& locations,
                                          const FourierSamples& samples) {
  const InBand band = in_band_samples(samples);
  const int n = static_cast<int>(locations.size());
  if (n == 0) return {};
  if (band.count() < n)
    throw InvalidArgument("estimate_atom_weights: fewer in-band samples than locations");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (locations[i] == locations[j])
        throw InvalidArgument("estimate_atom_weights: locations must be distinct");

  const double step = samples.sampling_step;
  Eigen::MatrixXcd v(band.count(), n);
  Eigen::VectorXcd rhs(band.count());
  for (int r = 0; r < band.count(); ++r) {
    const int m = r - band.half_width;
    rhs(r) = band.at(m);
    for (int c = 0; c < n; ++c) v(r, c) = std::polar(1.0, -m * step * locations[c]);
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(v, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (!(s(n - 1) > 0.0) || s(0) / s(n - 1) > kMaxConditionNumber)
    throw DegenerateInputError("estimate_atom_weights: Vandermonde system is ill-conditioned");
  const Eigen::VectorXcd alpha = svd.solve(rhs);

  std::vector<double> weights(n);
  for (int i = 0; i < n; ++i) weights[i] = alpha(i).real();
  return weights;
}

RootSet subspace_roots(const FourierSamples& samples, int order) {
  if (order < 1) throw InvalidArgument("subspace_roots: order must be positive");
  const InBand band = in_band_samples(samples);
  const int rows = band.half_width + 1;
  const int cols = band.count() - rows + 1;
  if (rows <= order || cols < order)
    throw InvalidArgument("subspace_roots: need at least 2 * order + 1 in-band samples");

  Eigen::MatrixXcd hankel(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) hankel(i, j) = band.values[i + j];
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(hankel, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (!(s(order - 1) > 0.0))
    throw DegenerateInputError("subspace_roots: fewer than `order` exponentials in the samples");

  // Column space of the Hankel matrix is shift invariant: U2 = U1 Phi.
  const Eigen::MatrixXcd u = svd.matrixU().leftCols(order);
  const Eigen::MatrixXcd phi =
      u.topRows(rows - 1).completeOrthogonalDecomposition().solve(u.bottomRows(rows - 1));
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(phi, false);
  if (solver.info() != Eigen::Success)
    throw DegenerateInputError("subspace_roots: eigenvalue iteration did not converge");
  RootSet out;
  const auto& ev = solver.eigenvalues();
  out.roots.assign(ev.data(), ev.data() + ev.size());
  return out;
}

AcfAtoms superresolve_acf(const FourierSamples& samples, int k, RootMethod method) {
  if (k < 2) throw InvalidArgument("superresolve_acf: K must be at least 2");
  const int order = k * k - k + 1;
  const RootSet roots = method == RootMethod::kSubspace
                            ? subspace_roots(samples, order)
                            : filter_roots(fit_annihilating_filter(samples, order));
  const std::vector<double> locations = roots_to_locations(roots, samples.sampling_step);
  std::vector<double> weights = estimate_atom_weights(locations, samples);

  const std::size_t n = weights.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double w = 0.5 * (weights[i] + weights[n - 1 - i]);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  return AcfAtoms{PointSet::FromScalars(locations), std::move(weights)};
}

}  // namespace spr
