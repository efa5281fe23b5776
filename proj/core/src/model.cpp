#include "spr/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spr/errors.hpp"
#include "spr/random.hpp"

namespace spr {
namespace {

// Lexicographic order on coordinates.
bool lex_less(ConstPoint a, ConstPoint b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

PointSet sorted_by_norm(const PointSet& in) {
  std::vector<std::size_t> order(in.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> norms(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) norms[i] = in.squared_norm(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return norms[a] < norms[b]; });
  PointSet out(in.dimension());
  out.reserve(in.size());
  for (std::size_t i : order) out.push_back(in[i]);
  return out;
}

PointSet all_differences(const PointSet& points) {
  const std::size_t k = points.size();
  const int dim = points.dimension();
  PointSet diffs(dim);
  diffs.reserve(k * k - k + 1);
  std::vector<double> d(dim, 0.0);
  diffs.push_back(d);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b) continue;
      for (int c = 0; c < dim; ++c) d[c] = points[a][c] - points[b][c];
      diffs.push_back(d);
    }
  }
  return diffs;
}

}  // namespace

Support::Support(PointSet points) : points_(std::move(points)) {
  if (points_.size() < 2) throw InvalidArgument("a support needs at least two points");
  for (double c : points_.coords())
    if (!std::isfinite(c)) throw InvalidArgument("support coordinates must be finite");
}

bool Support::has_distinct_points(double tolerance) const {
  return !has_collision(points_, tolerance);
}

Amplitudes::Amplitudes(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_)
    if (!(v > 0.0) || !std::isfinite(v))
      throw InvalidArgument("amplitudes must be finite and strictly positive");
}

std::optional<int> support_size_for(std::size_t n) {
  // K^2 - K + 1 = n  =>  K = (1 + sqrt(4n - 3)) / 2
  if (n < 3) return std::nullopt;
  const auto k = static_cast<int>(std::lround((1.0 + std::sqrt(4.0 * n - 3.0)) / 2.0));
  if (static_cast<std::size_t>(k) * k - k + 1 != n) return std::nullopt;
  return k;
}

DifferenceSet::DifferenceSet(PointSet diffs, std::optional<double> sigma_hint)
    : diffs_(sorted_by_norm(diffs)), sigma_hint_(sigma_hint) {
  if (!support_size_for(diffs_.size()))
    throw InvalidArgument("difference set size " + std::to_string(diffs_.size()) +
                          " is not K^2 - K + 1 for any K >= 2");
  if (sigma_hint_ && !(*sigma_hint_ >= 0.0))
    throw InvalidArgument("sigma hint must be nonnegative");
}

int DifferenceSet::support_size() const { return *support_size_for(diffs_.size()); }

int FourierSamples::in_band_max_index() const {
  const int m_max = max_index();
  int m = 0;
  while (m < m_max && kernel.squared_response((m + 1) * sampling_step) > 0.0) ++m;
  if (kernel.squared_response(0.0) == 0.0) return -1;
  return m;
}

bool has_collision(const PointSet& locations, double tolerance) {
  const std::size_t n = locations.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return locations[a][0] < locations[b][0]; });
  const double tol2 = tolerance * tolerance;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (locations[order[j]][0] - locations[order[i]][0] >= tolerance) break;
      if (squared_distance(locations[order[i]], locations[order[j]]) < tol2) return true;
    }
  }
  return false;
}

Support synthesize_support(int k, int dimension, Interval bounds, std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("synthesize_support: K must be at least 2");
  if (dimension != 1 && dimension != 2)
    throw InvalidArgument("synthesize_support: only D = 1 and D = 2 are supported");
  if (!(bounds.hi > bounds.lo)) throw InvalidArgument("synthesize_support: empty bounds");

  Rng rng(seed);
  std::uniform_real_distribution<double> uniform(bounds.lo, bounds.hi);
  for (;;) {
    std::vector<double> coords(static_cast<std::size_t>(k) * dimension);
    for (double& c : coords) c = uniform(rng);
    PointSet points(dimension, std::move(coords));
    if (!has_collision(all_differences(points))) return Support(std::move(points));
  }
}

AcfAtoms build_acf_atoms(const Support& support, const Amplitudes& amplitudes) {
  const std::size_t k = support.size();
  if (amplitudes.size() != k)
    throw InvalidArgument("build_acf_atoms: amplitude count does not match support size");
  const PointSet diffs = all_differences(support.points());
  if (has_collision(diffs))
    throw CollisionError("build_acf_atoms: two point pairs share the same difference");

  std::vector<double> weights;
  weights.reserve(diffs.size());
  double energy = 0.0;
  for (double c : amplitudes.values()) energy += c * c;
  weights.push_back(energy);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      if (a != b) weights.push_back(amplitudes[a] * amplitudes[b]);

  std::vector<std::size_t> order(diffs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return lex_less(diffs[a], diffs[b]); });
  AcfAtoms atoms{PointSet(support.dimension()), {}};
  atoms.locations.reserve(order.size());
  for (std::size_t i : order) {
    atoms.locations.push_back(diffs[i]);
    atoms.weights.push_back(weights[i]);
  }
  return atoms;
}

DifferenceSet difference_set(const Support& support) {
  return DifferenceSet(all_differences(support.points()));
}

DifferenceSet difference_set(const AcfAtoms& atoms) { return DifferenceSet(atoms.locations); }

FourierSamples acf_fourier_samples(const AcfAtoms& atoms, const KernelDescriptor& kernel,
                                   double step, int max_index) {
  if (atoms.locations.dimension() != 1)
    throw InvalidArgument("acf_fourier_samples: only one-dimensional atoms are supported");
  if (!(step > 0.0)) throw InvalidArgument("acf_fourier_samples: sampling step must be positive");
  if (max_index < static_cast<int>(atoms.size()))
    throw InvalidArgument("acf_fourier_samples: need at least as many samples as atoms");

  FourierSamples out;
  out.sampling_step = step;
  out.kernel = kernel;
  out.values.assign(2 * static_cast<std::size_t>(max_index) + 1, {0.0, 0.0});
  for (int m = 0; m <= max_index; ++m) {
    const double gain = kernel.squared_response(m * step);
    std::complex<double> acc{0.0, 0.0};
    if (gain != 0.0) {
      for (std::size_t n = 0; n < atoms.size(); ++n)
        acc += atoms.weights[n] * std::polar(1.0, -m * step * atoms.locations[n][0]);
      acc *= gain;
    }
    out.at(m) = acc;
    out.at(-m) = std::conj(acc);
  }
  // The origin sample of a real symmetric ACF is real.
  out.at(0) = {out.at(0).real(), 0.0};
  return out;
}

DifferenceSet add_difference_noise(const DifferenceSet& clean, double sigma,
                                   std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw InvalidArgument("add_difference_noise: sigma must be nonnegative");
  if (sigma == 0.0) return clean;
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  PointSet noisy = clean.diffs();
  for (double& c : noisy.coords()) c += normal(rng);
  return DifferenceSet(std::move(noisy), sigma);
}

double mean_power(const FourierSamples& samples) {
  double power = 0.0;
  for (const auto& v : samples.values) power += std::norm(v);
  return samples.values.empty() ? 0.0 : power / static_cast<double>(samples.values.size());
}

FourierSamples add_fourier_noise(const FourierSamples& samples, double snr_db,
                                 std::uint64_t seed) {
  if (std::isnan(snr_db)) throw InvalidArgument("add_fourier_noise: SNR must not be NaN");
  if (std::isinf(snr_db) && snr_db > 0) return samples;
  const double noise_power = mean_power(samples) / std::pow(10.0, snr_db / 10.0);
  const double sd = std::sqrt(noise_power);
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  FourierSamples out = samples;
  out.at(0) += sd * normal(rng);
  for (int m = 1; m <= out.max_index(); ++m) {
    const std::complex<double> n(sd * M_SQRT1_2 * normal(rng), sd * M_SQRT1_2 * normal(rng));
    out.at(m) += n;
    out.at(-m) += std::conj(n);
  }
  return out;
}

}  // namespace spr
