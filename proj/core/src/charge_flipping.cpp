#include "spr/charge_flipping.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include <unsupported/Eigen/FFT>

#include "spr/errors.hpp"
#include "spr/random.hpp"

namespace spr {
namespace {

using Spectrum = std::vector<std::complex<double>>;

class Projector {
 public:
  explicit Projector(const std::vector<double>& magnitudes) : magnitudes_(magnitudes) {}

  // Replaces `signal` by its magnitude projection; the spectrum is kept for
  // reuse.
  void apply(std::vector<double>& signal) {
    fft_.fwd(spectrum_, signal);
    impose(spectrum_);
    fft_.inv(signal, spectrum_);
  }

  void impose(Spectrum& spectrum) const {
    for (std::size_t j = 0; j < spectrum.size(); ++j) {
      const double a = std::abs(spectrum[j]);
      spectrum[j] = a > 0.0 ? spectrum[j] * (magnitudes_[j] / a) : magnitudes_[j];
    }
  }

  double residual(const std::vector<double>& signal) {
    fft_.fwd(spectrum_, signal);
    double sum = 0.0;
    for (std::size_t j = 0; j < spectrum_.size(); ++j) {
      const double d = std::abs(spectrum_[j]) - magnitudes_[j];
      sum += d * d;
    }
    return std::sqrt(sum);
  }

  Eigen::FFT<double>& fft() { return fft_; }

 private:
  const std::vector<double>& magnitudes_;
  Eigen::FFT<double> fft_;
  Spectrum spectrum_;
};

double stddev(const std::vector<double>& x) {
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  return std::sqrt(var / x.size());
}

struct RestartOutcome {
  std::vector<double> flipped;
  double residual;
  int iterations;
};

RestartOutcome run_restart(const std::vector<double>& magnitudes, const FlipConfig& config,
                           std::uint64_t seed) {
  const int n = config.grid_size;
  Rng rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

  Spectrum spectrum(n);
  spectrum[0] = magnitudes[0];
  for (int j = 1; j < n - j; ++j) {
    spectrum[j] = std::polar(magnitudes[j], phase(rng));
    spectrum[n - j] = std::conj(spectrum[j]);
  }
  if (n % 2 == 0) spectrum[n / 2] = magnitudes[n / 2] * (phase(rng) < std::numbers::pi ? 1.0 : -1.0);

  Projector projector(magnitudes);
  std::vector<double> rho;
  projector.fft().inv(rho, spectrum);

  std::vector<double> flipped(n);
  double delta = 0.0;
  int iter = 0;
  while (iter < config.max_iters) {
    if (iter % config.epoch_length == 0)
      delta = config.b * stddev(rho) * std::pow(config.delta_decay, iter / config.epoch_length);
    double total = 0.0, moved = 0.0;
    for (int i = 0; i < n; ++i) {
      total += std::abs(rho[i]);
      if (rho[i] < delta) {
        flipped[i] = -rho[i];
        moved += std::abs(rho[i]);
      } else {
        flipped[i] = rho[i];
      }
    }
    ++iter;
    if (total > 0.0 && moved / total < config.stop_fraction) break;
    rho = flipped;
    projector.apply(rho);
  }
  const double residual = projector.residual(flipped);
  return {std::move(flipped), residual, iter};
}

}  // namespace

void FlipConfig::validate(int k) const {
  if (grid_size < 2) throw InvalidArgument("FlipConfig: grid_size must be >= 2");
  if (k > 0 && grid_size < 2 * k) throw InvalidArgument("FlipConfig: grid_size must be >= 2K");
  if (!(b > 0.0)) throw InvalidArgument("FlipConfig: b must be positive");
  if (!(delta_decay > 0.0 && delta_decay <= 1.0))
    throw InvalidArgument("FlipConfig: delta_decay must be in (0, 1]");
  if (epoch_length < 1) throw InvalidArgument("FlipConfig: epoch_length must be >= 1");
  if (max_iters < 1) throw InvalidArgument("FlipConfig: max_iters must be >= 1");
  if (restarts < 1) throw InvalidArgument("FlipConfig: restarts must be >= 1");
}

FlipResult charge_flip(const std::vector<double>& magnitudes, const FlipConfig& config) {
  config.validate();
  if (magnitudes.size() != static_cast<std::size_t>(config.grid_size))
    throw InvalidArgument("charge_flip: magnitudes must have grid_size entries");
  if (std::all_of(magnitudes.begin(), magnitudes.end(), [](double m) { return m == 0.0; }))
    throw InvalidArgument("charge_flip: all magnitudes are zero");
  for (double m : magnitudes)
    if (!(m >= 0.0) || !std::isfinite(m))
      throw InvalidArgument("charge_flip: magnitudes must be finite and nonnegative");

  FlipResult best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int r = 0; r < config.restarts; ++r) {
    RestartOutcome out = run_restart(magnitudes, config, config.seed + r);
    if (out.residual < best.residual) {
      best.signal = std::move(out.flipped);
      best.residual = out.residual;
      best.best_restart = r;
      best.iterations = out.iterations;
    }
  }
  return best;
}

std::vector<double> project_magnitudes(const std::vector<double>& signal,
                                       const std::vector<double>& magnitudes) {
  if (signal.size() != magnitudes.size())
    throw InvalidArgument("project_magnitudes: size mismatch");
  std::vector<double> out = signal;
  Projector(magnitudes).apply(out);
  return out;
}

double magnitude_residual(const std::vector<double>& signal,
                          const std::vector<double>& magnitudes) {
  if (signal.size() != magnitudes.size())
    throw InvalidArgument("magnitude_residual: size mismatch");
  return Projector(magnitudes).residual(signal);
}

std::vector<double> magnitudes_from_acf_samples(const FourierSamples& samples, int grid_size) {
  if (grid_size < 2) throw InvalidArgument("magnitudes_from_acf_samples: grid_size must be >= 2");
  if (samples.max_index() < grid_size / 2)
    throw InvalidArgument("magnitudes_from_acf_samples: not enough samples for the grid");
  std::vector<double> mags(grid_size);
  for (int j = 0; j < grid_size; ++j) {
    const int m = j <= grid_size / 2 ? j : j - grid_size;
    mags[j] = std::sqrt(std::max(samples.at(m).real(), 0.0));
  }
  return mags;
}

Support extract_support_from_grid(const std::vector<double>& signal, int k, double period) {
  if (k < 2) throw InvalidArgument("extract_support_from_grid: K must be >= 2");
  if (!(period > 0.0)) throw InvalidArgument("extract_support_from_grid: period must be positive");
  const auto nonzero = std::count_if(signal.begin(), signal.end(), [](double v) { return v != 0.0; });
  if (nonzero < k) throw DegenerateOutputError("extract_support_from_grid: fewer than K nonzero cells");

  std::vector<std::size_t> order(signal.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(signal[a]) > std::abs(signal[b]);
  });
  order.resize(k);
  std::sort(order.begin(), order.end());

  const double cell = period / static_cast<double>(signal.size());
  std::vector<double> loc(k);
  for (int i = 0; i < k; ++i) loc[i] = order[i] * cell;

  std::size_t start = 0;
  double widest = period - loc[k - 1] + loc[0];
  for (int i = 1; i < k; ++i) {
    if (loc[i] - loc[i - 1] > widest) {
      widest = loc[i] - loc[i - 1];
      start = i;
    }
  }
  std::vector<double> unwrapped(k);
  for (int i = 0; i < k; ++i) {
    const double v = loc[(start + i) % k] - loc[start];
    unwrapped[i] = v < 0.0 ? v + period : v;
  }
  return Support(PointSet::FromScalars(std::move(unwrapped)));
}

}  // namespace spr
