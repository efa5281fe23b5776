#pragma once

// Charge Flipping: a dual-space iteration that recovers a discretized sparse
// nonnegative signal from the magnitudes of its DFT.

#include <cstdint>
#include <vector>

#include "spr/model.hpp"

namespace spr {

struct FlipConfig {
  int grid_size = 200;
  // Threshold multiplier: delta = b * std(signal) * delta_decay^epoch.
  double b = 1.1;
  double delta_decay = 0.99;
  int epoch_length = 50;
  int max_iters = 5000;
  int restarts = 10;
  std::uint64_t seed = 0;
  // A restart stops once the flipped share of the total charge is below this.
  double stop_fraction = 0.01;

  // Throws InvalidArgument. `k` is the expected number of spikes, 0 to skip
  // the grid_size >= 2K check.
  void validate(int k = 0) const;
};

struct FlipResult {
  std::vector<double> signal;  // post-flip iterate of the best restart
  double residual = 0.0;       // || |DFT(signal)| - magnitudes ||
  int best_restart = 0;
  int iterations = 0;          // iterations used by the best restart
};

// Runs config.restarts independent restarts (seeded seed + r) and keeps the
// one with the smallest magnitude residual. `magnitudes` has grid_size
// entries with magnitudes[j] == magnitudes[grid_size - j].
FlipResult charge_flip(const std::vector<double>& magnitudes, const FlipConfig& config);

// Keeps the phases of DFT(signal) and imposes `magnitudes`. Bins where the
// transform vanishes get phase 0.
std::vector<double> project_magnitudes(const std::vector<double>& signal,
                                       const std::vector<double>& magnitudes);

// || |DFT(signal)| - magnitudes ||_2.
double magnitude_residual(const std::vector<double>& signal,
                          const std::vector<double>& magnitudes);

// DFT magnitudes of a grid of size `grid_size` from autocorrelation spectrum
// samples: bin j takes sqrt(max(Re A_m, 0)) with m = j for j <= grid_size / 2
// and m = j - grid_size above. Needs samples.max_index() >= grid_size / 2.
std::vector<double> magnitudes_from_acf_samples(const FourierSamples& samples, int grid_size);

// The K cells with the largest |value|, at i / grid * period, unwrapped at
// the largest circular gap so the set is contiguous in [0, period).
// Adjacent cells are separate peaks.
Support extract_support_from_grid(const std::vector<double>& signal, int k,
                                  double period = 1.0);

}  // namespace spr
