#pragma once

// Monte Carlo experiment drivers. Every trial draws its randomness from
// derive_seed(master_seed, cell, trial), so results do not depend on the
// number of worker threads.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spr/charge_flipping.hpp"
#include "spr/harness/table.hpp"
#include "spr/support_recovery.hpp"

namespace spr::harness {

inline constexpr double kNoiseless = std::numeric_limits<double>::infinity();

struct ExperimentSpec {
  std::string id;
  std::vector<int> k_grid;
  // sigma values, or SNR in dB for the Charge Flipping comparison
  // (kNoiseless for no noise).
  std::vector<double> noise_grid;
  int trials = 200;
  std::uint64_t master_seed = 1;
  RecoveryConfig recovery;
  // Fit the signal model to the samples after support recovery (1D, Fourier
  // noise experiments only).
  bool refine = false;
  int dimension = 1;
  unsigned threads = 0;

  // Interior nodes i / (star_grid + 1); odd values put nodes on every locus.
  int star_grid = 21;
  int timing_repetitions = 20;
  int timing_instances = 1;
  int fourier_max_index = 100;
  double pad = 2.0;
  double success_threshold = 0.04;
  FlipConfig flip;

  // Defaults for a known experiment id; throws InvalidArgument otherwise.
  static ExperimentSpec Defaults(const std::string& id);
  void validate() const;
};

void to_json(nlohmann::json& j, const ExperimentSpec& s);
// Overlays the fields present in `j` onto `s`.
void merge_json(const nlohmann::json& j, ExperimentSpec& s);

const std::vector<std::string>& experiment_ids();

// Columns: K, sigma, success, theory.
Table run_phase_transition(const ExperimentSpec& spec);
// Columns: config, sigma, l2_error, index_error, success.
Table run_improvements_ablation(const ExperimentSpec& spec);
// Columns: x3, x4, index_error, l2_error.
Table run_star_experiment(const ExperimentSpec& spec);
// Columns: K, uncached_s, cached_s, identical.
Table run_caching_benchmark(const ExperimentSpec& spec);
// Columns: snr_db, method, l2_error, success_rate, failures.
Table run_cf_comparison(const ExperimentSpec& spec);

Table run_experiment(const ExperimentSpec& spec);

// The eight combinations of pruning, symmetric cost and denoising, caching
// off, in a fixed order starting with the baseline.
std::vector<std::pair<std::string, RecoveryConfig>> improvement_configs();

struct PowerLawFit {
  double log_c = 0.0;
  double exponent = 0.0;
};
// Least squares fit of log y = log C + alpha log x.
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

// sigma at which a decreasing success curve crosses `level`, interpolated
// linearly in log sigma. NaN if the curve never crosses.
double crossing_sigma(const std::vector<double>& sigmas, const std::vector<double>& rates,
                      double level = 0.5);

// Smallest coordinate distance from (x3, x4) to the lines x4 = x3,
// x4 = x3 +- 0.5, x4 = 1 - 2 x3 and its mirror x3 = 1 - 2 x4.
double star_locus_distance(double x3, double x4);

// Experiment-specific summary written to the manifest.
nlohmann::json summarize(const ExperimentSpec& spec, const Table& table);

}  // namespace spr::harness
