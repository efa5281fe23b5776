#include <fstream>
#include <iostream>
#include <iterator>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spr/amplitudes.hpp"
#include "spr/charge_flipping.hpp"
#include "spr/errors.hpp"
#include "spr/fri.hpp"
#include "spr/harness/experiment.hpp"
#include "spr/harness/manifest.hpp"
#include "spr/pipeline.hpp"
#include "spr/random.hpp"
#include "spr/serialization.hpp"
#include "spr/theory.hpp"

using nlohmann::json;

namespace {

json read_json(const std::string& path) {
  if (path == "-") return json::parse(std::cin);
  std::ifstream in(path);
  if (!in) throw spr::Error("cannot open " + path);
  return json::parse(in);
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw spr::Error("cannot write " + out);
  f << text;
}

void emit_json(const json& j, const std::string& out) { emit(j.dump(2) + "\n", out); }

// Accepts either the bare object or a document holding it under `key`.
const json& section(const json& doc, const char* key) {
  return doc.contains(key) ? doc.at(key) : doc;
}

struct RecoveryFlags {
  bool cache = false, prune = false, symmetric = false, denoise = false;

  void add(CLI::App* app) {
    app->add_flag("--cache", cache, "Use the cost lookup table");
    app->add_flag("--prune", prune, "Drop differences explained by accepted points");
    app->add_flag("--symmetric", symmetric, "Score p - x and x - p jointly");
    app->add_flag("--denoise", denoise, "Re-estimate partial solutions from their labels");
  }
  bool any() const { return cache || prune || symmetric || denoise; }
  spr::RecoveryConfig config() const { return {cache, prune, symmetric, denoise}; }
};

struct FlipFlags {
  spr::FlipConfig flip;
  CLI::Option* grid = nullptr;
  CLI::Option* b = nullptr;
  CLI::Option* decay = nullptr;
  CLI::Option* restarts = nullptr;
  CLI::Option* max_iters = nullptr;

  void add(CLI::App* app) {
    grid = app->add_option("--grid", flip.grid_size, "Charge Flipping grid size");
    b = app->add_option("--b", flip.b, "Threshold multiplier");
    decay = app->add_option("--decay", flip.delta_decay, "Threshold decay per epoch");
    restarts = app->add_option("--restarts", flip.restarts, "Independent restarts");
    max_iters = app->add_option("--max-iters", flip.max_iters, "Iterations per restart");
  }
  void overlay(spr::FlipConfig& target) const {
    if (*grid) target.grid_size = flip.grid_size;
    if (*b) target.b = flip.b;
    if (*decay) target.delta_decay = flip.delta_decay;
    if (*restarts) target.restarts = flip.restarts;
    if (*max_iters) target.max_iters = flip.max_iters;
  }
};

std::vector<double> log_spaced(double lo, double hi, int points) {
  std::vector<double> out;
  if (points == 1) return {lo};
  for (int i = 0; i < points; ++i)
    out.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (points - 1)));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse phase retrieval: super-resolution, support and amplitude recovery"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::string out;
  std::string input = "-";
  int k = 5;
  int dim = 1;

  auto* synth = app.add_subcommand("synth", "Draw a support and its measurements");
  double sigma = 0.0, snr = spr::harness::kNoiseless, pad = 2.0;
  int max_index = 100;
  synth->add_option("--k", k, "Number of points")->check(CLI::Range(2, 1000));
  synth->add_option("--dim", dim, "Dimension (1 or 2)")->check(CLI::Range(1, 2));
  synth->add_option("--seed", seed, "Random seed");
  synth->add_option("--sigma", sigma, "Noise on the differences")->check(CLI::NonNegativeNumber);
  synth->add_option("--snr", snr, "SNR in dB of the Fourier samples");
  synth->add_option("--max-index", max_index, "Samples cover m = -M..M");
  synth->add_option("--pad", pad, "Zero-padding factor of the support extent");
  synth->add_option("--out", out, "Output JSON file");

  auto* superres = app.add_subcommand("superresolve", "Autocorrelation atoms from Fourier samples");
  superres->add_option("--in", input, "Samples JSON (- for stdin)");
  superres->add_option("--k", k, "Number of points")->required();
  superres->add_option("--out", out, "Output JSON file");

  auto* recover = app.add_subcommand("recover", "Support from unlabeled differences");
  RecoveryFlags recovery_flags;
  recover->add_option("--in", input, "Differences or atoms JSON (- for stdin)");
  recover->add_option("--k", k, "Number of points")->required();
  recover->add_option("--out", out, "Output JSON file");
  recovery_flags.add(recover);

  auto* amps = app.add_subcommand("amplitudes", "Amplitudes from atoms and a support");
  double tolerance = spr::kDefaultLabelingTolerance;
  amps->add_option("--in", input, "JSON with \"atoms\" and \"support\" (- for stdin)");
  amps->add_option("--tolerance", tolerance, "Largest allowed labeling distance");
  amps->add_option("--out", out, "Output JSON file");

  auto* theory = app.add_subcommand("theory", "Theoretical success probability surface as CSV");
  std::vector<int> ks{5, 8, 12};
  double sigma_min = 1e-5, sigma_max = 1e-1;
  int points = 9;
  theory->add_option("--k", ks, "Support sizes (>= 3)")->delimiter(',');
  theory->add_option("--sigma-min", sigma_min, "Smallest sigma")->check(CLI::PositiveNumber);
  theory->add_option("--sigma-max", sigma_max, "Largest sigma")->check(CLI::PositiveNumber);
  theory->add_option("--points", points, "Log-spaced sigma values")->check(CLI::Range(1, 100000));
  int theory_dimension = 1;
  theory->add_option("--dimension", theory_dimension, "Point dimension")->check(CLI::Range(1, 2));
  theory->add_option("--out", out, "Output CSV file");

  auto* cf = app.add_subcommand("cf", "Charge Flipping on Fourier samples");
  FlipFlags cf_flags;
  cf->add_option("--in", input, "Samples JSON (- for stdin)");
  cf->add_option("--k", k, "Number of peaks to extract")->required();
  cf->add_option("--seed", seed, "Random seed");
  cf->add_option("--out", out, "Output JSON file");
  cf_flags.add(cf);

  auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo experiment");
  std::string id, config_path;
  int trials = 0;
  unsigned threads = 0;
  std::optional<bool> refine;
  RecoveryFlags experiment_recovery;
  FlipFlags experiment_flip;
  experiment->add_option("id", id, "Experiment id")
      ->required()
      ->check(CLI::IsMember(spr::harness::experiment_ids()));
  experiment->add_option("--config", config_path, "JSON experiment spec")->check(CLI::ExistingFile);
  auto* seed_opt = experiment->add_option("--seed", seed, "Master seed");
  experiment->add_option("--out", out, "Output CSV (manifest written alongside)");
  experiment->add_option("--trials", trials, "Trials per cell");
  experiment->add_option("--threads", threads, "Worker threads (0 = all cores)");
  experiment->add_flag("--refine,!--no-refine", refine, "Fit the signal model after recovery");
  experiment_recovery.add(experiment);
  experiment_flip.add(experiment);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      const spr::Support support = spr::synthesize_support(k, dim, {0.0, 1.0}, seed);
      const spr::Amplitudes amplitudes = spr::Amplitudes::Ones(k);
      const spr::AcfAtoms atoms = spr::build_acf_atoms(support, amplitudes);
      const spr::DifferenceSet diffs =
          spr::add_difference_noise(spr::difference_set(support), sigma, spr::mix64(seed));
      json doc{{"support", support}, {"amplitudes", amplitudes}, {"atoms", atoms},
               {"differences", diffs}};
      if (dim == 1) {
        const auto samples = spr::acf_fourier_samples(
            atoms, {}, spr::padded_sampling_step(1.0, pad), max_index);
        doc["samples"] = spr::add_fourier_noise(samples, snr, spr::mix64(seed + 1));
      }
      emit_json(doc, out);
    } else if (*superres) {
      const json doc = read_json(input);
      const auto samples = section(doc, "samples").get<spr::FourierSamples>();
      emit_json({{"atoms", spr::superresolve_acf(samples, k)}}, out);
    } else if (*recover) {
      const json doc = read_json(input);
      // Accepts a difference set or the atoms written by superresolve.
      const auto diffs = doc.contains("atoms") && !doc.contains("differences")
                             ? spr::difference_set(doc.at("atoms").get<spr::AcfAtoms>())
                             : section(doc, "differences").get<spr::DifferenceSet>();
      const spr::Support support =
          spr::recover_support(diffs, k, recovery_flags.config(), diffs.dimension());
      emit_json({{"support", support}}, out);
    } else if (*amps) {
      const json doc = read_json(input);
      const auto atoms = doc.at("atoms").get<spr::AcfAtoms>();
      const auto support = doc.at("support").get<spr::Support>();
      const spr::Amplitudes a =
          spr::recover_amplitudes(spr::assemble_weight_matrix(atoms, support, tolerance));
      emit_json({{"amplitudes", a}}, out);
    } else if (*theory) {
      spr::harness::Table table{{"K", "sigma", "p"}, {}};
      for (int kk : ks)
        for (double s : log_spaced(sigma_min, sigma_max, points))
          table.add_row({std::int64_t{kk}, s, spr::success_probability(kk, s, theory_dimension)});
      emit(table.to_csv(), out);
    } else if (*cf) {
      const json doc = read_json(input);
      const auto samples = section(doc, "samples").get<spr::FourierSamples>();
      spr::FlipConfig flip;
      cf_flags.overlay(flip);
      flip.seed = seed;
      const auto result =
          spr::charge_flip(spr::magnitudes_from_acf_samples(samples, flip.grid_size), flip);
      const double period = 2.0 * std::numbers::pi / samples.sampling_step;
      emit_json({{"support", spr::extract_support_from_grid(result.signal, k, period)},
                 {"residual", result.residual},
                 {"restart", result.best_restart},
                 {"iterations", result.iterations},
                 {"signal", result.signal}},
                out);
    } else if (*experiment) {
      auto spec = spr::harness::ExperimentSpec::Defaults(id);
      if (!config_path.empty()) spr::harness::merge_json(read_json(config_path), spec);
      if (spec.id != id) throw spr::InvalidArgument("config id does not match " + id);
      if (*seed_opt) spec.master_seed = seed;
      if (trials > 0) spec.trials = trials;
      if (threads > 0) spec.threads = threads;
      if (refine) spec.refine = *refine;
      if (experiment_recovery.any()) spec.recovery = experiment_recovery.config();
      experiment_flip.overlay(spec.flip);
      const auto table = spr::harness::run_experiment(spec);
      const std::string csv_path = out.empty() ? id + ".csv" : out;
      const json manifest = spr::harness::write_results(
          csv_path, table.to_csv(), json(spec), spr::harness::summarize(spec, table));
      std::cout << manifest.dump(2) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "spr: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
