#include "spr/harness/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "spr/errors.hpp"
#include "spr/harness/parallel.hpp"
#include "spr/metrics.hpp"
#include "spr/model.hpp"
#include "spr/pipeline.hpp"
#include "spr/random.hpp"
#include "spr/serialization.hpp"
#include "spr/theory.hpp"

using nlohmann::json;

namespace spr::harness {
namespace {

std::vector<double> log_grid(double lo_exp, double hi_exp, double step) {
  std::vector<double> out;
  for (double e = lo_exp; e <= hi_exp + 1e-9; e += step) out.push_back(std::pow(10.0, e));
  return out;
}

json noise_to_json(double v) { return std::isinf(v) ? json("inf") : json(v); }

double noise_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kNoiseless;
    throw InvalidArgument("spec: noise values must be numbers or \"inf\"");
  }
  return j.get<double>();
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? std::nan("") : s / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double l2_norm_error(const Support& truth, const Support& estimate) {
  return std::sqrt(l2_error_aligned(truth, estimate));
}

double star_node(std::size_t i, std::size_t g) {
  return static_cast<double>(i + 1) / static_cast<double>(g + 1);
}

Support star_support(double x3, double x4) {
  return Support(PointSet::FromScalars({0.0, 1.0, x3, x4}));
}

double theoretical_crossing(int k, double level, int dimension) {
  double lo = std::log(1e-9), hi = std::log(1.0);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (success_probability(k, std::exp(mid), dimension) > level ? lo : hi) = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

}  // namespace

std::vector<std::pair<std::string, RecoveryConfig>> improvement_configs() {
  std::vector<std::pair<std::string, RecoveryConfig>> out;
  for (int mask = 0; mask < 8; ++mask) {
    RecoveryConfig c;
    c.prune_differences = mask & 1;
    c.symmetric_cost = mask & 2;
    c.denoise_partials = mask & 4;
    std::string name;
    if (c.prune_differences) name += "prune+";
    if (c.symmetric_cost) name += "symmetric+";
    if (c.denoise_partials) name += "denoise+";
    name = name.empty() ? "baseline" : name.substr(0, name.size() - 1);
    out.emplace_back(name, c);
  }
  return out;
}

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids{"phase-transition", "ablation", "star", "caching",
                                            "cf-comparison"};
  return ids;
}

ExperimentSpec ExperimentSpec::Defaults(const std::string& id) {
  ExperimentSpec s;
  s.id = id;
  if (id == "phase-transition") {
    s.k_grid = {5, 8, 12};
    s.noise_grid = log_grid(-5.0, -1.0, 0.5);
    s.dimension = 2;
  } else if (id == "ablation") {
    s.k_grid = {6};
    s.noise_grid = {0.0, 1e-3, 2e-3, 3e-3, 4e-3, 6e-3, 8e-3, 1e-2};
  } else if (id == "star") {
    s.k_grid = {4};
    s.noise_grid = {0.01};
    s.trials = 50;
    s.recovery = RecoveryConfig::AllImprovements();
  } else if (id == "caching") {
    s.k_grid = {10, 15, 20, 25, 30};
    s.noise_grid = {0.0};
    s.trials = 1;
    s.timing_instances = 50;
  } else if (id == "cf-comparison") {
    s.k_grid = {5};
    s.noise_grid = {10.0, 20.0, 30.0, 40.0, 60.0, kNoiseless};
    s.trials = 100;
    s.recovery = RecoveryConfig::AllImprovements();
    s.refine = true;
  } else {
    throw InvalidArgument("unknown experiment id: " + id);
  }
  return s;
}

void ExperimentSpec::validate() const {
  if (std::find(experiment_ids().begin(), experiment_ids().end(), id) == experiment_ids().end())
    throw InvalidArgument("unknown experiment id: " + id);
  if (k_grid.empty() || noise_grid.empty()) throw InvalidArgument("spec: grids must be nonempty");
  if (trials < 1) throw InvalidArgument("spec: trials must be >= 1");
  for (int k : k_grid)
    if (k < 2) throw InvalidArgument("spec: K must be >= 2");
  if (dimension != 1 && dimension != 2) throw InvalidArgument("spec: dimension must be 1 or 2");
  if (star_grid < 1 || timing_repetitions < 1 || timing_instances < 1)
    throw InvalidArgument("spec: grid sizes and repetition counts must be >= 1");
  recovery.validate();
  flip.validate();
}

void to_json(json& j, const ExperimentSpec& s) {
  json noise = json::array();
  for (double v : s.noise_grid) noise.push_back(noise_to_json(v));
  j = json{{"id", s.id},
           {"k_grid", s.k_grid},
           {"noise_grid", noise},
           {"trials", s.trials},
           {"master_seed", s.master_seed},
           {"recovery", s.recovery},
           {"refine", s.refine},
           {"dimension", s.dimension},
           {"star_grid", s.star_grid},
           {"timing_repetitions", s.timing_repetitions},
           {"timing_instances", s.timing_instances},
           {"fourier_max_index", s.fourier_max_index},
           {"pad", s.pad},
           {"success_threshold", s.success_threshold},
           {"flip",
            {{"grid", s.flip.grid_size},
             {"b", s.flip.b},
             {"decay", s.flip.delta_decay},
             {"epoch_length", s.flip.epoch_length},
             {"max_iters", s.flip.max_iters},
             {"restarts", s.flip.restarts},
             {"stop_fraction", s.flip.stop_fraction}}}};
}

void merge_json(const json& j, ExperimentSpec& s) {
  if (j.contains("id")) s.id = j["id"].get<std::string>();
  if (j.contains("k_grid")) s.k_grid = j["k_grid"].get<std::vector<int>>();
  if (j.contains("noise_grid")) {
    s.noise_grid.clear();
    for (const json& v : j["noise_grid"]) s.noise_grid.push_back(noise_from_json(v));
  }
  s.trials = j.value("trials", s.trials);
  s.master_seed = j.value("master_seed", s.master_seed);
  if (j.contains("recovery")) s.recovery = j["recovery"].get<RecoveryConfig>();
  s.refine = j.value("refine", s.refine);
  s.dimension = j.value("dimension", s.dimension);
  s.threads = j.value("threads", s.threads);
  s.star_grid = j.value("star_grid", s.star_grid);
  s.timing_repetitions = j.value("timing_repetitions", s.timing_repetitions);
  s.timing_instances = j.value("timing_instances", s.timing_instances);
  s.fourier_max_index = j.value("fourier_max_index", s.fourier_max_index);
  s.pad = j.value("pad", s.pad);
  s.success_threshold = j.value("success_threshold", s.success_threshold);
  if (j.contains("flip")) {
    const json& f = j["flip"];
    s.flip.grid_size = f.value("grid", s.flip.grid_size);
    s.flip.b = f.value("b", s.flip.b);
    s.flip.delta_decay = f.value("decay", s.flip.delta_decay);
    s.flip.epoch_length = f.value("epoch_length", s.flip.epoch_length);
    s.flip.max_iters = f.value("max_iters", s.flip.max_iters);
    s.flip.restarts = f.value("restarts", s.flip.restarts);
    s.flip.stop_fraction = f.value("stop_fraction", s.flip.stop_fraction);
  }
}

Table run_phase_transition(const ExperimentSpec& spec) {
  const std::size_t ns = spec.noise_grid.size();
  const std::size_t cells = spec.k_grid.size() * ns;
  const std::size_t trials = spec.trials;
  std::vector<char> ok(cells * trials);

  parallel_for(cells * trials, [&](std::size_t task) {
    const std::size_t cell = task / trials, trial = task % trials;
    const int k = spec.k_grid[cell / ns];
    const double sigma = spec.noise_grid[cell % ns];
    const std::uint64_t seed = derive_seed(spec.master_seed, cell, trial);
    const Support truth = synthesize_support(k, spec.dimension, {0.0, 1.0}, seed);
    const DifferenceSet noisy = add_difference_noise(difference_set(truth), sigma, mix64(seed));
    const Support estimate = recover_support(noisy, k, spec.recovery, spec.dimension);
    ok[task] = index_based_error(estimate, truth, sigma) == 0;
  }, spec.threads);

  Table table{{"K", "sigma", "success", "theory"}, {}};
  for (std::size_t cell = 0; cell < cells; ++cell) {
    const int k = spec.k_grid[cell / ns];
    const double sigma = spec.noise_grid[cell % ns];
    double hits = 0;
    for (std::size_t t = 0; t < trials; ++t) hits += ok[cell * trials + t];
    const double theory = k >= 3 ? success_probability(k, sigma, spec.dimension) : 1.0;
    table.add_row({std::int64_t{k}, sigma, hits / trials, theory});
  }
  return table;
}

Table run_improvements_ablation(const ExperimentSpec& spec) {
  const auto configs = improvement_configs();
  const std::size_t nc = configs.size();
  const std::size_t ns = spec.noise_grid.size();
  const std::size_t trials = spec.trials;
  const int k = spec.k_grid.front();
  struct Outcome {
    double l2;
    int index;
  };
  std::vector<Outcome> outcomes(ns * trials * nc);

  parallel_for(ns * trials, [&](std::size_t task) {
    const std::size_t cell = task / trials, trial = task % trials;
    const double sigma = spec.noise_grid[cell];
    const std::uint64_t seed = derive_seed(spec.master_seed, cell, trial);
    const Support truth = synthesize_support(k, spec.dimension, {0.0, 1.0}, seed);
    const DifferenceSet noisy = add_difference_noise(difference_set(truth), sigma, mix64(seed));
    for (std::size_t c = 0; c < nc; ++c) {
      const Support estimate = recover_support(noisy, k, configs[c].second, spec.dimension);
      outcomes[task * nc + c] = {l2_norm_error(truth, estimate),
                                 index_based_error(estimate, truth, sigma)};
    }
  }, spec.threads);

  Table table{{"config", "sigma", "l2_error", "index_error", "success"}, {}};
  for (std::size_t c = 0; c < nc; ++c) {
    for (std::size_t s = 0; s < ns; ++s) {
      double l2 = 0.0, index = 0.0;
      for (std::size_t t = 0; t < trials; ++t) {
        const Outcome& o = outcomes[(s * trials + t) * nc + c];
        l2 += o.l2;
        index += o.index;
      }
      table.add_row({configs[c].first, spec.noise_grid[s], l2 / trials, index / trials,
                     1.0 - index / trials});
    }
  }
  return table;
}

Table run_star_experiment(const ExperimentSpec& spec) {
  const std::size_t g = spec.star_grid;
  const std::size_t trials = spec.trials;
  const double sigma = spec.noise_grid.front();
  std::vector<double> l2(g * g * trials);
  std::vector<int> index(g * g * trials);

  parallel_for(g * g * trials, [&](std::size_t task) {
    const std::size_t cell = task / trials, trial = task % trials;
    const double x3 = star_node(cell / g, g);
    const double x4 = star_node(cell % g, g);
    const Support truth = star_support(x3, x4);
    const DifferenceSet noisy = add_difference_noise(
        difference_set(truth), sigma, derive_seed(spec.master_seed, cell, trial));
    const Support estimate = recover_support(noisy, 4, spec.recovery, 1);
    l2[task] = l2_norm_error(truth, estimate);
    index[task] = index_based_error(estimate, truth, sigma);
  }, spec.threads);

  Table table{{"x3", "x4", "index_error", "l2_error"}, {}};
  for (std::size_t cell = 0; cell < g * g; ++cell) {
    double sum_l2 = 0.0, sum_index = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      sum_l2 += l2[cell * trials + t];
      sum_index += index[cell * trials + t];
    }
    table.add_row({star_node(cell / g, g), star_node(cell % g, g), sum_index / trials,
                   sum_l2 / trials});
  }
  return table;
}

Table run_caching_benchmark(const ExperimentSpec& spec) {
  using Clock = std::chrono::steady_clock;
  RecoveryConfig uncached = spec.recovery, cached = spec.recovery;
  uncached.use_caching = false;
  cached.use_caching = true;
  cached.denoise_partials = uncached.denoise_partials = false;

  Table table{{"K", "uncached_s", "cached_s", "identical"}, {}};
  for (std::size_t ki = 0; ki < spec.k_grid.size(); ++ki) {
    const int k = spec.k_grid[ki];
    std::vector<DifferenceSet> instances;
    for (int i = 0; i < spec.timing_instances; ++i)
      instances.push_back(difference_set(
          synthesize_support(k, spec.dimension, {0.0, 1.0}, derive_seed(spec.master_seed, ki, i))));

    bool identical = true;
    for (const DifferenceSet& diffs : instances)
      identical = identical && recover_support(diffs, k, uncached, spec.dimension).points() ==
                                   recover_support(diffs, k, cached, spec.dimension).points();

    std::vector<double> t_plain, t_cached;
    for (int rep = 0; rep < spec.timing_repetitions; ++rep) {
      const DifferenceSet& diffs = instances.front();
      auto t0 = Clock::now();
      const Support a = recover_support(diffs, k, uncached, spec.dimension);
      auto t1 = Clock::now();
      const Support b = recover_support(diffs, k, cached, spec.dimension);
      auto t2 = Clock::now();
      t_plain.push_back(std::chrono::duration<double>(t1 - t0).count());
      t_cached.push_back(std::chrono::duration<double>(t2 - t1).count());
      identical = identical && a.points() == b.points();
    }
    table.add_row({std::int64_t{k}, median(t_plain), median(t_cached),
                   std::int64_t{identical ? 1 : 0}});
  }
  return table;
}

Table run_cf_comparison(const ExperimentSpec& spec) {
  const std::size_t ns = spec.noise_grid.size();
  const std::size_t trials = spec.trials;
  const int k = spec.k_grid.front();
  const double extent = 1.0;
  const double step = padded_sampling_step(extent, spec.pad);
  const double period = spec.pad * extent;
  const double nan = std::nan("");
  struct Outcome {
    double fri = 0.0;
    double cf = 0.0;
  };
  std::vector<Outcome> outcomes(ns * trials);

  PipelineOptions options;
  options.recovery = spec.recovery;
  options.recover_amplitudes = false;
  options.refine = spec.refine;

  parallel_for(ns * trials, [&](std::size_t task) {
    const std::size_t cell = task / trials, trial = task % trials;
    const Support truth = synthesize_support(k, 1, {0.0, extent},
                                             derive_seed(spec.master_seed, 0, trial));
    const AcfAtoms atoms = build_acf_atoms(truth, Amplitudes::Ones(k));
    const FourierSamples clean =
        acf_fourier_samples(atoms, KernelDescriptor{}, step, spec.fourier_max_index);
    const std::uint64_t seed = derive_seed(spec.master_seed, cell + 1, trial);
    const FourierSamples noisy = add_fourier_noise(clean, spec.noise_grid[cell], seed);

    Outcome& out = outcomes[task];
    try {
      out.fri = l2_norm_error(truth, reconstruct(noisy, k, options).support);
    } catch (const Error&) {
      out.fri = nan;
    }
    FlipConfig flip = spec.flip;
    flip.seed = mix64(seed);
    const FlipResult cf = charge_flip(magnitudes_from_acf_samples(noisy, flip.grid_size), flip);
    try {
      out.cf = l2_norm_error(truth, extract_support_from_grid(cf.signal, k, period));
    } catch (const Error&) {
      out.cf = nan;
    }
  }, spec.threads);

  Table table{{"snr_db", "method", "l2_error", "success_rate", "failures"}, {}};
  for (std::size_t s = 0; s < ns; ++s) {
    for (const char* method : {"fri", "cf"}) {
      std::vector<double> finite;
      std::int64_t failures = 0, successes = 0;
      for (std::size_t t = 0; t < trials; ++t) {
        const Outcome& o = outcomes[s * trials + t];
        const double e = method[0] == 'f' ? o.fri : o.cf;
        if (std::isnan(e)) {
          ++failures;
          continue;
        }
        finite.push_back(e);
        successes += e <= spec.success_threshold;
      }
      table.add_row({spec.noise_grid[s], std::string(method), mean(finite),
                     static_cast<double>(successes) / trials, failures});
    }
  }
  return table;
}

Table run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.id == "phase-transition") return run_phase_transition(spec);
  if (spec.id == "ablation") return run_improvements_ablation(spec);
  if (spec.id == "star") return run_star_experiment(spec);
  if (spec.id == "caching") return run_caching_benchmark(spec);
  return run_cf_comparison(spec);
}

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InvalidArgument("fit_power_law: need at least two matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {(sy - slope * sx) / n, slope};
}

double crossing_sigma(const std::vector<double>& sigmas, const std::vector<double>& rates,
                      double level) {
  for (std::size_t i = 1; i < sigmas.size(); ++i) {
    if (rates[i - 1] >= level && rates[i] < level) {
      const double a = std::log(sigmas[i - 1]), b = std::log(sigmas[i]);
      const double f = (rates[i - 1] - level) / (rates[i - 1] - rates[i]);
      return std::exp(a + f * (b - a));
    }
  }
  return std::nan("");
}

double star_locus_distance(double x3, double x4) {
  return std::min({std::abs(x4 - x3), std::abs(x4 - x3 - 0.5), std::abs(x4 - x3 + 0.5),
                   std::abs(x4 - (1.0 - 2.0 * x3)), std::abs(x3 - (1.0 - 2.0 * x4))});
}

json summarize(const ExperimentSpec& spec, const Table& table) {
  json s = json::object();
  if (spec.id == "phase-transition") {
    for (int k : spec.k_grid) {
      std::vector<double> sig, rate;
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (table.number(r, "K") != k || table.number(r, "sigma") <= 0.0) continue;
        sig.push_back(table.number(r, "sigma"));
        rate.push_back(table.number(r, "success"));
      }
      const double empirical = crossing_sigma(sig, rate);
      json entry{{"theory_crossing", k >= 3 ? theoretical_crossing(k, 0.5, spec.dimension) : 0.0}};
      entry["empirical_crossing"] = std::isnan(empirical) ? json(nullptr) : json(empirical);
      s[std::to_string(k)] = entry;
    }
  } else if (spec.id == "caching") {
    std::vector<double> ks, plain, cached;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      ks.push_back(table.number(r, "K"));
      plain.push_back(table.number(r, "uncached_s"));
      cached.push_back(table.number(r, "cached_s"));
    }
    if (ks.size() >= 2) {
      s["uncached_exponent"] = fit_power_law(ks, plain).exponent;
      s["cached_exponent"] = fit_power_law(ks, cached).exponent;
    }
  } else if (spec.id == "star") {
    const double tol = 0.25 / (spec.star_grid + 1);
    double on = 0, off = 0;
    int n_on = 0, n_off = 0;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const double e = table.number(r, "index_error");
      if (star_locus_distance(table.number(r, "x3"), table.number(r, "x4")) <= tol) {
        on += e;
        ++n_on;
      } else {
        off += e;
        ++n_off;
      }
    }
    s["on_locus_index_error"] = n_on ? on / n_on : 0.0;
    s["off_locus_index_error"] = n_off ? off / n_off : 0.0;
  }
  return s;
}

}  // namespace spr::harness
