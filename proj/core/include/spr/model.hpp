#pragma once

// Sparse signal data model and the synthetic measurement pipeline:
// support -> autocorrelation atoms -> low-pass kernel -> Fourier samples,
// plus the two noise models (on differences and on Fourier samples).

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "spr/point_set.hpp"

namespace spr {

// Two differences closer than this are treated as the same location.
inline constexpr double kCollisionTolerance = 1e-9;

// K point locations in D dimensions. K >= 2 and all coordinates finite.
// Distinctness is not enforced here: synthetic experiments deliberately
// place coincident points. Use has_distinct_points() where it matters.
class Support {
 public:
  explicit Support(PointSet points);

  const PointSet& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  int dimension() const { return points_.dimension(); }
  ConstPoint operator[](std::size_t i) const { return points_[i]; }

  bool has_distinct_points(double tolerance = kCollisionTolerance) const;

 private:
  PointSet points_;
};

// Strictly positive, finite amplitudes aligned with Support::points().
class Amplitudes {
 public:
  explicit Amplitudes(std::vector<double> values);
  static Amplitudes Ones(std::size_t k) { return Amplitudes(std::vector<double>(k, 1.0)); }

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

// Atoms of the sparse autocorrelation: locations x_k - x_l with weights
// c_k c_l. Locations are kept in lexicographic order.
struct AcfAtoms {
  PointSet locations;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

// Unlabeled pairwise differences sorted ascending by Euclidean norm.
// Holds N = K^2 - K + 1 elements for some K >= 2.
class DifferenceSet {
 public:
  // Sorts `diffs` by norm (stable) and validates the cardinality.
  explicit DifferenceSet(PointSet diffs, std::optional<double> sigma_hint = std::nullopt);

  const PointSet& diffs() const { return diffs_; }
  std::size_t size() const { return diffs_.size(); }
  int dimension() const { return diffs_.dimension(); }
  ConstPoint operator[](std::size_t i) const { return diffs_[i]; }

  // The K with K^2 - K + 1 == size().
  int support_size() const;

  // Noise scale used to generate the set. Bookkeeping only.
  std::optional<double> sigma_hint() const { return sigma_hint_; }

 private:
  PointSet diffs_;
  std::optional<double> sigma_hint_;
};

// Returns K if n == K^2 - K + 1 for an integer K >= 2, otherwise nullopt.
std::optional<int> support_size_for(std::size_t n);

// Ideal low-pass kernel. |Phi(w)|^2 is 1 for |w| < bandwidth, 0 otherwise.
struct KernelDescriptor {
  enum class Kind { kIdealLowPass };
  Kind kind = Kind::kIdealLowPass;
  double bandwidth = std::numeric_limits<double>::infinity();

  double squared_response(double omega) const {
    return std::abs(omega) < bandwidth ? 1.0 : 0.0;
  }
};

// Samples A_m = A(m * step) for m = -M..M of the autocorrelation spectrum.
struct FourierSamples {
  std::vector<std::complex<double>> values;  // index m + M
  double sampling_step = 1.0;
  KernelDescriptor kernel;

  int max_index() const { return static_cast<int>(values.size() / 2); }
  const std::complex<double>& at(int m) const { return values[m + max_index()]; }
  std::complex<double>& at(int m) { return values[m + max_index()]; }

  // Largest M' such that every |m| <= M' is inside the kernel passband.
  int in_band_max_index() const;
};

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// K points drawn i.i.d. uniform over bounds^D. Supports whose difference
// set has a collision are rejected and redrawn. Deterministic in `seed`.
Support synthesize_support(int k, int dimension, Interval bounds, std::uint64_t seed);

// All K^2 - K off-origin atoms plus a single origin atom of weight
// sum c_k^2. Throws CollisionError when two differences coincide.
AcfAtoms build_acf_atoms(const Support& support, const Amplitudes& amplitudes);

// The full difference multiset {x_k - x_l : k != l} plus one origin.
DifferenceSet difference_set(const Support& support);
// The atom locations of an autocorrelation, as a difference set.
DifferenceSet difference_set(const AcfAtoms& atoms);

// Samples of the autocorrelation spectrum for m = -max_index..max_index.
// Atoms must be one-dimensional.
FourierSamples acf_fourier_samples(const AcfAtoms& atoms, const KernelDescriptor& kernel,
                                   double step, int max_index);

// Adds i.i.d. N(0, sigma^2) noise to every coordinate of every element and
// re-sorts by norm.
DifferenceSet add_difference_noise(const DifferenceSet& clean, double sigma,
                                   std::uint64_t seed);

// Adds conjugate-mirrored complex white noise such that signal power over
// noise power equals `snr_db`. An infinite `snr_db` returns the input.
FourierSamples add_fourier_noise(const FourierSamples& samples, double snr_db,
                                 std::uint64_t seed);

// Mean of |A_m|^2 over all stored samples.
double mean_power(const FourierSamples& samples);

// True if two locations lie within Euclidean distance `tolerance`.
bool has_collision(const PointSet& locations, double tolerance = kCollisionTolerance);

}  // namespace spr
