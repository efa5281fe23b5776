#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "spr/errors.hpp"
#include "spr/model.hpp"
#include "spr/random.hpp"

namespace spr {
namespace {

double weight_at(const AcfAtoms& atoms, double location) {
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (std::abs(atoms.locations[i][0] - location) < 1e-12) return atoms.weights[i];
  ADD_FAILURE() << "no atom at " << location;
  return std::nan("");
}

TEST(SynthesizeSupport, TwoPointsInRange) {
  const Support s = synthesize_support(2, 1, {0.0, 1.0}, 7);
  ASSERT_EQ(s.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_GE(s[i][0], 0.0);
    EXPECT_LE(s[i][0], 1.0);
  }
  EXPECT_NE(s[0][0], s[1][0]);
}

TEST(SynthesizeSupport, DeterministicInSeed) {
  const Support a = synthesize_support(6, 1, {0.0, 1.0}, 99);
  const Support b = synthesize_support(6, 1, {0.0, 1.0}, 99);
  EXPECT_EQ(a.points(), b.points());
  EXPECT_NE(a.points(), synthesize_support(6, 1, {0.0, 1.0}, 100).points());
}

TEST(SynthesizeSupport, TwoDimensionalPointsAreDistinct) {
  const Support s = synthesize_support(5, 2, {0.0, 1.0}, 3);
  ASSERT_EQ(s.size(), 5u);
  EXPECT_EQ(s.dimension(), 2);
  double closest = INFINITY;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) closest = std::min(closest, squared_distance(s[i], s[j]));
  EXPECT_GT(closest, 0.0);
}

TEST(SynthesizeSupport, RejectsBadArguments) {
  EXPECT_THROW(synthesize_support(1, 1, {0.0, 1.0}, 0), InvalidArgument);
  EXPECT_THROW(synthesize_support(3, 1, {1.0, 0.0}, 0), InvalidArgument);
}

TEST(BuildAcfAtoms, TwoPointsByHand) {
  const Support s(PointSet::FromScalars({0.0, 1.0}));
  const AcfAtoms a = build_acf_atoms(s, Amplitudes::Ones(2));
  ASSERT_EQ(a.size(), 3u);
  EXPECT_DOUBLE_EQ(weight_at(a, -1.0), 1.0);
  EXPECT_DOUBLE_EQ(weight_at(a, 0.0), 2.0);
  EXPECT_DOUBLE_EQ(weight_at(a, 1.0), 1.0);
}

TEST(BuildAcfAtoms, ThreePointsAgainstPairEnumeration) {
  const std::vector<double> x{0.0, 0.2, 0.5}, c{1.0, 2.0, 3.0};
  const AcfAtoms a = build_acf_atoms(Support(PointSet::FromScalars(x)), Amplitudes(c));
  ASSERT_EQ(a.size(), 7u);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) EXPECT_DOUBLE_EQ(weight_at(a, x[i] - x[j]), c[i] * c[j]);
  EXPECT_DOUBLE_EQ(weight_at(a, 0.3), 6.0);
  EXPECT_DOUBLE_EQ(weight_at(a, 0.0), 14.0);
}

TEST(BuildAcfAtoms, CentrallySymmetricWithOneOrigin) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Support s = synthesize_support(6, 1, {0.0, 1.0}, seed);
    const AcfAtoms a = build_acf_atoms(s, Amplitudes::Ones(6));
    ASSERT_EQ(a.size(), 31u);
    int origins = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      origins += a.locations[i][0] == 0.0;
      EXPECT_DOUBLE_EQ(weight_at(a, -a.locations[i][0]), a.weights[i]);
    }
    EXPECT_EQ(origins, 1);
  }
}

TEST(BuildAcfAtoms, ShiftAndReflectionInvariant) {
  const Support s = synthesize_support(5, 1, {0.0, 1.0}, 11);
  const Amplitudes c({1.0, 0.5, 2.0, 1.5, 0.7});
  const AcfAtoms ref = build_acf_atoms(s, c);

  PointSet shifted = s.points();
  const double shift[] = {0.3125};
  shifted.translate(shift);
  PointSet reflected = s.points();
  reflected.negate();

  for (const PointSet& p : {shifted, reflected}) {
    const AcfAtoms other = build_acf_atoms(Support(p), c);
    ASSERT_EQ(other.size(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      EXPECT_NEAR(other.locations[i][0], ref.locations[i][0], 1e-12);
      EXPECT_DOUBLE_EQ(other.weights[i], ref.weights[i]);
    }
  }
}

TEST(BuildAcfAtoms, CollisionThrows) {
  // 0.5 - 0 == 1 - 0.5
  const Support s(PointSet::FromScalars({0.0, 0.5, 1.0}));
  EXPECT_THROW(build_acf_atoms(s, Amplitudes::Ones(3)), CollisionError);
}

TEST(DifferenceSet, SortedWithValidCardinality) {
  const DifferenceSet d = difference_set(synthesize_support(4, 2, {0.0, 1.0}, 5));
  ASSERT_EQ(d.size(), 13u);
  EXPECT_EQ(d.support_size(), 4);
  for (std::size_t i = 1; i < d.size(); ++i)
    EXPECT_LE(d.diffs().squared_norm(i - 1), d.diffs().squared_norm(i));
  EXPECT_THROW(DifferenceSet(PointSet::FromScalars({0.0, 1.0})), InvalidArgument);
  EXPECT_EQ(support_size_for(21), 5);
  EXPECT_FALSE(support_size_for(20).has_value());
}

TEST(AcfFourierSamples, ConstantSpectrumForOriginAtom) {
  const AcfAtoms a{PointSet::FromScalars({0.0}), {2.5}};
  const FourierSamples s = acf_fourier_samples(a, {}, 0.7, 10);
  for (int m = -10; m <= 10; ++m) EXPECT_NEAR(std::abs(s.at(m) - 2.5), 0.0, 1e-15);
}

TEST(AcfFourierSamples, TwoPointsMatchCosineFormula) {
  const double t = 0.37, step = std::numbers::pi;
  const FourierSamples s = acf_fourier_samples(
      build_acf_atoms(Support(PointSet::FromScalars({0.0, t})), Amplitudes::Ones(2)), {}, step, 20);
  for (int m = -20; m <= 20; ++m) {
    EXPECT_NEAR(s.at(m).real(), 2.0 + 2.0 * std::cos(m * step * t), 1e-12);
    EXPECT_NEAR(s.at(m).imag(), 0.0, 1e-12);
  }
}

TEST(AcfFourierSamples, KernelZeroesOutOfBand) {
  const AcfAtoms a{PointSet::FromScalars({0.0}), {1.0}};
  KernelDescriptor k;
  k.bandwidth = 5.5;
  const FourierSamples s = acf_fourier_samples(a, k, 1.0, 8);
  EXPECT_EQ(s.in_band_max_index(), 5);
  for (int m = -8; m <= 8; ++m) EXPECT_EQ(s.at(m).real(), std::abs(m) <= 5 ? 1.0 : 0.0);
}

TEST(AcfFourierSamples, RealNonnegativeAndConjugateSymmetric) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Support sup = synthesize_support(5, 1, {0.0, 1.0}, seed);
    const FourierSamples s =
        acf_fourier_samples(build_acf_atoms(sup, Amplitudes::Ones(5)), {}, std::numbers::pi, 100);
    double scale = 0.0;
    for (const auto& v : s.values) scale = std::max(scale, std::abs(v));
    for (int m = 0; m <= 100; ++m) {
      EXPECT_EQ(s.at(-m), std::conj(s.at(m)));
      EXPECT_LE(std::abs(s.at(m).imag()), 1e-10 * scale);
      EXPECT_GE(s.at(m).real(), -1e-10 * scale);
    }
  }
}

TEST(AddDifferenceNoise, ZeroSigmaIsIdentity) {
  const DifferenceSet d = difference_set(synthesize_support(5, 1, {0.0, 1.0}, 1));
  EXPECT_EQ(add_difference_noise(d, 0.0, 42).diffs(), d.diffs());
}

TEST(AddDifferenceNoise, EmpiricalVarianceAndOrdering) {
  // Norms 1 apart: noise at sigma = 0.01 never reorders, so element i of the
  // output is element i of the input plus noise.
  std::vector<double> v(21);
  for (int i = 0; i < 21; ++i) v[i] = i;
  const DifferenceSet d{PointSet::FromScalars(v)};
  const double sigma = 0.01;
  const int n = 200;
  double sum_sq = 0.0;
  for (int s = 0; s < n; ++s) {
    const DifferenceSet noisy = add_difference_noise(d, sigma, derive_seed(9, s));
    for (std::size_t i = 1; i < noisy.size(); ++i)
      ASSERT_LE(noisy.diffs().squared_norm(i - 1), noisy.diffs().squared_norm(i));
    for (std::size_t i = 1; i < noisy.size(); ++i) sum_sq += std::pow(noisy[i][0] - d[i][0], 2);
    sum_sq += std::pow(std::abs(noisy[0][0]), 2);
  }
  // 4200 squared N(0, sigma^2) draws: relative sd of the estimate ~2.2%.
  EXPECT_NEAR(sum_sq / (n * 21.0), sigma * sigma, 0.1 * sigma * sigma);
}

TEST(AddFourierNoise, InfiniteSnrIsIdentity) {
  const FourierSamples s = acf_fourier_samples(
      build_acf_atoms(synthesize_support(3, 1, {0.0, 1.0}, 2), Amplitudes::Ones(3)), {}, 3.0, 30);
  EXPECT_EQ(add_fourier_noise(s, INFINITY, 1).values, s.values);
}

TEST(AddFourierNoise, EmpiricalSnrAndSymmetry) {
  const FourierSamples s = acf_fourier_samples(
      build_acf_atoms(synthesize_support(5, 1, {0.0, 1.0}, 2), Amplitudes::Ones(5)), {},
      std::numbers::pi, 100);
  const double p_signal = mean_power(s);
  for (double snr : {0.0, 10.0, 30.0}) {
    double p_noise = 0.0;
    for (int t = 0; t < 100; ++t) {
      const FourierSamples n = add_fourier_noise(s, snr, derive_seed(3, t));
      for (int m = 0; m <= 100; ++m) ASSERT_EQ(n.at(-m), std::conj(n.at(m)));
      for (std::size_t i = 0; i < s.values.size(); ++i) p_noise += std::norm(n.values[i] - s.values[i]);
    }
    p_noise /= 100.0 * s.values.size();
    EXPECT_NEAR(10.0 * std::log10(p_signal / p_noise), snr, 0.5);
  }
}

}  // namespace
}  // namespace spr
