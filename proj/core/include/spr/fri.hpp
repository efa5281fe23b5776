#pragma once

// Recovery of a continuous sparse autocorrelation from its Fourier samples
// with an annihilating filter (Prony's method). One-dimensional only.

#include <complex>
#include <vector>

#include "spr/model.hpp"

namespace spr {

// Taps H_0..H_N of a filter annihilating a sum of N exponentials.
// H_0 is normalized to 1.
struct AnnihilatingFilter {
  std::vector<std::complex<double>> coeffs;

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
};

// Roots u_n = exp(-j * step * t_n) of the filter's z-transform.
struct RootSet {
  std::vector<std::complex<double>> roots;
};

// Total-least-squares annihilating filter: the unit-norm h minimizing
// ||T h|| over the Toeplitz matrix of in-band samples, rescaled so h_0 = 1.
// Needs at least 2 * order + 1 in-band samples.
AnnihilatingFilter fit_annihilating_filter(const FourierSamples& samples, int order);

// ||A * H|| / ||A|| over the valid convolution range of in-band samples.
double annihilation_residual(const FourierSamples& samples, const AnnihilatingFilter& filter);

// Roots of z^N H(z) from the eigenvalues of its companion matrix.
RootSet filter_roots(const AnnihilatingFilter& filter);

// Locations t_n = -arg(u_n) / step after projecting each root onto the unit
// circle. The output is symmetrized: the smallest-magnitude location of an
// odd-sized set is snapped to 0 and the rest are paired by rank with their
// opposite-sign partner, each pair replaced by +-(hi - lo) / 2. Sorted
// ascending. Locations with |t| >= pi / step alias and cannot be detected.
std::vector<double> roots_to_locations(const RootSet& roots, double step);

// Least-squares weights of A_m = sum_n alpha_n exp(-j m step t_n) over the
// in-band samples. Imaginary parts are dropped.
std::vector<double> estimate_atom_weights(const std::vector<double>& locations,
                                          const FourierSamples& samples);

// Roots of a sum of `order` exponentials from the shift invariance of the
// signal subspace of a square Hankel matrix of in-band samples (ESPRIT with
// a least squares shift equation). The minimal order-N filter only sees N + 1
// consecutive samples per equation and loses clustered roots in double
// precision; the Hankel subspace uses about half the samples per dimension.
RootSet subspace_roots(const FourierSamples& samples, int order);

enum class RootMethod { kSubspace, kAnnihilatingFilter };

// Full super-resolution with model order K^2 - K + 1. The result is centrally
// symmetric: mirrored atoms get the mean of their two weight estimates.
AcfAtoms superresolve_acf(const FourierSamples& samples, int k,
                          RootMethod method = RootMethod::kSubspace);

}  // namespace spr
