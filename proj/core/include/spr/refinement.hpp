#pragma once

// Maximum-likelihood polish of a 1D reconstruction against the measured
// autocorrelation spectrum. The combinatorial stages give a starting point;
// a Levenberg-Marquardt fit of locations and amplitudes to the samples then
// removes the bias left by the super-resolved atoms. Clustered points, which
// the subspace step merges, are handled by extra starting hypotheses.

#include <vector>

#include "spr/model.hpp"
#include "spr/support_recovery.hpp"

namespace spr {

struct SignalFit {
  Support support;          // sorted, first point at 0
  std::vector<double> amplitudes;
  double residual;          // weighted l2 misfit over m = 0..M
};

// Fits K locations and amplitudes starting from `support` and `amplitudes`.
// 1D only.
SignalFit fit_signal_model(const FourierSamples& samples, const Support& support,
                           const std::vector<double>& amplitudes);

struct RefineConfig {
  // Offset used to split a point when a K-1 point solution seeds a K point fit.
  double split = 3e-3;
  // Passes of single point replacement by super-resolved atom locations.
  int swap_sweeps = 4;
  // Pair replacements fitted per sweep after screening; 0 disables them.
  int pair_candidates = 8;
  // Relative residual drop required to accept a replacement.
  double min_improvement = 1e-3;
};

// Best fit over starting points from the K and K-1 point pipelines followed
// by a greedy search over single and paired point replacements.
SignalFit refine_reconstruction(const FourierSamples& samples, int k,
                                const RefineConfig& config = {});

}  // namespace spr
