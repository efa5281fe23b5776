#pragma once

// End-to-end reconstruction: Fourier samples of the autocorrelation ->
// super-resolved autocorrelation -> support -> amplitudes.

#include <optional>

#include "spr/amplitudes.hpp"
#include "spr/model.hpp"
#include "spr/refinement.hpp"
#include "spr/support_recovery.hpp"

namespace spr {

struct PipelineOptions {
  RecoveryConfig recovery;
  bool recover_amplitudes = true;
  double labeling_tolerance = kDefaultLabelingTolerance;
  // 1D with amplitudes: finish with a local fit of the signal model started at
  // the combinatorial estimate. Weights of nearly coincident autocorrelation
  // atoms are poorly determined; the K-point model is not.
  bool polish = true;
  // 1D only: replace the combinatorial estimate by the best model fit.
  bool refine = false;
  RefineConfig refine_config;
};

struct Reconstruction {
  AcfAtoms acf;
  Support support;
  std::optional<Amplitudes> amplitudes;
};

// Sampling step 2 pi / (pad * extent). With pad >= 2 the autocorrelation of a
// support of the given extent does not wrap around.
double padded_sampling_step(double extent, double pad = 2.0);

Reconstruction reconstruct(const FourierSamples& samples, int k,
                           const PipelineOptions& options = {});

}  // namespace spr
