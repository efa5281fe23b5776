#include "spr/pipeline.hpp"

#include <numbers>

#include "spr/errors.hpp"
#include "spr/fri.hpp"

namespace spr {

double padded_sampling_step(double extent, double pad) {
  if (!(extent > 0.0) || !(pad >= 1.0))
    throw InvalidArgument("padded_sampling_step: need extent > 0 and pad >= 1");
  return 2.0 * std::numbers::pi / (pad * extent);
}

Reconstruction reconstruct(const FourierSamples& samples, int k, const PipelineOptions& options) {
  if (options.refine) {
    SignalFit fit = refine_reconstruction(samples, k, options.refine_config);
    std::optional<Amplitudes> amplitudes;
    if (options.recover_amplitudes) amplitudes = Amplitudes(std::move(fit.amplitudes));
    return {superresolve_acf(samples, k), std::move(fit.support), std::move(amplitudes)};
  }
  AcfAtoms acf = superresolve_acf(samples, k);
  Support support = recover_support(difference_set(acf), k, options.recovery, 1);
  std::optional<Amplitudes> amplitudes;
  if (options.recover_amplitudes)
    amplitudes = recover_amplitudes(
        assemble_weight_matrix(acf, support, options.labeling_tolerance));
  if (options.polish && amplitudes) {
    SignalFit fit = fit_signal_model(samples, support, amplitudes->values());
    support = std::move(fit.support);
    amplitudes = Amplitudes(std::move(fit.amplitudes));
  }
  return {std::move(acf), std::move(support), std::move(amplitudes)};
}

}  // namespace spr
