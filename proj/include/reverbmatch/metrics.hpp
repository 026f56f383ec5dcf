#pragma once

#include <vector>

#include "reverbmatch/stft.hpp"

namespace reverbmatch {

struct MetricReport {
  double sisdr_db = 0.0;
  double lsd_db = 0.0;
};

// Scale-invariant signal-to-distortion ratio: the estimate is projected onto
// the reference (alpha = <est, ref> / ||ref||^2) and the ratio
// 10 log10(||alpha ref||^2 / ||est - alpha ref||^2) is capped at +-100 dB.
// Inputs are truncated to the shorter length; a silent reference throws.
double sisdr(const std::vector<double>& reference,
             const std::vector<double>& estimate);

// RMS over frames of the per-frame RMS difference of
// 20 log10(|STFT| + 1e-8); symmetric in its arguments. Lengths may differ
// by at most one hop.
double log_spectral_distance(const std::vector<double>& reference,
                             const std::vector<double>& estimate,
                             const StftConfig& config);

MetricReport evaluate(const std::vector<double>& reference,
                      const std::vector<double>& estimate,
                      const StftConfig& config);

}  // namespace reverbmatch
