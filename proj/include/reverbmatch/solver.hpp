#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "reverbmatch/rir.hpp"
#include "reverbmatch/rt60_blind.hpp"
#include "reverbmatch/stft.hpp"

namespace reverbmatch {

struct SolverConfig {
  int steps = 500;
  double step_size = 1e-2;
  int band_radius = 4;
  std::uint64_t seed = 0;
  int log_every = 1;
  bool adaptive = true;    // first/second-moment scaling; false = plain descent
  bool freeze_rir = false; // reuse the step-0 noise draw (debugging)
};

struct SolveReport {
  std::vector<double> loss_trace;
  double rt60_used = 0.0;
  double final_loss = 0.0;

  std::string to_json() const;
};

struct GivenRt60 {
  double seconds = 0.0;
};
struct OracleRir {
  Rir rir;
};
struct BlindRt60 {
  Calibration calibration;
};
using Rt60Source = std::variant<GivenRt60, OracleRir, BlindRt60>;

struct DereverbResult {
  std::vector<double> dry_estimate;
  SolveReport report;
};

// Gradient descent on the dry short-time coefficients under the
// reverberation-matching objective. Each step synthesizes a fresh noise
// draw of the model response, rebuilds its cross-band tensor, and takes an
// adaptive step along the pulled-back gradient. Deterministic given
// (signal, config, seeds); the estimate keeps the input's length.
DereverbResult dereverb(const std::vector<double>& signal,
                        const Rt60Source& rt60_source,
                        const StftConfig& stft_config,
                        const SolverConfig& solver_config);

struct GeneratedPair {
  std::vector<double> reverberant;
  std::size_t dry_index = 0;
  double rt60 = 0.0;
};

// Synthesizes (reverberant, dry, rt60) triples: rt60 drawn uniformly from
// rt60_range, one aligned synthetic response per item, dry signals used
// round-robin. Deterministic given seed.
std::vector<GeneratedPair> make_pairs(
    const std::vector<std::vector<double>>& dry_signals,
    std::pair<double, double> rt60_range, int count, std::uint64_t seed);

}  // namespace reverbmatch
