#pragma once

#include <string>
#include <utility>
#include <vector>

#include "reverbmatch/stft.hpp"

namespace reverbmatch {

// Affine map from raw subband-decay estimates to calibrated RT60 seconds.
struct Calibration {
  double slope = 1.0;
  double intercept = 0.0;  // seconds
  int n_pairs = 0;

  std::string to_json() const;
  static Calibration from_json(const std::string& text);
};

// One detected free-decay run in a single band.
struct DecayRegion {
  int band = 0;
  int start_frame = 0;
  int end_frame = 0;  // inclusive
  double slope_db_per_s = 0.0;
};

// Detection thresholds for the subband decay scan.
struct BlindRt60Config {
  int min_region_frames = 8;
  double ripple_db = 1.0;           // tolerated per-frame rise inside a run
  double min_region_drop_db = 12.0; // net fall a run must span to count
  double band_low_hz = 300.0;
  double band_high_hz = 4000.0;
  // Each band's trajectory is the power averaged over this many neighbour
  // bins on each side and a short boxcar in time; single-bin magnitudes
  // fluctuate by several dB frame to frame and would fake decay runs.
  int freq_smooth_bins = 2;
  int time_smooth_frames = 3;
};

// All qualifying decay regions of the magnitude-squared spectrogram in dB,
// restricted to bands covering [band_low_hz, band_high_hz].
std::vector<DecayRegion> find_decay_regions(
    const ComplexSpectrogram& spec, const BlindRt60Config& opts = {});

// Median over regions of -60 / slope. Throws "no free decay detected" when
// the scan finds nothing.
double estimate_rt60_raw(const std::vector<double>& signal,
                         const StftConfig& config,
                         const BlindRt60Config& opts = {});

// Least-squares fit of true = slope * raw + intercept over labelled
// reverberant signals; pairs whose raw estimate fails are skipped.
Calibration calibrate(
    const std::vector<std::pair<std::vector<double>, double>>& pairs,
    const StftConfig& config, const BlindRt60Config& opts = {});

// Calibrated estimate, clamped to [0.05, 3.0] seconds.
double estimate_rt60(const std::vector<double>& signal,
                     const StftConfig& config, const Calibration& cal,
                     const BlindRt60Config& opts = {});

}  // namespace reverbmatch
