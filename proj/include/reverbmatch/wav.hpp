#pragma once

#include <string>
#include <vector>

namespace reverbmatch {

struct WavBuffer {
  std::vector<double> samples;
  double sample_rate = 16000.0;
};

struct WavReadOptions {
  bool resample = false;      // resample to target_rate instead of rejecting
  bool mixdown = false;       // average channels instead of rejecting
  double target_rate = 16000.0;
};

enum class WavFormat {
  kFloat32,
  kPcm16,
};

// Reads a PCM16 or float32 RIFF/WAVE file. Multichannel input requires
// mixdown; sample rates other than target_rate require resample.
WavBuffer read_wav(const std::string& path, const WavReadOptions& opts = {});

void write_wav(const std::string& path, const WavBuffer& buffer,
               WavFormat format = WavFormat::kFloat32);

// Rational-ratio windowed-sinc resampler.
std::vector<double> resample(const std::vector<double>& input, double in_rate,
                             double out_rate);

}  // namespace reverbmatch
