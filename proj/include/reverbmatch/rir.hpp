#pragma once

#include <cstdint>
#include <vector>

namespace reverbmatch {

// Acoustic description of a synthetic room response: reverberation time,
// mixing time after which the tail is diffuse, tail noise scale, and length.
struct AcousticParams {
  double rt60 = 0.5;        // seconds
  int mixing_time = 320;    // samples (20 ms at 16 kHz)
  double sigma = 0.02;      // tail noise standard deviation
  double sample_rate = 16000.0;
  int rir_len = 0;          // samples

  // mixing_time = 0.02 * fs, rir_len = ceil(1.5 * rt60 * fs) capped at
  // 1.5 s of samples.
  static AcousticParams defaults(double rt60, double sample_rate = 16000.0);

  void validate() const;
};

enum class TailNoise {
  kHalfNormal,  // |b(n)|, the synthesis model
  kGaussian,    // signed b(n)
};

struct Rir {
  std::vector<double> samples;
  double sample_rate = 16000.0;
};

// Unit direct path at sample 0, zeros through the mixing time, then
// half-normal noise under the exponential envelope
// exp(-3 ln(10) n / (rt60 * fs)). Bit-deterministic given (params, seed).
Rir synth_rir(const AcousticParams& params, std::uint64_t seed,
              TailNoise noise = TailNoise::kHalfNormal);

// Drops samples before the peak of |h| and rescales so the new first sample
// equals exactly 1.
Rir normalize_align(const Rir& rir);

// Reverse-integrated energy decay in dB, least-squares line over the -5 to
// -25 dB span of the tail following the direct-path peak; returns
// -60 / slope. Throws if the curve never reaches -25 dB.
double schroeder_rt60(const Rir& rir);

// splitmix64 step; used to derive independent per-item noise streams from
// one user seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace reverbmatch
