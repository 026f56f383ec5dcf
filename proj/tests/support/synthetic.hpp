#pragma once

#include <cstdint>
#include <vector>

namespace testsupport {

// Deterministic speech-like material: harmonic bursts with formant-shaped
// spectra separated by silent gaps, starting with a short silent onset so
// analysis frames tile the active support.
std::vector<double> make_speech_like(std::uint64_t seed, double seconds,
                                     double sample_rate = 16000.0);

// i.i.d. zero-mean gaussian samples.
std::vector<double> make_noise(std::uint64_t seed, std::size_t count,
                               double sigma = 1.0);

}  // namespace testsupport
