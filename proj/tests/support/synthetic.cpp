#include "synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace testsupport {

namespace {

double formant_shape(double hz) {
  auto bump = [](double f, double center, double width) {
    const double d = (f - center) / width;
    return std::exp(-d * d);
  };
  return 1.0 + 1.3 * bump(hz, 500.0, 250.0) + 0.7 * bump(hz, 1500.0, 350.0) +
         0.4 * bump(hz, 2500.0, 450.0);
}

}  // namespace

std::vector<double> make_speech_like(std::uint64_t seed, double seconds,
                                     double sample_rate) {
  const std::size_t total =
      static_cast<std::size_t>(std::lround(seconds * sample_rate));
  std::vector<double> out(total, 0.0);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  std::size_t pos = static_cast<std::size_t>(0.03 * sample_rate);
  while (pos < total) {
    const double f0 = 95.0 + 130.0 * u01(rng);
    const double dur_s = 0.12 + 0.14 * u01(rng);
    const double amp = 0.3 + 0.5 * u01(rng);
    const std::size_t dur =
        static_cast<std::size_t>(std::lround(dur_s * sample_rate));

    // Harmonic stack with formant-shaped amplitudes and random phases.
    std::vector<double> h_amp, h_phase;
    for (int k = 1; k * f0 < 4200.0; ++k) {
      h_amp.push_back(formant_shape(k * f0) / std::pow(k, 0.8));
      h_phase.push_back(2.0 * std::numbers::pi * u01(rng));
    }

    const std::size_t attack =
        static_cast<std::size_t>(0.015 * sample_rate);
    const std::size_t release = static_cast<std::size_t>(0.05 * sample_rate);
    for (std::size_t i = 0; i < dur && pos + i < total; ++i) {
      double env = 1.0;
      if (i < attack) {
        env = 0.5 - 0.5 * std::cos(std::numbers::pi * i / attack);
      } else if (dur - i <= release) {
        const std::size_t r = dur - i;
        env = 0.5 - 0.5 * std::cos(std::numbers::pi * r / release);
      }
      double s = 0.0;
      const double t = static_cast<double>(i) / sample_rate;
      for (std::size_t k = 0; k < h_amp.size(); ++k) {
        s += h_amp[k] * std::sin(2.0 * std::numbers::pi * f0 * (k + 1) * t +
                                 h_phase[k]);
      }
      out[pos + i] = amp * env * s;
    }
    pos += dur;
    pos += static_cast<std::size_t>(
        std::lround((0.15 + 0.18 * u01(rng)) * sample_rate));
  }

  double peak = 0.0;
  for (double v : out) peak = std::max(peak, std::abs(v));
  if (peak > 0.0)
    for (double& v : out) v *= 0.5 / peak;
  return out;
}

std::vector<double> make_noise(std::uint64_t seed, std::size_t count,
                               double sigma) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, sigma);
  std::vector<double> out(count);
  for (double& v : out) v = gauss(rng);
  return out;
}

}  // namespace testsupport
