#include "reverbmatch/rir.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace reverbmatch {

AcousticParams AcousticParams::defaults(double rt60, double sample_rate) {
  AcousticParams params;
  params.rt60 = rt60;
  params.sample_rate = sample_rate;
  params.mixing_time = static_cast<int>(std::lround(0.02 * sample_rate));
  params.sigma = 0.02;
  const double len = std::ceil(1.5 * rt60 * sample_rate);
  const double cap = std::ceil(1.5 * sample_rate);
  params.rir_len = static_cast<int>(std::min(len, cap));
  return params;
}

void AcousticParams::validate() const {
  if (rt60 <= 0.0) throw std::invalid_argument("rt60 must be positive");
  if (sample_rate <= 0.0)
    throw std::invalid_argument("sample rate must be positive");
  if (mixing_time < 1) throw std::invalid_argument("mixing time must be >= 1");
  if (rir_len <= mixing_time)
    throw std::invalid_argument("RIR shorter than mixing time");
  if (sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 on seed advanced by the stream index.
  std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rir synth_rir(const AcousticParams& params, std::uint64_t seed,
              TailNoise noise) {
  params.validate();

  Rir rir;
  rir.sample_rate = params.sample_rate;
  rir.samples.assign(static_cast<std::size_t>(params.rir_len), 0.0);
  rir.samples[0] = 1.0;

  const double decay = 3.0 * std::log(10.0) / (params.rt60 * params.sample_rate);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, params.sigma);
  for (int n = params.mixing_time + 1; n < params.rir_len; ++n) {
    double b = normal(rng);
    if (noise == TailNoise::kHalfNormal) b = std::abs(b);
    rir.samples[static_cast<std::size_t>(n)] = b * std::exp(-decay * n);
  }
  return rir;
}

Rir normalize_align(const Rir& rir) {
  if (rir.samples.empty()) throw std::invalid_argument("empty input");
  std::size_t peak = 0;
  double peak_abs = 0.0;
  for (std::size_t i = 0; i < rir.samples.size(); ++i) {
    const double a = std::abs(rir.samples[i]);
    if (a > peak_abs) {
      peak_abs = a;
      peak = i;
    }
  }
  if (peak_abs == 0.0) throw std::runtime_error("silent RIR");

  Rir out;
  out.sample_rate = rir.sample_rate;
  out.samples.assign(rir.samples.begin() + static_cast<long>(peak),
                     rir.samples.end());
  const double scale = rir.samples[peak];  // signed, so out[0] becomes +1
  for (double& s : out.samples) s /= scale;
  out.samples[0] = 1.0;
  return out;
}

double schroeder_rt60(const Rir& rir) {
  if (rir.sample_rate <= 0.0)
    throw std::invalid_argument("sample rate must be positive");
  if (static_cast<double>(rir.samples.size()) < 0.1 * rir.sample_rate)
    throw std::invalid_argument("RIR shorter than 0.1 s");

  // Integrate the tail after the direct-path peak; the direct path itself
  // carries no decay information and would flatten the fit span.
  std::size_t peak = 0;
  double peak_abs = 0.0;
  for (std::size_t i = 0; i < rir.samples.size(); ++i) {
    const double a = std::abs(rir.samples[i]);
    if (a > peak_abs) {
      peak_abs = a;
      peak = i;
    }
  }
  if (peak_abs == 0.0) throw std::runtime_error("silent RIR");
  if (peak + 2 >= rir.samples.size())
    throw std::runtime_error("insufficient decay range");

  const std::size_t tail_len = rir.samples.size() - peak - 1;
  std::vector<double> edc(tail_len, 0.0);
  double acc = 0.0;
  for (std::size_t i = tail_len; i-- > 0;) {
    const double s = rir.samples[peak + 1 + i];
    acc += s * s;
    edc[i] = acc;
  }
  if (edc[0] <= 0.0) throw std::runtime_error("silent RIR");

  long i5 = -1, i25 = -1;
  for (std::size_t i = 0; i < tail_len; ++i) {
    if (edc[i] <= 0.0) break;
    const double db = 10.0 * std::log10(edc[i] / edc[0]);
    if (i5 < 0 && db <= -5.0) i5 = static_cast<long>(i);
    if (db <= -25.0) {
      i25 = static_cast<long>(i);
      break;
    }
  }
  if (i5 < 0 || i25 < 0 || i25 <= i5)
    throw std::runtime_error("insufficient decay range");

  // Least-squares line of the dB curve against time over [-5, -25] dB.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n_pts = static_cast<double>(i25 - i5 + 1);
  for (long i = i5; i <= i25; ++i) {
    const double x = static_cast<double>(i) / rir.sample_rate;
    const double y = 10.0 * std::log10(edc[static_cast<std::size_t>(i)] / edc[0]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n_pts * sxx - sx * sx;
  if (denom <= 0.0) throw std::runtime_error("insufficient decay range");
  const double slope = (n_pts * sxy - sx * sy) / denom;  // dB per second
  if (slope >= 0.0) throw std::runtime_error("insufficient decay range");
  return -60.0 / slope;
}

}  // namespace reverbmatch
