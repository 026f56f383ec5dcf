#include "reverbmatch/stft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "reverbmatch/fft.hpp"
#include "reverbmatch/parallel.hpp"

namespace reverbmatch {

StftConfig StftConfig::make(int n_fft, int hop, double sample_rate) {
  if (n_fft < 2) throw std::invalid_argument("n_fft must be at least 2");
  if (hop < 1 || hop > n_fft)
    throw std::invalid_argument("hop must lie in [1, n_fft]");
  if (sample_rate <= 0.0)
    throw std::invalid_argument("sample rate must be positive");

  StftConfig config;
  config.n_fft = n_fft;
  config.hop = hop;
  config.sample_rate = sample_rate;

  config.analysis_window.resize(n_fft);
  for (int n = 0; n < n_fft; ++n) {
    config.analysis_window[n] =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / n_fft);
  }

  // Canonical dual: w_s = w_a / sum_j w_a(. + j hop)^2, which yields
  // sum_k w_s(n - k hop) w_a(n - k hop) = 1 on the full lattice.
  config.synthesis_window.resize(n_fft);
  for (int n = 0; n < n_fft; ++n) {
    double denom = 0.0;
    for (int idx = n % hop; idx < n_fft; idx += hop) {
      denom += config.analysis_window[idx] * config.analysis_window[idx];
    }
    if (denom < 1e-12)
      throw std::invalid_argument("analysis window fails the overlap cover");
    config.synthesis_window[n] = config.analysis_window[n] / denom;
  }
  return config;
}

ComplexSpectrogram ComplexSpectrogram::zeros(int n_bins, int n_frames,
                                             StftConfig config) {
  if (n_bins < 1 || n_frames < 0)
    throw std::invalid_argument("invalid spectrogram shape");
  ComplexSpectrogram spec;
  spec.n_bins = n_bins;
  spec.n_frames = n_frames;
  spec.config = std::move(config);
  spec.config.n_fft = n_bins;
  spec.data.assign(static_cast<std::size_t>(n_bins) * n_frames,
                   std::complex<double>(0.0, 0.0));
  return spec;
}

double ComplexSpectrogram::norm() const {
  double acc = 0.0;
  for (const auto& v : data) acc += std::norm(v);
  return std::sqrt(acc);
}

ComplexSpectrogram stft(const std::vector<double>& signal,
                        const StftConfig& config) {
  if (signal.empty()) throw std::invalid_argument("empty input");
  if (!config.has_windows())
    throw std::invalid_argument("config has no windows; use StftConfig::make");

  const int n = config.n_fft;
  const int hop = config.hop;
  const long len = static_cast<long>(signal.size());
  const int n_frames = static_cast<int>((len + hop - 1) / hop);

  ComplexSpectrogram spec = ComplexSpectrogram::zeros(n, n_frames, config);
  Fft fft(static_cast<std::size_t>(n));

  parallel_for(static_cast<std::size_t>(n_frames),
               [&](std::size_t begin, std::size_t end) {
                 for (std::size_t t = begin; t < end; ++t) {
                   std::complex<double>* frame = spec.frame(static_cast<int>(t));
                   const long start = static_cast<long>(t) * hop;
                   for (int i = 0; i < n; ++i) {
                     const long idx = start + i;
                     const double x =
                         (idx < len) ? signal[static_cast<std::size_t>(idx)]
                                     : 0.0;
                     frame[i] = config.analysis_window[i] * x;
                   }
                   fft.forward(frame);
                 }
               });
  return spec;
}

std::vector<double> istft(const ComplexSpectrogram& spec, long out_len) {
  if (out_len <= 0) throw std::invalid_argument("output length must be positive");
  if (!spec.config.has_windows() || spec.config.n_fft != spec.n_bins)
    throw std::invalid_argument("spectrogram config has no matching windows");
  if (spec.n_frames < 1) throw std::invalid_argument("empty spectrogram");

  const int n = spec.n_bins;
  const int hop = spec.config.hop;
  const long acc_len = static_cast<long>(spec.n_frames - 1) * hop + n;

  std::vector<double> acc(static_cast<std::size_t>(acc_len), 0.0);
  std::vector<double> weight(static_cast<std::size_t>(acc_len), 0.0);

  Fft fft(static_cast<std::size_t>(n));
  std::vector<std::complex<double>> buf(static_cast<std::size_t>(n));
  const double inv_n = 1.0 / n;
  const auto& wa = spec.config.analysis_window;
  const auto& ws = spec.config.synthesis_window;

  for (int t = 0; t < spec.n_frames; ++t) {
    const std::complex<double>* frame = spec.frame(t);
    std::copy(frame, frame + n, buf.begin());
    fft.backward(buf.data());
    const long start = static_cast<long>(t) * hop;
    for (int i = 0; i < n; ++i) {
      acc[static_cast<std::size_t>(start + i)] +=
          ws[i] * buf[static_cast<std::size_t>(i)].real() * inv_n;
      weight[static_cast<std::size_t>(start + i)] += ws[i] * wa[i];
    }
  }

  std::vector<double> out(static_cast<std::size_t>(out_len), 0.0);
  const long copy_len = std::min(out_len, acc_len);
  for (long i = 0; i < copy_len; ++i) {
    const double w = weight[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] =
        (w > 1e-12) ? acc[static_cast<std::size_t>(i)] / w : 0.0;
  }
  return out;
}

std::complex<double> cross_window_term(const StftConfig& config, int f,
                                       int f_prime, int m) {
  if (!config.has_windows())
    throw std::invalid_argument("config has no windows; use StftConfig::make");
  const int n_fft = config.n_fft;
  if (m <= -n_fft || m >= n_fft) return {0.0, 0.0};

  const double two_pi_over_f = 2.0 * std::numbers::pi / n_fft;
  std::complex<double> acc(0.0, 0.0);
  const int lo = std::max(0, -m);
  const int hi = std::min(n_fft - 1, n_fft - 1 - m);
  for (int n = lo; n <= hi; ++n) {
    const double phase =
        two_pi_over_f * (static_cast<double>(f_prime) * (n + m) -
                         static_cast<double>(f) * n);
    acc += config.synthesis_window[n + m] * config.analysis_window[n] *
           std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return acc / static_cast<double>(n_fft);
}

}  // namespace reverbmatch
