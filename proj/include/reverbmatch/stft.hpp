#pragma once

#include <complex>
#include <vector>

namespace reverbmatch {

// Short-time transform grid: Hann analysis window of length n_fft, hop
// samples between frames, and the canonical dual synthesis window, so that
// sum_k w_s(n - k hop) * w_a(n - k hop) = 1 away from the signal edges.
// The spectral representation is two-sided: band count equals n_fft.
struct StftConfig {
  int n_fft = 512;
  int hop = 256;
  double sample_rate = 16000.0;
  std::vector<double> analysis_window;   // w_a
  std::vector<double> synthesis_window;  // w_s

  // Builds the Hann/dual pair and validates the grid.
  static StftConfig make(int n_fft = 512, int hop = 256,
                         double sample_rate = 16000.0);

  int bands() const { return n_fft; }
  bool has_windows() const {
    return static_cast<int>(analysis_window.size()) == n_fft &&
           static_cast<int>(synthesis_window.size()) == n_fft;
  }
  bool same_grid(const StftConfig& other) const {
    return n_fft == other.n_fft && hop == other.hop &&
           sample_rate == other.sample_rate;
  }
};

// Complex F x T matrix of short-time coefficients, frame-major storage
// (each frame's bins are contiguous).
struct ComplexSpectrogram {
  int n_bins = 0;
  int n_frames = 0;
  std::vector<std::complex<double>> data;
  StftConfig config;

  static ComplexSpectrogram zeros(int n_bins, int n_frames,
                                  StftConfig config = StftConfig{});

  std::complex<double>& at(int f, int t) {
    return data[static_cast<std::size_t>(t) * n_bins + f];
  }
  const std::complex<double>& at(int f, int t) const {
    return data[static_cast<std::size_t>(t) * n_bins + f];
  }
  std::complex<double>* frame(int t) {
    return data.data() + static_cast<std::size_t>(t) * n_bins;
  }
  const std::complex<double>* frame(int t) const {
    return data.data() + static_cast<std::size_t>(t) * n_bins;
  }

  double norm() const;
};

// Analysis transform. Frame t covers samples [t*hop, t*hop + n_fft), the
// tail is zero padded; ceil(len / hop) frames.
ComplexSpectrogram stft(const std::vector<double>& signal,
                        const StftConfig& config);

// Overlap-add synthesis with the synthesis window, normalized by the
// realized window-product sum, truncated or zero padded to out_len.
std::vector<double> istft(const ComplexSpectrogram& spec, long out_len);

// Window cross-term
//   W_{f,f'}(m) = (1/F) sum_n w_s(n+m) w_a(n) e^{j2pi(f'(n+m) - f n)/F},
// with window values outside [0, n_fft) taken as zero. Exactly zero for
// |m| >= n_fft.
std::complex<double> cross_window_term(const StftConfig& config, int f,
                                       int f_prime, int m);

}  // namespace reverbmatch
