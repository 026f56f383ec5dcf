#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "reverbmatch/fft.hpp"
#include "reverbmatch/rir.hpp"
#include "reverbmatch/stft.hpp"

namespace reverbmatch {

// Banded cross-band transfer tensor of a time-domain impulse response:
//   H_{f,f',t'} = sum_{m=-N+1}^{N-1} h(t'L - m) W_{f,f'}(m),
// stored for band offsets f' - f in [-band_radius, band_radius] (modulo F).
//
// Causal taps t' in [0, n_ctf_frames) cover every nonzero lag of h with
// n_ctf_frames = ceil((N_h + N - 1) / L). In addition, n_anticausal =
// floor((N - 1) / L) leading taps t' < 0 are stored: the analysis window
// extends N - L samples past the hop grid, so the expansion of a causal
// filter carries this fixed number of nonzero taps before lag zero, and the
// band-complete tensor reproduces time-domain convolution exactly only when
// they are included.
struct CtfTensor {
  int n_bins = 0;        // F
  int band_radius = 0;   // F'
  int n_ctf_frames = 0;  // T_h, causal taps
  int n_anticausal = 0;  // taps before lag zero
  // Layout: data[((t' + n_anticausal) * (2*band_radius+1) + j) * F + f]
  // holds H_{f, (f + j - band_radius) mod F, t'}.
  std::vector<std::complex<double>> data;
  StftConfig config;

  int plane_count() const { return n_anticausal + n_ctf_frames; }
  int band_count() const { return 2 * band_radius + 1; }

  const std::complex<double>* plane(int t_prime, int j) const {
    return data.data() +
           (static_cast<std::size_t>(t_prime + n_anticausal) * band_count() +
            j) *
               n_bins;
  }
  // Entry (f, j, t') = H_{f, (f + j - band_radius) mod F, t'}.
  std::complex<double> at(int f, int j, int t_prime) const {
    return plane(t_prime, j)[f];
  }
};

// Precomputes the window cross-spectra for one (grid, band radius) pair;
// building tensors through one builder amortizes that cost when the
// impulse response is redrawn many times.
class CtfBuilder {
 public:
  CtfBuilder(StftConfig config, int band_radius);

  CtfTensor build(const Rir& rir) const;

  const StftConfig& config() const { return config_; }
  int band_radius() const { return band_radius_; }

 private:
  StftConfig config_;
  int band_radius_;
  // cross_spectra_[j * (2N-1) + (m + N - 1)] =
  //   sum_n w_s(n+m) w_a(n) e^{j2pi (j - band_radius) n / F}
  std::vector<std::complex<double>> cross_spectra_;
  std::unique_ptr<Fft> fft_;
};

CtfTensor compute_ctf(const Rir& rir, const StftConfig& config,
                      int band_radius);

// Banded time-frequency convolution
//   Yhat_{f,t} = sum_{f'=f-F'}^{f+F'} sum_{t'} H_{f,f',t'} S_{f',t-t'},
// frequency indices modulo F, input frames outside [0, T_s) taken as zero.
// Output has T_s + n_ctf_frames - 1 frames.
ComplexSpectrogram ctf_convolve(const ComplexSpectrogram& spec,
                                const CtfTensor& ctf);

// Adjoint of ctf_convolve under <a,b> = sum a conj(b): maps a residual with
// T_y frames to the gradient image with T_y - n_ctf_frames + 1 frames.
ComplexSpectrogram ctf_adjoint(const ComplexSpectrogram& residual,
                               const CtfTensor& ctf);

// Full linear time-domain convolution, length len(signal) + len(rir) - 1.
std::vector<double> time_convolve(const std::vector<double>& signal,
                                  const Rir& rir);

}  // namespace reverbmatch
