#include "reverbmatch/ctf.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "reverbmatch/parallel.hpp"

namespace reverbmatch {

namespace {

int floor_div(int a, int b) {
  int q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

int ceil_div(int a, int b) { return floor_div(a + b - 1, b); }

}  // namespace

CtfBuilder::CtfBuilder(StftConfig config, int band_radius)
    : config_(std::move(config)), band_radius_(band_radius) {
  if (!config_.has_windows())
    throw std::invalid_argument("config has no windows; use StftConfig::make");
  const int n_fft = config_.n_fft;
  if (band_radius_ < 0 || band_radius_ > n_fft / 2)
    throw std::invalid_argument("band radius must lie in [0, n_fft/2]");

  fft_ = std::make_unique<Fft>(static_cast<std::size_t>(n_fft));

  // phase[i] = e^{j 2 pi i / F}; exact lookups avoid recurrence drift.
  std::vector<std::complex<double>> phase(static_cast<std::size_t>(n_fft));
  for (int i = 0; i < n_fft; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n_fft;
    phase[static_cast<std::size_t>(i)] = {std::cos(a), std::sin(a)};
  }

  const int bands = 2 * band_radius_ + 1;
  const int m_count = 2 * n_fft - 1;
  cross_spectra_.assign(static_cast<std::size_t>(bands) * m_count,
                        std::complex<double>(0.0, 0.0));
  const auto& wa = config_.analysis_window;
  const auto& ws = config_.synthesis_window;

  // V_k(m) = sum_n w_s(n+m) w_a(n) e^{j 2 pi k n / F}; V_{-k} = conj(V_k),
  // so only the upper half is summed directly.
  parallel_for(static_cast<std::size_t>(band_radius_) + 1, [&](std::size_t b0,
                                                               std::size_t b1) {
    for (std::size_t kk = b0; kk < b1; ++kk) {
      const int k = static_cast<int>(kk);
      std::complex<double>* pos =
          cross_spectra_.data() +
          static_cast<std::size_t>(band_radius_ + k) * m_count;
      for (int m = -n_fft + 1; m <= n_fft - 1; ++m) {
        const int lo = std::max(0, -m);
        const int hi = std::min(n_fft - 1, n_fft - 1 - m);
        std::complex<double> acc(0.0, 0.0);
        for (int n = lo; n <= hi; ++n) {
          acc += ws[n + m] * wa[n] *
                 phase[static_cast<std::size_t>((static_cast<long>(k) * n) %
                                                n_fft)];
        }
        pos[m + n_fft - 1] = acc;
      }
      if (k > 0) {
        std::complex<double>* neg =
            cross_spectra_.data() +
            static_cast<std::size_t>(band_radius_ - k) * m_count;
        for (int i = 0; i < m_count; ++i) neg[i] = std::conj(pos[i]);
      }
    }
  });

  // With band_radius = F/2 the offsets -F/2 and +F/2 alias to the same band;
  // zero the duplicate so every input band is counted once.
  if (bands > n_fft) {
    std::complex<double>* dup =
        cross_spectra_.data() + static_cast<std::size_t>(bands - 1) * m_count;
    for (int i = 0; i < m_count; ++i) dup[i] = {0.0, 0.0};
  }
}

CtfTensor CtfBuilder::build(const Rir& rir) const {
  if (rir.samples.empty()) throw std::invalid_argument("empty input");
  if (rir.sample_rate != config_.sample_rate)
    throw std::invalid_argument("sample rate mismatch between RIR and config");

  const int n_fft = config_.n_fft;
  const int hop = config_.hop;
  const int n_h = static_cast<int>(rir.samples.size());
  const int bands = 2 * band_radius_ + 1;
  const int m_count = 2 * n_fft - 1;

  CtfTensor tensor;
  tensor.n_bins = n_fft;
  tensor.band_radius = band_radius_;
  tensor.n_ctf_frames = ceil_div(n_h + n_fft - 1, hop);
  tensor.n_anticausal = (n_fft - 1) / hop;
  tensor.config = config_;
  const int planes = tensor.plane_count();
  tensor.data.assign(static_cast<std::size_t>(planes) * bands * n_fft,
                     std::complex<double>(0.0, 0.0));

  const double* h = rir.samples.data();
  const double inv_f = 1.0 / n_fft;

  // For fixed (k, t'):  H_{f, f'=f+k, t'} = (1/F) sum_m h(t'L - m) V_k(m)
  // e^{j 2 pi f' m / F}.  Folding m modulo F turns the sum over all f' into
  // one backward FFT of the folded sequence.
  parallel_for(static_cast<std::size_t>(planes), [&](std::size_t p0,
                                                     std::size_t p1) {
    std::vector<std::complex<double>> z(static_cast<std::size_t>(n_fft));
    for (std::size_t plane = p0; plane < p1; ++plane) {
      const int t_prime = static_cast<int>(plane) - tensor.n_anticausal;
      const int offset = t_prime * hop;
      for (int j = 0; j < bands; ++j) {
        const std::complex<double>* v =
            cross_spectra_.data() + static_cast<std::size_t>(j) * m_count;
        for (int mu = 0; mu < n_fft; ++mu) {
          std::complex<double> acc(0.0, 0.0);
          // m = mu
          const int x0 = offset - mu;
          if (x0 >= 0 && x0 < n_h) acc += h[x0] * v[mu + n_fft - 1];
          // m = mu - F
          if (mu >= 1) {
            const int x1 = offset - mu + n_fft;
            if (x1 >= 0 && x1 < n_h) acc += h[x1] * v[mu - 1];
          }
          z[static_cast<std::size_t>(mu)] = acc;
        }
        fft_->backward(z.data());
        std::complex<double>* row =
            tensor.data.data() +
            (static_cast<std::size_t>(plane) * bands + j) * n_fft;
        const int k = j - band_radius_;
        for (int f = 0; f < n_fft; ++f) {
          int fp = f + k;
          if (fp < 0) fp += n_fft;
          if (fp >= n_fft) fp -= n_fft;
          row[f] = z[static_cast<std::size_t>(fp)] * inv_f;
        }
      }
    }
  });
  return tensor;
}

CtfTensor compute_ctf(const Rir& rir, const StftConfig& config,
                      int band_radius) {
  return CtfBuilder(config, band_radius).build(rir);
}

ComplexSpectrogram ctf_convolve(const ComplexSpectrogram& spec,
                                const CtfTensor& ctf) {
  if (spec.n_bins != ctf.n_bins || !spec.config.same_grid(ctf.config))
    throw std::invalid_argument("spectrogram and CTF configs do not match");
  if (spec.n_frames < 1) throw std::invalid_argument("empty spectrogram");

  const int f_count = ctf.n_bins;
  const int bands = ctf.band_count();
  const int t_s = spec.n_frames;
  const int t_y = t_s + ctf.n_ctf_frames - 1;

  ComplexSpectrogram out =
      ComplexSpectrogram::zeros(f_count, t_y, spec.config);

  parallel_for(static_cast<std::size_t>(t_y), [&](std::size_t b0,
                                                  std::size_t b1) {
    for (std::size_t ti = b0; ti < b1; ++ti) {
      const int t = static_cast<int>(ti);
      std::complex<double>* y = out.frame(t);
      const int lo = std::max(-ctf.n_anticausal, t - (t_s - 1));
      const int hi = std::min(t, ctf.n_ctf_frames - 1);
      for (int tp = lo; tp <= hi; ++tp) {
        const std::complex<double>* s = spec.frame(t - tp);
        for (int j = 0; j < bands; ++j) {
          const std::complex<double>* hrow = ctf.plane(tp, j);
          int shift = (j - ctf.band_radius) % f_count;
          if (shift < 0) shift += f_count;
          const int split = f_count - shift;
          for (int f = 0; f < split; ++f) y[f] += hrow[f] * s[f + shift];
          for (int f = split; f < f_count; ++f)
            y[f] += hrow[f] * s[f + shift - f_count];
        }
      }
    }
  });
  return out;
}

ComplexSpectrogram ctf_adjoint(const ComplexSpectrogram& residual,
                               const CtfTensor& ctf) {
  if (residual.n_bins != ctf.n_bins || !residual.config.same_grid(ctf.config))
    throw std::invalid_argument("spectrogram and CTF configs do not match");
  const int t_y = residual.n_frames;
  const int t_s = t_y - ctf.n_ctf_frames + 1;
  if (t_s < 1)
    throw std::invalid_argument("residual has fewer frames than the CTF");

  const int f_count = ctf.n_bins;
  const int bands = ctf.band_count();

  ComplexSpectrogram out =
      ComplexSpectrogram::zeros(f_count, t_s, residual.config);

  parallel_for(static_cast<std::size_t>(t_s), [&](std::size_t b0,
                                                  std::size_t b1) {
    for (std::size_t ti = b0; ti < b1; ++ti) {
      const int tau = static_cast<int>(ti);
      std::complex<double>* g = out.frame(tau);
      for (int tp = -ctf.n_anticausal; tp < ctf.n_ctf_frames; ++tp) {
        const int t = tau + tp;
        if (t < 0 || t >= t_y) continue;
        const std::complex<double>* r = residual.frame(t);
        for (int j = 0; j < bands; ++j) {
          const std::complex<double>* hrow = ctf.plane(tp, j);
          int shift = (j - ctf.band_radius) % f_count;
          if (shift < 0) shift += f_count;
          // g[(f + shift) mod F] += conj(h[f]) r[f]
          for (int f = shift; f < f_count; ++f)
            g[f] += std::conj(hrow[f - shift]) * r[f - shift];
          for (int f = 0; f < shift; ++f)
            g[f] += std::conj(hrow[f - shift + f_count]) *
                    r[f - shift + f_count];
        }
      }
    }
  });
  return out;
}

std::vector<double> time_convolve(const std::vector<double>& signal,
                                  const Rir& rir) {
  if (signal.empty() || rir.samples.empty())
    throw std::invalid_argument("empty input");
  return fft_convolve(signal, rir.samples);
}

}  // namespace reverbmatch
