#include "reverbmatch/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace reverbmatch {

double sisdr(const std::vector<double>& reference,
             const std::vector<double>& estimate) {
  const std::size_t n = std::min(reference.size(), estimate.size());
  if (n == 0) throw std::invalid_argument("empty input");

  double ref_energy = 0.0, dot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ref_energy += reference[i] * reference[i];
    dot += estimate[i] * reference[i];
  }
  if (ref_energy <= 0.0) throw std::runtime_error("silent reference");

  const double alpha = dot / ref_energy;
  double resid_energy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = estimate[i] - alpha * reference[i];
    resid_energy += r * r;
  }
  const double target_energy = alpha * alpha * ref_energy;

  if (target_energy == 0.0) return -100.0;
  if (resid_energy == 0.0) return 100.0;
  const double value = 10.0 * std::log10(target_energy / resid_energy);
  return std::clamp(value, -100.0, 100.0);
}

double log_spectral_distance(const std::vector<double>& reference,
                             const std::vector<double>& estimate,
                             const StftConfig& config) {
  const long diff = static_cast<long>(reference.size()) -
                    static_cast<long>(estimate.size());
  if (std::labs(diff) > config.hop)
    throw std::invalid_argument("length mismatch beyond one frame");
  const std::size_t n = std::min(reference.size(), estimate.size());
  if (n == 0) throw std::invalid_argument("empty input");

  std::vector<double> a(reference.begin(), reference.begin() + n);
  std::vector<double> b(estimate.begin(), estimate.begin() + n);
  const ComplexSpectrogram sa = stft(a, config);
  const ComplexSpectrogram sb = stft(b, config);

  const int frames = std::min(sa.n_frames, sb.n_frames);
  const int f_count = sa.n_bins;
  double acc = 0.0;
  for (int t = 0; t < frames; ++t) {
    const std::complex<double>* fa = sa.frame(t);
    const std::complex<double>* fb = sb.frame(t);
    double frame_acc = 0.0;
    for (int f = 0; f < f_count; ++f) {
      const double da = 20.0 * std::log10(std::abs(fa[f]) + 1e-8);
      const double db = 20.0 * std::log10(std::abs(fb[f]) + 1e-8);
      frame_acc += (da - db) * (da - db);
    }
    acc += frame_acc / f_count;  // squared per-frame RMS
  }
  return std::sqrt(acc / frames);
}

MetricReport evaluate(const std::vector<double>& reference,
                      const std::vector<double>& estimate,
                      const StftConfig& config) {
  MetricReport report;
  report.sisdr_db = sisdr(reference, estimate);
  report.lsd_db = log_spectral_distance(reference, estimate, config);
  return report;
}

}  // namespace reverbmatch
