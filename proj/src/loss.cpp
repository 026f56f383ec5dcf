#include "reverbmatch/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace reverbmatch {

namespace {

void check_params(const LossParams& params) {
  if (params.lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  if (params.gamma <= 0.0) throw std::invalid_argument("gamma must be > 0");
  if (!(params.eps > 0.0) || params.eps > 1e-8)
    throw std::invalid_argument("eps must lie in (0, 1e-8]");
}

}  // namespace

double reverb_match_loss(const ComplexSpectrogram& est,
                         const ComplexSpectrogram& ref,
                         const LossParams& params) {
  check_params(params);
  if (est.n_bins != ref.n_bins)
    throw std::invalid_argument("frequency band mismatch");

  const int f_count = est.n_bins;
  const int frames = std::max(est.n_frames, ref.n_frames);
  const std::complex<double> zero(0.0, 0.0);

  double loss = 0.0;
  for (int t = 0; t < frames; ++t) {
    const std::complex<double>* a = t < est.n_frames ? est.frame(t) : nullptr;
    const std::complex<double>* b = t < ref.n_frames ? ref.frame(t) : nullptr;
    for (int f = 0; f < f_count; ++f) {
      const std::complex<double> y_hat = a ? a[f] : zero;
      const std::complex<double> y = b ? b[f] : zero;
      const double lr = std::log((1.0 + params.gamma * std::abs(y_hat)) /
                                 (1.0 + params.gamma * std::abs(y)));
      loss += std::norm(y_hat - y) + params.lambda * lr * lr;
    }
  }
  return loss;
}

LossGradient loss_gradient(const ComplexSpectrogram& dry_est,
                           const ComplexSpectrogram& ref, const CtfTensor& ctf,
                           const LossParams& params) {
  check_params(params);
  if (dry_est.n_bins != ref.n_bins)
    throw std::invalid_argument("frequency band mismatch");

  ComplexSpectrogram y_hat = ctf_convolve(dry_est, ctf);
  const int f_count = y_hat.n_bins;
  const int t_y = y_hat.n_frames;
  const std::complex<double> zero(0.0, 0.0);

  // Pointwise sensitivity on y_hat; the quadratic term contributes the
  // residual, the log term a radial pull guarded at |y_hat| = 0.
  ComplexSpectrogram sens =
      ComplexSpectrogram::zeros(f_count, t_y, y_hat.config);
  double loss = 0.0;
  const int frames = std::max(t_y, ref.n_frames);
  for (int t = 0; t < frames; ++t) {
    const std::complex<double>* a = t < t_y ? y_hat.frame(t) : nullptr;
    const std::complex<double>* b = t < ref.n_frames ? ref.frame(t) : nullptr;
    std::complex<double>* d = t < t_y ? sens.frame(t) : nullptr;
    for (int f = 0; f < f_count; ++f) {
      const std::complex<double> y_model = a ? a[f] : zero;
      const std::complex<double> y = b ? b[f] : zero;
      const double ay = std::abs(y_model);
      const double lr = std::log((1.0 + params.gamma * ay) /
                                 (1.0 + params.gamma * std::abs(y)));
      loss += std::norm(y_model - y) + params.lambda * lr * lr;
      if (d) {
        const double radial = params.lambda * lr * params.gamma /
                              ((1.0 + params.gamma * ay) *
                               std::max(ay, params.eps));
        d[f] = (y_model - y) + radial * y_model;
      }
    }
  }

  LossGradient out;
  out.loss = loss;
  out.grad = ctf_adjoint(sens, ctf);
  return out;
}

}  // namespace reverbmatch
