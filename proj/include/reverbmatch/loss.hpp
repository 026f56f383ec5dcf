#pragma once

#include "reverbmatch/ctf.hpp"
#include "reverbmatch/stft.hpp"

namespace reverbmatch {

struct LossParams {
  double lambda = 1.0;  // weight of the log-amplitude term
  double gamma = 1.0;   // amplitude compression
  double eps = 1e-9;    // guard for the log-term gradient at |Yhat| = 0
};

// sum_{f,t} [ |Yhat - Y|^2 + lambda * ln((1 + gamma|Yhat|)/(1 + gamma|Y|))^2 ]
// The shorter spectrogram is zero padded in frames; band counts must match.
double reverb_match_loss(const ComplexSpectrogram& est,
                         const ComplexSpectrogram& ref,
                         const LossParams& params = LossParams{});

struct LossGradient {
  double loss = 0.0;
  // Gradient image G over the dry estimate: dL/dRe S = 2 Re G,
  // dL/dIm S = 2 Im G per entry.
  ComplexSpectrogram grad;
};

// Loss at Yhat = ctf_convolve(dry_est, ctf) together with its gradient with
// respect to dry_est, obtained by pulling the pointwise sensitivity on Yhat
// back through ctf_adjoint.
LossGradient loss_gradient(const ComplexSpectrogram& dry_est,
                           const ComplexSpectrogram& ref, const CtfTensor& ctf,
                           const LossParams& params = LossParams{});

}  // namespace reverbmatch
