#include "reverbmatch/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "reverbmatch/ctf.hpp"
#include "reverbmatch/loss.hpp"

namespace reverbmatch {

std::string SolveReport::to_json() const {
  nlohmann::json j;
  j["loss_trace"] = loss_trace;
  j["rt60_used"] = rt60_used;
  j["final_loss"] = final_loss;
  return j.dump();
}

namespace {

double resolve_rt60(const Rt60Source& source,
                    const std::vector<double>& signal,
                    const StftConfig& config) {
  if (const auto* given = std::get_if<GivenRt60>(&source)) {
    if (given->seconds <= 0.0)
      throw std::invalid_argument("rt60 must be positive");
    return given->seconds;
  }
  if (const auto* oracle = std::get_if<OracleRir>(&source)) {
    return schroeder_rt60(oracle->rir);
  }
  const auto& blind = std::get<BlindRt60>(source);
  return estimate_rt60(signal, config, blind.calibration);
}

}  // namespace

DereverbResult dereverb(const std::vector<double>& signal,
                        const Rt60Source& rt60_source,
                        const StftConfig& stft_config,
                        const SolverConfig& solver_config) {
  if (static_cast<double>(signal.size()) < stft_config.sample_rate)
    throw std::invalid_argument("signal shorter than 1 s");
  if (solver_config.steps < 1)
    throw std::invalid_argument("steps must be >= 1");
  if (solver_config.step_size <= 0.0)
    throw std::invalid_argument("step size must be positive");
  const int log_every = std::max(1, solver_config.log_every);

  const double rt60_used = resolve_rt60(rt60_source, signal, stft_config);
  const AcousticParams acoustic =
      AcousticParams::defaults(rt60_used, stft_config.sample_rate);

  const ComplexSpectrogram observed = stft(signal, stft_config);
  ComplexSpectrogram dry = observed;  // optimization variable

  const CtfBuilder builder(stft_config, solver_config.band_radius);

  // Adaptive scaling: first moment of the gradient per coordinate, second
  // moment taken from the operator itself as the per-row curvature
  // diag(C^H C). The mean synthetic tail is strongly coloured, so curvature
  // varies by orders of magnitude across rows; scaling by gradient moments
  // instead (Adam style) normalizes the redraw noise on quiet coordinates
  // into a random walk that audibly degrades the estimate.
  const std::size_t n_coords = dry.data.size() * 2;
  const int f_count = dry.n_bins;
  std::vector<double> m(n_coords, 0.0);
  std::vector<double> curvature(static_cast<std::size_t>(f_count), 0.0);
  const double beta1 = 0.9;

  SolveReport report;
  report.rt60_used = rt60_used;
  double last_loss = 0.0;

  for (int step = 0; step < solver_config.steps; ++step) {
    const std::uint64_t draw =
        solver_config.freeze_rir ? 0 : static_cast<std::uint64_t>(step);
    const Rir rir = synth_rir(acoustic, mix_seed(solver_config.seed, draw));
    const CtfTensor ctf = builder.build(rir);

    const LossGradient lg = loss_gradient(dry, observed, ctf);
    last_loss = lg.loss;
    if (step % log_every == 0 || step == solver_config.steps - 1)
      report.loss_trace.push_back(lg.loss);

    double* x = reinterpret_cast<double*>(dry.data.data());
    const double* g = reinterpret_cast<const double*>(lg.grad.data.data());
    if (solver_config.adaptive) {
      // diag of C^H C over input rows: entry (f, j, t') feeds input band
      // (f + j - R) mod F
      std::fill(curvature.begin(), curvature.end(), 0.0);
      const int bands = ctf.band_count();
      for (int tp = -ctf.n_anticausal; tp < ctf.n_ctf_frames; ++tp) {
        for (int j = 0; j < bands; ++j) {
          const std::complex<double>* row = ctf.plane(tp, j);
          for (int f = 0; f < f_count; ++f) {
            int fp = f + j - ctf.band_radius;
            if (fp < 0) fp += f_count;
            if (fp >= f_count) fp -= f_count;
            curvature[static_cast<std::size_t>(fp)] += std::norm(row[f]);
          }
        }
      }

      const double bc1 = 1.0 - std::pow(beta1, step + 1);
      for (std::size_t i = 0; i < n_coords; ++i) {
        const double gi = 2.0 * g[i];
        m[i] = beta1 * m[i] + (1.0 - beta1) * gi;
        const double scale =
            2.0 * curvature[(i / 2) % static_cast<std::size_t>(f_count)];
        x[i] -= solver_config.step_size * (m[i] / bc1) / (scale + 1e-12);
      }
    } else {
      for (std::size_t i = 0; i < n_coords; ++i) {
        x[i] -= solver_config.step_size * 2.0 * g[i];
      }
    }
  }

  report.final_loss = last_loss;

  DereverbResult result;
  result.dry_estimate = istft(dry, static_cast<long>(signal.size()));
  result.report = std::move(report);
  return result;
}

std::vector<GeneratedPair> make_pairs(
    const std::vector<std::vector<double>>& dry_signals,
    std::pair<double, double> rt60_range, int count, std::uint64_t seed) {
  if (dry_signals.empty()) throw std::invalid_argument("empty dry list");
  if (count < 0) throw std::invalid_argument("count must be >= 0");
  if (rt60_range.first <= 0.0 || rt60_range.second < rt60_range.first)
    throw std::invalid_argument("invalid rt60 range");
  for (const auto& dry : dry_signals)
    if (dry.empty()) throw std::invalid_argument("empty input");

  std::vector<GeneratedPair> pairs;
  pairs.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const std::uint64_t item_seed = mix_seed(seed, static_cast<std::uint64_t>(i));
    std::mt19937_64 rng(item_seed);
    std::uniform_real_distribution<double> uniform(rt60_range.first,
                                                   rt60_range.second);
    const double rt60 = uniform(rng);
    const std::size_t dry_index = static_cast<std::size_t>(i) % dry_signals.size();

    const Rir rir =
        synth_rir(AcousticParams::defaults(rt60), mix_seed(item_seed, 1));
    const Rir aligned = normalize_align(rir);

    GeneratedPair pair;
    pair.reverberant = time_convolve(dry_signals[dry_index], aligned);
    pair.dry_index = dry_index;
    pair.rt60 = rt60;
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

}  // namespace reverbmatch
