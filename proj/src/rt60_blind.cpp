#include "reverbmatch/rt60_blind.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace reverbmatch {

std::string Calibration::to_json() const {
  nlohmann::json j;
  j["slope"] = slope;
  j["intercept"] = intercept;
  j["n_pairs"] = n_pairs;
  return j.dump();
}

Calibration Calibration::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  Calibration cal;
  cal.slope = j.at("slope").get<double>();
  cal.intercept = j.at("intercept").get<double>();
  cal.n_pairs = j.at("n_pairs").get<int>();
  return cal;
}

std::vector<DecayRegion> find_decay_regions(const ComplexSpectrogram& spec,
                                            const BlindRt60Config& opts) {
  const int f_count = spec.n_bins;
  const int frames = spec.n_frames;
  const double fs = spec.config.sample_rate;
  const double bin_hz = fs / spec.config.n_fft;
  const double frame_dt = spec.config.hop / fs;

  int f_lo = static_cast<int>(std::ceil(opts.band_low_hz / bin_hz));
  int f_hi = static_cast<int>(std::floor(opts.band_high_hz / bin_hz));
  f_lo = std::max(1, f_lo);
  f_hi = std::min(f_count / 2, f_hi);

  // subband power, pooled over neighbour bins
  const int fw = std::max(0, opts.freq_smooth_bins);
  const int tw = std::max(1, opts.time_smooth_frames);
  std::vector<double> pooled(static_cast<std::size_t>(frames));
  std::vector<double> db(static_cast<std::size_t>(frames));

  std::vector<DecayRegion> regions;
  for (int f = f_lo; f <= f_hi; ++f) {
    for (int t = 0; t < frames; ++t) {
      double acc = 0.0;
      int count = 0;
      for (int g = std::max(1, f - fw); g <= std::min(f_count / 2, f + fw);
           ++g) {
        acc += std::norm(spec.at(g, t));
        ++count;
      }
      pooled[static_cast<std::size_t>(t)] = acc / count;
    }
    for (int t = 0; t < frames; ++t) {
      double acc = 0.0;
      int count = 0;
      for (int u = std::max(0, t - tw / 2);
           u <= std::min(frames - 1, t + tw / 2); ++u) {
        acc += pooled[static_cast<std::size_t>(u)];
        ++count;
      }
      db[static_cast<std::size_t>(t)] = 10.0 * std::log10(acc / count + 1e-20);
    }

    // Maximal runs where each frame rises at most ripple_db over the
    // previous one; a run qualifies as free decay when it is long enough
    // and spans a real net fall.
    int start = 0;
    for (int t = 0; t < frames; ++t) {
      const bool run_breaks =
          t + 1 >= frames ||
          db[static_cast<std::size_t>(t + 1)] >
              db[static_cast<std::size_t>(t)] + opts.ripple_db;
      if (!run_breaks) continue;
      const int end = t;
      const int len = end - start + 1;
      const double drop = db[static_cast<std::size_t>(start)] -
                          db[static_cast<std::size_t>(end)];
      if (len >= opts.min_region_frames && drop >= opts.min_region_drop_db) {
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (int i = start; i <= end; ++i) {
          const double x = i * frame_dt;
          const double y = db[static_cast<std::size_t>(i)];
          sx += x;
          sy += y;
          sxx += x * x;
          sxy += x * y;
        }
        const double np = static_cast<double>(len);
        const double denom = np * sxx - sx * sx;
        if (denom > 0.0) {
          const double slope = (np * sxy - sx * sy) / denom;
          if (slope < 0.0) {
            regions.push_back(DecayRegion{f, start, end, slope});
          }
        }
      }
      start = t + 1;
    }
  }
  return regions;
}

double estimate_rt60_raw(const std::vector<double>& signal,
                         const StftConfig& config,
                         const BlindRt60Config& opts) {
  if (static_cast<double>(signal.size()) < config.sample_rate)
    throw std::invalid_argument("signal shorter than 1 s");

  const ComplexSpectrogram spec = stft(signal, config);
  std::vector<DecayRegion> regions = find_decay_regions(spec, opts);
  if (regions.empty()) throw std::runtime_error("no free decay detected");

  std::vector<double> values;
  values.reserve(regions.size());
  for (const auto& r : regions) values.push_back(-60.0 / r.slope_db_per_s);
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return (n % 2 == 1) ? values[n / 2]
                      : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

Calibration calibrate(
    const std::vector<std::pair<std::vector<double>, double>>& pairs,
    const StftConfig& config, const BlindRt60Config& opts) {
  std::vector<double> raw, truth;
  for (const auto& [signal, rt60] : pairs) {
    try {
      raw.push_back(estimate_rt60_raw(signal, config, opts));
      truth.push_back(rt60);
    } catch (const std::runtime_error&) {
      // skip pairs without a usable decay estimate
    }
  }
  if (raw.size() < 2)
    throw std::runtime_error("calibration failed: fewer than 2 usable pairs");

  const double n = static_cast<double>(raw.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    sx += raw[i];
    sy += truth[i];
    sxx += raw[i] * raw[i];
    sxy += raw[i] * truth[i];
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-12 * n * std::max(1.0, sxx))
    throw std::runtime_error("rank-deficient calibration");

  Calibration cal;
  cal.slope = (n * sxy - sx * sy) / denom;
  cal.intercept = (sy - cal.slope * sx) / n;
  cal.n_pairs = static_cast<int>(raw.size());
  return cal;
}

double estimate_rt60(const std::vector<double>& signal,
                     const StftConfig& config, const Calibration& cal,
                     const BlindRt60Config& opts) {
  const double raw = estimate_rt60_raw(signal, config, opts);
  return std::clamp(cal.slope * raw + cal.intercept, 0.05, 3.0);
}

}  // namespace reverbmatch
