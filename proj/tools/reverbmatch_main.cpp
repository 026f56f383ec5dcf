// Command-line surface for the reverbmatch library: synthetic room
// responses, time/cross-band reverberation, blind RT60 estimation and
// calibration, gradient-descent dereverberation, pair generation, and
// objective evaluation. All seeded commands are bit-reproducible.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "reverbmatch/ctf.hpp"
#include "reverbmatch/metrics.hpp"
#include "reverbmatch/rir.hpp"
#include "reverbmatch/rt60_blind.hpp"
#include "reverbmatch/solver.hpp"
#include "reverbmatch/stft.hpp"
#include "reverbmatch/wav.hpp"

namespace {

using namespace reverbmatch;

constexpr double kRate = 16000.0;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

WavBuffer load_mono_16k(const std::string& path, bool do_resample,
                        bool mixdown) {
  WavReadOptions opts;
  opts.resample = do_resample;
  opts.mixdown = mixdown;
  opts.target_rate = kRate;
  return read_wav(path, opts);
}

std::string slurp(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open file: " + path);
  std::stringstream ss;
  ss << file.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open file for write: " + path);
  file << text;
}

struct ManifestRow {
  std::string path_reverb;
  std::string path_dry;
  double rt60 = 0.0;
};

std::vector<ManifestRow> read_manifest(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open file: " + path);
  std::vector<ManifestRow> rows;
  std::string line;
  bool first = true;
  while (std::getline(file, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("path_reverb", 0) == 0) continue;  // header
    }
    std::stringstream ss(line);
    ManifestRow row;
    std::string rt;
    if (!std::getline(ss, row.path_reverb, ',') ||
        !std::getline(ss, row.path_dry, ',') || !std::getline(ss, rt, ','))
      throw std::runtime_error("malformed manifest line: " + line);
    row.rt60 = std::stod(rt);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("empty manifest: " + path);
  return rows;
}

int cmd_synth_rir(double rt60, double nm_ms, double sigma, double len_s,
                  std::uint64_t seed, const std::string& out) {
  AcousticParams params = AcousticParams::defaults(rt60, kRate);
  params.mixing_time = static_cast<int>(std::lround(nm_ms * 1e-3 * kRate));
  params.sigma = sigma;
  if (len_s > 0.0)
    params.rir_len = static_cast<int>(std::lround(len_s * kRate));
  const Rir rir = synth_rir(params, seed);
  write_wav(out, WavBuffer{rir.samples, kRate});
  return 0;
}

int cmd_reverberate(const std::string& rir_path, const std::string& mode,
                    int band_radius, const std::string& in_path,
                    const std::string& out_path, bool do_resample,
                    bool mixdown) {
  const WavBuffer in = load_mono_16k(in_path, do_resample, mixdown);
  const WavBuffer rir_buf = load_mono_16k(rir_path, do_resample, mixdown);
  const Rir rir{rir_buf.samples, rir_buf.sample_rate};

  std::vector<double> out;
  if (mode == "time") {
    out = time_convolve(in.samples, rir);
  } else if (mode == "ctf" || mode == "ctf-banded") {
    const StftConfig config = StftConfig::make(512, 256, kRate);
    const int radius = mode == "ctf" ? config.n_fft / 2 : band_radius;
    const ComplexSpectrogram spec = stft(in.samples, config);
    const ComplexSpectrogram wet =
        ctf_convolve(spec, compute_ctf(rir, config, radius));
    out = istft(wet, static_cast<long>(in.samples.size() +
                                       rir.samples.size() - 1));
  } else {
    throw UsageError("unknown mode: " + mode);
  }
  write_wav(out_path, WavBuffer{out, kRate});
  return 0;
}

int cmd_estimate_rt60(const std::string& cal_path, const std::string& in_path,
                      bool do_resample, bool mixdown) {
  const WavBuffer in = load_mono_16k(in_path, do_resample, mixdown);
  const StftConfig config = StftConfig::make(512, 256, kRate);
  double value;
  if (cal_path.empty()) {
    value = estimate_rt60_raw(in.samples, config);
  } else {
    const Calibration cal = Calibration::from_json(slurp(cal_path));
    value = estimate_rt60(in.samples, config, cal);
  }
  std::printf("%.6f\n", value);
  return 0;
}

int cmd_calibrate(const std::string& manifest_path, const std::string& out,
                  bool do_resample, bool mixdown) {
  const std::vector<ManifestRow> rows = read_manifest(manifest_path);
  std::vector<std::pair<std::vector<double>, double>> pairs;
  pairs.reserve(rows.size());
  for (const auto& row : rows) {
    WavBuffer buf = load_mono_16k(row.path_reverb, do_resample, mixdown);
    pairs.emplace_back(std::move(buf.samples), row.rt60);
  }
  const StftConfig config = StftConfig::make(512, 256, kRate);
  const Calibration cal = calibrate(pairs, config);
  spit(out, cal.to_json() + "\n");
  return 0;
}

int cmd_dereverb(const std::string& in_path, const std::string& out_path,
                 double rt60, bool blind, const std::string& cal_path,
                 const std::string& oracle_path, int steps, double step_size,
                 int band_radius, std::uint64_t seed,
                 const std::string& report_path, bool plain, int log_every,
                 bool do_resample, bool mixdown) {
  const int sources = (rt60 > 0.0 ? 1 : 0) + (blind ? 1 : 0) +
                      (oracle_path.empty() ? 0 : 1);
  if (sources != 1)
    throw UsageError(
        "exactly one of --rt60, --blind, --oracle-rir must be given");
  if (blind && cal_path.empty())
    throw UsageError("--blind requires --cal calibration file");

  const WavBuffer in = load_mono_16k(in_path, do_resample, mixdown);

  Rt60Source source = GivenRt60{rt60};
  if (blind) {
    source = BlindRt60{Calibration::from_json(slurp(cal_path))};
  } else if (!oracle_path.empty()) {
    const WavBuffer rir_buf = load_mono_16k(oracle_path, do_resample, mixdown);
    source = OracleRir{Rir{rir_buf.samples, rir_buf.sample_rate}};
  }

  const StftConfig stft_config = StftConfig::make(512, 256, kRate);
  SolverConfig solver_config;
  solver_config.steps = steps;
  solver_config.step_size = step_size;
  solver_config.band_radius = band_radius;
  solver_config.seed = seed;
  solver_config.adaptive = !plain;
  solver_config.log_every = log_every;

  const DereverbResult result =
      dereverb(in.samples, source, stft_config, solver_config);
  write_wav(out_path, WavBuffer{result.dry_estimate, kRate});
  if (!report_path.empty()) spit(report_path, result.report.to_json() + "\n");
  return 0;
}

int cmd_make_pairs(const std::string& dry_dir, int count, std::uint64_t seed,
                   const std::string& manifest_path,
                   const std::string& out_dir, double rt60_min,
                   double rt60_max, bool do_resample, bool mixdown) {
  namespace fs = std::filesystem;
  std::vector<std::string> dry_paths;
  for (const auto& entry : fs::directory_iterator(dry_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav")
      dry_paths.push_back(entry.path().string());
  }
  std::sort(dry_paths.begin(), dry_paths.end());
  if (dry_paths.empty())
    throw std::runtime_error("no .wav files in " + dry_dir);

  std::vector<std::vector<double>> dry_signals;
  dry_signals.reserve(dry_paths.size());
  for (const auto& p : dry_paths)
    dry_signals.push_back(load_mono_16k(p, do_resample, mixdown).samples);

  const std::vector<GeneratedPair> pairs =
      make_pairs(dry_signals, {rt60_min, rt60_max}, count, seed);

  fs::create_directories(out_dir);
  std::ostringstream manifest;
  manifest << "path_reverb,path_dry,rt60_seconds\n";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::string reverb_path =
        (fs::path(out_dir) / ("pair_" + std::to_string(i) + ".wav")).string();
    write_wav(reverb_path, WavBuffer{pairs[i].reverberant, kRate});
    char rt[32];
    std::snprintf(rt, sizeof(rt), "%.6f", pairs[i].rt60);
    manifest << reverb_path << ',' << dry_paths[pairs[i].dry_index] << ','
             << rt << '\n';
  }
  spit(manifest_path, manifest.str());
  return 0;
}

int cmd_eval(const std::string& ref_path, const std::string& est_path,
             bool do_resample, bool mixdown) {
  const WavBuffer ref = load_mono_16k(ref_path, do_resample, mixdown);
  const WavBuffer est = load_mono_16k(est_path, do_resample, mixdown);
  const StftConfig config = StftConfig::make(512, 256, kRate);
  const MetricReport report = evaluate(ref.samples, est.samples, config);
  nlohmann::json j;
  j["sisdr_db"] = report.sisdr_db;
  j["lsd_db"] = report.lsd_db;
  std::cout << j.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reverbmatch: hybrid reverberation modelling toolkit"};
  app.require_subcommand(1);

  // synth-rir
  auto* synth = app.add_subcommand("synth-rir", "synthesize a room response");
  double rt60 = 0.0, nm_ms = 20.0, sigma = 0.02, len_s = 0.0;
  std::uint64_t seed = 0;
  std::string out_path;
  synth->add_option("--rt60", rt60, "reverberation time in seconds")
      ->required();
  synth->add_option("--nm-ms", nm_ms, "mixing time in milliseconds");
  synth->add_option("--sigma", sigma, "tail noise scale");
  synth->add_option("--len-s", len_s, "length in seconds (default 1.5*rt60)");
  synth->add_option("--seed", seed, "noise seed")->required();
  synth->add_option("-o,--output", out_path, "output WAV")->required();

  // reverberate
  auto* reverb = app.add_subcommand("reverberate",
                                    "convolve a signal with a response");
  std::string rir_path, mode = "time", rev_in, rev_out;
  int band_radius = 4;
  bool rev_resample = false, rev_mix = false;
  reverb->add_option("--rir", rir_path, "response WAV")->required();
  reverb->add_option("--mode", mode, "time | ctf | ctf-banded")
      ->check(CLI::IsMember({"time", "ctf", "ctf-banded"}));
  reverb->add_option("--band-radius", band_radius, "cross-band radius");
  reverb->add_option("input", rev_in, "input WAV")->required();
  reverb->add_option("-o,--output", rev_out, "output WAV")->required();
  reverb->add_flag("--resample", rev_resample, "resample inputs to 16 kHz");
  reverb->add_flag("--mixdown", rev_mix, "average multichannel inputs");

  // estimate-rt60
  auto* est = app.add_subcommand("estimate-rt60",
                                 "blind RT60 from reverberant audio");
  std::string est_cal, est_in;
  bool est_resample = false, est_mix = false;
  est->add_option("--cal", est_cal, "calibration JSON");
  est->add_option("input", est_in, "input WAV")->required();
  est->add_flag("--resample", est_resample, "resample input to 16 kHz");
  est->add_flag("--mixdown", est_mix, "average multichannel input");

  // calibrate-rt60
  auto* cal = app.add_subcommand("calibrate-rt60",
                                 "fit the blind estimator on labelled pairs");
  std::string cal_manifest, cal_out;
  bool cal_resample = false, cal_mix = false;
  cal->add_option("--manifest", cal_manifest, "CSV manifest")->required();
  cal->add_option("-o,--output", cal_out, "calibration JSON")->required();
  cal->add_flag("--resample", cal_resample, "resample inputs to 16 kHz");
  cal->add_flag("--mixdown", cal_mix, "average multichannel inputs");

  // dereverb
  auto* drv = app.add_subcommand("dereverb",
                                 "gradient-descent dereverberation");
  std::string drv_in, drv_out, drv_cal, drv_oracle, drv_report;
  double drv_rt60 = 0.0, drv_step = 1e-2;
  int drv_steps = 500, drv_radius = 4, drv_log_every = 1;
  std::uint64_t drv_seed = 0;
  bool drv_blind = false, drv_plain = false;
  bool drv_resample = false, drv_mix = false;
  drv->add_option("input", drv_in, "input WAV")->required();
  drv->add_option("-o,--output", drv_out, "output WAV")->required();
  drv->add_option("--rt60", drv_rt60, "known reverberation time");
  drv->add_flag("--blind", drv_blind, "estimate RT60 blindly");
  drv->add_option("--cal", drv_cal, "calibration JSON for --blind");
  drv->add_option("--oracle-rir", drv_oracle, "measure RT60 from this WAV");
  drv->add_option("--steps", drv_steps, "gradient steps");
  drv->add_option("--step-size", drv_step, "base step size");
  drv->add_option("--band-radius", drv_radius, "cross-band radius");
  drv->add_option("--seed", drv_seed, "noise seed");
  drv->add_option("--report", drv_report, "write JSON report here");
  drv->add_flag("--plain", drv_plain, "plain descent instead of adaptive");
  drv->add_option("--log-every", drv_log_every, "trace every k steps");
  drv->add_flag("--resample", drv_resample, "resample inputs to 16 kHz");
  drv->add_flag("--mixdown", drv_mix, "average multichannel inputs");

  // make-pairs
  auto* pairs = app.add_subcommand("make-pairs",
                                   "synthesize (reverberant, dry) pairs");
  std::string mp_dry_dir, mp_manifest, mp_out_dir;
  int mp_count = 0;
  std::uint64_t mp_seed = 0;
  double mp_lo = 0.2, mp_hi = 1.0;
  bool mp_resample = false, mp_mix = false;
  pairs->add_option("--dry-dir", mp_dry_dir, "directory of dry WAVs")
      ->required();
  pairs->add_option("--count", mp_count, "number of pairs")->required();
  pairs->add_option("--seed", mp_seed, "sampling seed")->required();
  pairs->add_option("-o,--output", mp_manifest, "manifest CSV")->required();
  pairs->add_option("--out-dir", mp_out_dir, "directory for reverberant WAVs")
      ->required();
  pairs->add_option("--rt60-min", mp_lo, "lower rt60 bound");
  pairs->add_option("--rt60-max", mp_hi, "upper rt60 bound");
  pairs->add_flag("--resample", mp_resample, "resample inputs to 16 kHz");
  pairs->add_flag("--mixdown", mp_mix, "average multichannel inputs");

  // eval
  auto* ev = app.add_subcommand("eval", "objective metrics");
  std::string ev_ref, ev_est;
  bool ev_resample = false, ev_mix = false;
  ev->add_option("--ref", ev_ref, "reference WAV")->required();
  ev->add_option("--est", ev_est, "estimate WAV")->required();
  ev->add_flag("--resample", ev_resample, "resample inputs to 16 kHz");
  ev->add_flag("--mixdown", ev_mix, "average multichannel inputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (synth->parsed())
      return cmd_synth_rir(rt60, nm_ms, sigma, len_s, seed, out_path);
    if (reverb->parsed())
      return cmd_reverberate(rir_path, mode, band_radius, rev_in, rev_out,
                             rev_resample, rev_mix);
    if (est->parsed())
      return cmd_estimate_rt60(est_cal, est_in, est_resample, est_mix);
    if (cal->parsed())
      return cmd_calibrate(cal_manifest, cal_out, cal_resample, cal_mix);
    if (drv->parsed())
      return cmd_dereverb(drv_in, drv_out, drv_rt60, drv_blind, drv_cal,
                          drv_oracle, drv_steps, drv_step, drv_radius,
                          drv_seed, drv_report, drv_plain, drv_log_every,
                          drv_resample, drv_mix);
    if (pairs->parsed())
      return cmd_make_pairs(mp_dry_dir, mp_count, mp_seed, mp_manifest,
                            mp_out_dir, mp_lo, mp_hi, mp_resample, mp_mix);
    if (ev->parsed()) return cmd_eval(ev_ref, ev_est, ev_resample, ev_mix);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << "usage error: no subcommand\n";
  return 1;
}
