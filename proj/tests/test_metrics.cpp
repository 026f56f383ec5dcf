#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "reverbmatch/metrics.hpp"
#include "support/synthetic.hpp"

using namespace reverbmatch;
using testsupport::make_noise;

namespace {

const StftConfig kConfig = StftConfig::make(512, 256, 16000.0);

// returns noise orthogonalized against ref and scaled to the given energy
std::vector<double> orthogonal_noise(const std::vector<double>& ref,
                                     double energy, std::uint64_t seed) {
  std::vector<double> noise = make_noise(seed, ref.size(), 1.0);
  double dot = 0.0, ref_energy = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    dot += noise[i] * ref[i];
    ref_energy += ref[i] * ref[i];
  }
  double n_energy = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    noise[i] -= dot / ref_energy * ref[i];
    n_energy += noise[i] * noise[i];
  }
  const double scale = std::sqrt(energy / n_energy);
  for (double& v : noise) v *= scale;
  return noise;
}

}  // namespace

TEST_CASE("sisdr caps at +100 for an exact or rescaled estimate") {
  const std::vector<double> ref = make_noise(1, 8000, 0.4);
  CHECK(sisdr(ref, ref) == 100.0);
  std::vector<double> doubled(ref);
  for (double& v : doubled) v *= 2.0;
  CHECK(sisdr(ref, doubled) == 100.0);
  std::vector<double> scaled(ref);
  for (double& v : scaled) v *= 0.037;
  CHECK(sisdr(ref, scaled) == 100.0);
}

TEST_CASE("orthogonal noise at a tenth of the energy gives 10 dB") {
  const std::vector<double> ref = make_noise(2, 16000, 0.5);
  double ref_energy = 0.0;
  for (double v : ref) ref_energy += v * v;

  std::vector<double> est(ref);
  const std::vector<double> noise =
      orthogonal_noise(ref, ref_energy / 10.0, 3);
  for (std::size_t i = 0; i < est.size(); ++i) est[i] += noise[i];
  CHECK(sisdr(ref, est) == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("sisdr decreases as orthogonal noise grows") {
  const std::vector<double> ref = make_noise(4, 8000, 0.5);
  double ref_energy = 0.0;
  for (double v : ref) ref_energy += v * v;

  double previous = 1e9;
  for (double ratio : {0.01, 0.1, 0.5, 2.0}) {
    std::vector<double> est(ref);
    const std::vector<double> noise =
        orthogonal_noise(ref, ref_energy * ratio, 5);
    for (std::size_t i = 0; i < est.size(); ++i) est[i] += noise[i];
    const double value = sisdr(ref, est);
    CHECK(value < previous);
    previous = value;
  }
}

TEST_CASE("sisdr rejects a silent reference and truncates to the overlap") {
  const std::vector<double> silent(1000, 0.0);
  const std::vector<double> est = make_noise(6, 1000, 1.0);
  CHECK_THROWS_WITH_AS(sisdr(silent, est), "silent reference",
                       std::runtime_error);

  // truncation: appending garbage to the estimate beyond ref's length is
  // invisible
  const std::vector<double> ref = make_noise(7, 500, 1.0);
  std::vector<double> longer(ref);
  longer.resize(800, 123.0);
  CHECK(sisdr(ref, longer) == 100.0);
}

TEST_CASE("log-spectral distance identities") {
  const std::vector<double> x = make_noise(8, 16000, 0.5);
  CHECK(log_spectral_distance(x, x, kConfig) == 0.0);

  std::vector<double> scaled(x);
  for (double& v : scaled) v *= 10.0;
  CHECK(log_spectral_distance(x, scaled, kConfig) ==
        doctest::Approx(20.0).epsilon(1e-4));
}

TEST_CASE("log-spectral distance matches a direct recomputation") {
  const std::vector<double> a = make_noise(9, 8000, 0.5);
  const std::vector<double> b = make_noise(10, 8000, 0.5);
  const double fast = log_spectral_distance(a, b, kConfig);

  const ComplexSpectrogram sa = stft(a, kConfig);
  const ComplexSpectrogram sb = stft(b, kConfig);
  double acc = 0.0;
  for (int t = 0; t < sa.n_frames; ++t) {
    double frame = 0.0;
    for (int f = 0; f < sa.n_bins; ++f) {
      const double da = 20.0 * std::log10(std::abs(sa.at(f, t)) + 1e-8);
      const double db = 20.0 * std::log10(std::abs(sb.at(f, t)) + 1e-8);
      frame += (da - db) * (da - db);
    }
    acc += frame / sa.n_bins;
  }
  const double slow = std::sqrt(acc / sa.n_frames);
  CHECK(std::abs(fast - slow) < 1e-10);
}

TEST_CASE("log-spectral distance is symmetric") {
  const std::vector<double> a = make_noise(11, 6000, 0.5);
  const std::vector<double> b = make_noise(12, 6000, 0.5);
  CHECK(log_spectral_distance(a, b, kConfig) ==
        doctest::Approx(log_spectral_distance(b, a, kConfig))
            .epsilon(1e-12));
}

TEST_CASE("length mismatch beyond one frame is rejected") {
  const std::vector<double> a = make_noise(13, 6000, 0.5);
  const std::vector<double> b = make_noise(14, 6000 + 257, 0.5);
  CHECK_THROWS_WITH_AS(log_spectral_distance(a, b, kConfig),
                       "length mismatch beyond one frame",
                       std::invalid_argument);
  const std::vector<double> c = make_noise(15, 6000 + 200, 0.5);
  CHECK_NOTHROW(log_spectral_distance(a, c, kConfig));
}

TEST_CASE("evaluate bundles both metrics") {
  const std::vector<double> x = make_noise(16, 16000, 0.5);
  const MetricReport report = evaluate(x, x, kConfig);
  CHECK(report.sisdr_db == 100.0);
  CHECK(report.lsd_db == 0.0);
}
