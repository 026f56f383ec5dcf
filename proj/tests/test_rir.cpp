#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "reverbmatch/rir.hpp"

using namespace reverbmatch;

TEST_CASE("defaults follow the model constants") {
  const AcousticParams p = AcousticParams::defaults(0.5);
  CHECK(p.mixing_time == 320);  // 20 ms at 16 kHz
  CHECK(p.sigma == 0.02);
  CHECK(p.rir_len == 12000);  // 1.5 * rt60 * fs
  const AcousticParams q = AcousticParams::defaults(1.4);
  CHECK(q.rir_len == 24000);  // capped at 1.5 s
}

TEST_CASE("direct path and mixing gap are exact") {
  const AcousticParams p = AcousticParams::defaults(0.5);
  const Rir rir = synth_rir(p, 99);
  CHECK(rir.samples[0] == 1.0);
  for (int n = 1; n <= p.mixing_time; ++n) CHECK(rir.samples[n] == 0.0);
  // tail is nonzero
  double tail = 0.0;
  for (std::size_t n = p.mixing_time + 1; n < rir.samples.size(); ++n)
    tail += std::abs(rir.samples[n]);
  CHECK(tail > 0.0);
}

TEST_CASE("tail sits under the stated exponential envelope") {
  const AcousticParams p = AcousticParams::defaults(0.5);
  const Rir rir = synth_rir(p, 7);
  const double decay = 3.0 * std::log(10.0) / (p.rt60 * p.sample_rate);
  // envelope at n = rt60 * fs is exactly 1e-3 of the n = 0 anchor
  CHECK(std::exp(-decay * p.rt60 * p.sample_rate) ==
        doctest::Approx(1e-3).epsilon(1e-12));

  // recover the noise draw and bound the samples by its realized maximum
  double max_b = 0.0;
  for (std::size_t n = p.mixing_time + 1; n < rir.samples.size(); ++n)
    max_b = std::max(max_b, std::abs(rir.samples[n]) * std::exp(decay * n));
  CHECK(max_b > 0.0);
  for (std::size_t n = p.mixing_time + 1; n < rir.samples.size(); ++n) {
    CHECK(std::abs(rir.samples[n]) <=
          max_b * std::exp(-decay * n) * (1.0 + 1e-12));
  }

  // half-normal draws: mean |b| close to sigma * sqrt(2/pi)
  double mean_b = 0.0;
  int count = 0;
  for (std::size_t n = p.mixing_time + 1; n < rir.samples.size(); ++n) {
    mean_b += std::abs(rir.samples[n]) * std::exp(decay * n);
    ++count;
  }
  mean_b /= count;
  CHECK(mean_b ==
        doctest::Approx(p.sigma * std::sqrt(2.0 / std::numbers::pi))
            .epsilon(0.05));
}

TEST_CASE("gaussian variant is signed") {
  const AcousticParams p = AcousticParams::defaults(0.4);
  const Rir rir = synth_rir(p, 11, TailNoise::kGaussian);
  bool has_negative = false;
  for (std::size_t n = p.mixing_time + 1; n < rir.samples.size(); ++n)
    if (rir.samples[n] < 0.0) has_negative = true;
  CHECK(has_negative);
}

TEST_CASE("synthesis is bit-deterministic in the seed") {
  const AcousticParams p = AcousticParams::defaults(0.7);
  CHECK(synth_rir(p, 1234).samples == synth_rir(p, 1234).samples);
  CHECK(synth_rir(p, 1234).samples != synth_rir(p, 1235).samples);
}

TEST_CASE("validation rejects a RIR shorter than the mixing time") {
  AcousticParams p = AcousticParams::defaults(0.5);
  p.rir_len = p.mixing_time;
  CHECK_THROWS_WITH_AS(synth_rir(p, 0), "RIR shorter than mixing time",
                       std::invalid_argument);
}

TEST_CASE("normalize_align shifts and rescales") {
  const Rir a{{0.0, 0.0, 0.5, 0.1}, 16000.0};
  const Rir a_out = normalize_align(a);
  REQUIRE(a_out.samples.size() == 2);
  CHECK(a_out.samples[0] == 1.0);
  CHECK(a_out.samples[1] == doctest::Approx(0.2).epsilon(1e-15));

  const Rir b{{0.0, -0.4, 0.2}, 16000.0};
  const Rir b_out = normalize_align(b);
  REQUIRE(b_out.samples.size() == 2);
  CHECK(b_out.samples[0] == 1.0);
  CHECK(b_out.samples[1] == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("normalize_align is idempotent on synthetic responses") {
  const Rir rir = synth_rir(AcousticParams::defaults(0.3), 5);
  const Rir once = normalize_align(rir);
  CHECK(once.samples == rir.samples);  // already aligned
  CHECK(normalize_align(once).samples == once.samples);
}

TEST_CASE("normalize_align rejects silence") {
  CHECK_THROWS_WITH_AS(normalize_align(Rir{{0.0, 0.0, 0.0}, 16000.0}),
                       "silent RIR", std::runtime_error);
}

TEST_CASE("schroeder_rt60 recovers a deterministic exponential") {
  const double rt60 = 0.5, fs = 16000.0;
  const double decay = 3.0 * std::log(10.0) / (rt60 * fs);
  Rir rir;
  rir.sample_rate = fs;
  rir.samples.resize(8000);
  for (std::size_t n = 0; n < rir.samples.size(); ++n)
    rir.samples[n] = std::exp(-decay * static_cast<double>(n));
  CHECK(schroeder_rt60(rir) == doctest::Approx(rt60).epsilon(0.02));
}

TEST_CASE("schroeder_rt60 tracks the synthesis target") {
  for (double rt60 : {0.2, 0.8}) {
    double mean = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
      mean += schroeder_rt60(synth_rir(AcousticParams::defaults(rt60), seed));
    mean /= 10.0;
    CHECK(mean == doctest::Approx(rt60).epsilon(0.10));
  }
}

TEST_CASE("energy decay curve of a synthetic response is non-increasing") {
  const Rir rir = synth_rir(AcousticParams::defaults(0.6), 21);
  double acc = 0.0;
  std::vector<double> edc(rir.samples.size());
  for (std::size_t i = rir.samples.size(); i-- > 0;) {
    acc += rir.samples[i] * rir.samples[i];
    edc[i] = acc;
  }
  for (std::size_t i = 1; i < edc.size(); ++i) CHECK(edc[i] <= edc[i - 1]);
}

TEST_CASE("schroeder_rt60 error paths") {
  CHECK_THROWS_AS(schroeder_rt60(Rir{std::vector<double>(100, 1.0), 16000.0}),
                  std::invalid_argument);  // shorter than 0.1 s

  // flat curve: energy parked at the end never crosses -5 dB
  std::vector<double> flat(1600, 0.0);
  flat[0] = 1.0;
  flat[1599] = 1.0;
  CHECK_THROWS_WITH_AS(schroeder_rt60(Rir{flat, 16000.0}),
                       "insufficient decay range", std::runtime_error);
}

TEST_CASE("mix_seed separates streams") {
  CHECK(mix_seed(0, 0) != mix_seed(0, 1));
  CHECK(mix_seed(1, 0) != mix_seed(2, 0));
  CHECK(mix_seed(42, 7) == mix_seed(42, 7));
}
