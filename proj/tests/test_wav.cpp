#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "reverbmatch/wav.hpp"
#include "support/synthetic.hpp"

using namespace reverbmatch;
using testsupport::make_noise;

namespace {

std::filesystem::path tmp_dir() {
  const auto dir = std::filesystem::path("wav_test_tmp");
  std::filesystem::create_directories(dir);
  return dir;
}

// hand-rolled stereo PCM16 file for the channel tests
void write_stereo_pcm16(const std::string& path,
                        const std::vector<std::int16_t>& left,
                        const std::vector<std::int16_t>& right,
                        std::uint32_t rate) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  const std::uint32_t n = static_cast<std::uint32_t>(left.size());
  const std::uint32_t data_size = n * 4;
  auto u32 = [&](std::uint32_t v) { f.write(reinterpret_cast<char*>(&v), 4); };
  auto u16 = [&](std::uint16_t v) { f.write(reinterpret_cast<char*>(&v), 2); };
  f.write("RIFF", 4);
  u32(36 + data_size);
  f.write("WAVE", 4);
  f.write("fmt ", 4);
  u32(16);
  u16(1);
  u16(2);
  u32(rate);
  u32(rate * 4);
  u16(4);
  u16(16);
  f.write("data", 4);
  u32(data_size);
  for (std::uint32_t i = 0; i < n; ++i) {
    u16(static_cast<std::uint16_t>(left[i]));
    u16(static_cast<std::uint16_t>(right[i]));
  }
}

}  // namespace

TEST_CASE("float32 round trip is tight") {
  const auto path = (tmp_dir() / "f32.wav").string();
  WavBuffer buf{make_noise(1, 4000, 0.3), 16000.0};
  write_wav(path, buf, WavFormat::kFloat32);
  const WavBuffer back = read_wav(path);
  REQUIRE(back.samples.size() == buf.samples.size());
  CHECK(back.sample_rate == 16000.0);
  for (std::size_t i = 0; i < buf.samples.size(); ++i)
    CHECK(std::abs(back.samples[i] - buf.samples[i]) < 1e-7);
}

TEST_CASE("pcm16 round trip stays within the quantization step") {
  const auto path = (tmp_dir() / "p16.wav").string();
  WavBuffer buf{make_noise(2, 4000, 0.25), 16000.0};
  for (double& v : buf.samples) v = std::clamp(v, -0.9, 0.9);
  write_wav(path, buf, WavFormat::kPcm16);
  const WavBuffer back = read_wav(path);
  REQUIRE(back.samples.size() == buf.samples.size());
  for (std::size_t i = 0; i < buf.samples.size(); ++i)
    CHECK(std::abs(back.samples[i] - buf.samples[i]) <=
          1.0 / 32768.0 + 1e-12);
}

TEST_CASE("foreign sample rates need the resample flag") {
  const auto path = (tmp_dir() / "sr441.wav").string();
  write_wav(path, WavBuffer{make_noise(3, 4410, 0.3), 44100.0});
  CHECK_THROWS_WITH_AS(read_wav(path), "unsupported sample rate",
                       std::runtime_error);

  WavReadOptions opts;
  opts.resample = true;
  const WavBuffer back = read_wav(path, opts);
  CHECK(back.sample_rate == 16000.0);
  // 0.1 s of audio stays 0.1 s
  CHECK(std::abs(static_cast<double>(back.samples.size()) - 1600.0) <= 2.0);
}

TEST_CASE("resampling preserves a tone") {
  const double fs_in = 44100.0, tone = 1000.0;
  std::vector<double> sine(static_cast<std::size_t>(fs_in));
  for (std::size_t n = 0; n < sine.size(); ++n)
    sine[n] = 0.5 * std::sin(2.0 * std::numbers::pi * tone * n / fs_in);
  const std::vector<double> out = resample(sine, fs_in, 16000.0);

  // Goertzel-style projections at 16 kHz
  auto power_at = [&](double hz) {
    double re = 0.0, im = 0.0;
    for (std::size_t n = 2000; n < out.size() - 2000; ++n) {
      const double a = 2.0 * std::numbers::pi * hz * n / 16000.0;
      re += out[n] * std::cos(a);
      im += out[n] * std::sin(a);
    }
    return re * re + im * im;
  };
  CHECK(power_at(1000.0) > 100.0 * power_at(1234.0));
  CHECK(power_at(1000.0) > 100.0 * power_at(700.0));

  double peak = 0.0;
  for (std::size_t n = 2000; n < out.size() - 2000; ++n)
    peak = std::max(peak, std::abs(out[n]));
  CHECK(peak == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("multichannel input needs mixdown") {
  const auto path = (tmp_dir() / "stereo.wav").string();
  std::vector<std::int16_t> left(1000), right(1000);
  for (std::size_t i = 0; i < left.size(); ++i) {
    left[i] = static_cast<std::int16_t>(1000 + i % 100);
    right[i] = static_cast<std::int16_t>(3000 - (i % 100));
  }
  write_stereo_pcm16(path, left, right, 16000);

  CHECK_THROWS_WITH_AS(read_wav(path), "multichannel input (use --mixdown)",
                       std::runtime_error);

  WavReadOptions opts;
  opts.mixdown = true;
  const WavBuffer back = read_wav(path, opts);
  REQUIRE(back.samples.size() == 1000);
  for (std::size_t i = 0; i < back.samples.size(); ++i) {
    const double expected = (left[i] + right[i]) / 2.0 / 32768.0;
    CHECK(back.samples[i] == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("unsupported encodings are rejected") {
  const auto path = (tmp_dir() / "alaw.wav").string();
  // minimal header claiming A-law (format 6)
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  auto u32 = [&](std::uint32_t v) { f.write(reinterpret_cast<char*>(&v), 4); };
  auto u16 = [&](std::uint16_t v) { f.write(reinterpret_cast<char*>(&v), 2); };
  f.write("RIFF", 4);
  u32(36 + 8);
  f.write("WAVE", 4);
  f.write("fmt ", 4);
  u32(16);
  u16(6);
  u16(1);
  u32(16000);
  u32(16000);
  u16(1);
  u16(8);
  f.write("data", 4);
  u32(8);
  for (int i = 0; i < 8; ++i) f.put(0);
  f.close();
  CHECK_THROWS_WITH_AS(read_wav(path), "unsupported format",
                       std::runtime_error);
}

TEST_CASE("missing files and junk are reported") {
  CHECK_THROWS_AS(read_wav("does_not_exist.wav"), std::runtime_error);
  const auto path = (tmp_dir() / "junk.wav").string();
  std::ofstream(path) << "not a wav";
  CHECK_THROWS_AS(read_wav(path), std::runtime_error);
}
