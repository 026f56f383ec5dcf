#include "reverbmatch/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace reverbmatch {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(static_cast<std::uint32_t>(p[0]) |
                                    (static_cast<std::uint32_t>(p[1]) << 8));
}

void append_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
  out.push_back(static_cast<char>((v >> 16) & 0xFF));
  out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

void append_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

}  // namespace

WavBuffer read_wav(const std::string& path, const WavReadOptions& opts) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open file: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(file)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw std::runtime_error("not a RIFF/WAVE file: " + path);

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data_ptr = nullptr;
  std::uint32_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
    const std::uint32_t size = read_u32(bytes.data() + pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) break;
    if (std::memcmp(id, "fmt ", 4) == 0 && size >= 16) {
      format = read_u16(bytes.data() + body);
      channels = read_u16(bytes.data() + body + 2);
      rate = read_u32(bytes.data() + body + 4);
      bits = read_u16(bytes.data() + body + 14);
    } else if (std::memcmp(id, "data", 4) == 0) {
      data_ptr = bytes.data() + body;
      data_size = size;
    }
    pos = body + size + (size % 2);  // chunks are word aligned
  }

  if (!data_ptr || channels == 0)
    throw std::runtime_error("missing fmt or data chunk: " + path);
  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool float32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !float32) throw std::runtime_error("unsupported format");
  if (channels > 1 && !opts.mixdown)
    throw std::runtime_error("multichannel input (use --mixdown)");

  const std::size_t bytes_per_sample = pcm16 ? 2 : 4;
  const std::size_t n_total = data_size / (bytes_per_sample * channels);

  WavBuffer buffer;
  buffer.sample_rate = static_cast<double>(rate);
  buffer.samples.resize(n_total);
  for (std::size_t i = 0; i < n_total; ++i) {
    double acc = 0.0;
    for (std::uint16_t c = 0; c < channels; ++c) {
      const unsigned char* p =
          data_ptr + (i * channels + c) * bytes_per_sample;
      if (pcm16) {
        std::int16_t v;
        std::memcpy(&v, p, 2);
        acc += static_cast<double>(v) / 32768.0;
      } else {
        float v;
        std::memcpy(&v, p, 4);
        acc += static_cast<double>(v);
      }
    }
    buffer.samples[i] = acc / channels;
  }

  if (buffer.sample_rate != opts.target_rate) {
    if (!opts.resample) throw std::runtime_error("unsupported sample rate");
    buffer.samples =
        resample(buffer.samples, buffer.sample_rate, opts.target_rate);
    buffer.sample_rate = opts.target_rate;
  }
  return buffer;
}

void write_wav(const std::string& path, const WavBuffer& buffer,
               WavFormat format) {
  const std::uint32_t rate = static_cast<std::uint32_t>(buffer.sample_rate);
  const std::uint16_t bits = format == WavFormat::kPcm16 ? 16 : 32;
  const std::uint16_t fmt_code =
      format == WavFormat::kPcm16 ? kFormatPcm : kFormatFloat;
  const std::uint32_t n = static_cast<std::uint32_t>(buffer.samples.size());
  const std::uint32_t data_size = n * (bits / 8);
  const bool write_fact = format == WavFormat::kFloat32;
  const std::uint32_t riff_size =
      4 + (8 + 16) + (write_fact ? 8 + 4 : 0) + (8 + data_size);

  std::string out;
  out.reserve(riff_size + 8);
  out.append("RIFF");
  append_u32(out, riff_size);
  out.append("WAVE");
  out.append("fmt ");
  append_u32(out, 16);
  append_u16(out, fmt_code);
  append_u16(out, 1);  // mono
  append_u32(out, rate);
  append_u32(out, rate * (bits / 8));
  append_u16(out, static_cast<std::uint16_t>(bits / 8));
  append_u16(out, bits);
  if (write_fact) {
    out.append("fact");
    append_u32(out, 4);
    append_u32(out, n);
  }
  out.append("data");
  append_u32(out, data_size);

  for (double s : buffer.samples) {
    if (format == WavFormat::kPcm16) {
      const double scaled = std::clamp(s, -1.0, 1.0 - 1.0 / 32768.0) * 32768.0;
      const std::int16_t v = static_cast<std::int16_t>(std::lrint(scaled));
      out.push_back(static_cast<char>(v & 0xFF));
      out.push_back(static_cast<char>((v >> 8) & 0xFF));
    } else {
      const float v = static_cast<float>(s);
      char b[4];
      std::memcpy(b, &v, 4);
      out.append(b, 4);
    }
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open file for write: " + path);
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw std::runtime_error("write failed: " + path);
}

std::vector<double> resample(const std::vector<double>& input, double in_rate,
                             double out_rate) {
  if (input.empty()) throw std::invalid_argument("empty input");
  if (in_rate <= 0.0 || out_rate <= 0.0)
    throw std::invalid_argument("rates must be positive");
  if (in_rate == out_rate) return input;

  const long in_i = std::lround(in_rate);
  const long out_i = std::lround(out_rate);
  const long g = std::gcd(in_i, out_i);
  const long up = out_i / g;
  const long down = in_i / g;

  const double cutoff = 0.9 * std::min(1.0, static_cast<double>(up) / down);
  const int half_width = 24;  // input-domain taps on each side

  const std::size_t out_len = static_cast<std::size_t>(
      (static_cast<long long>(input.size()) * up + down - 1) / down);
  std::vector<double> out(out_len, 0.0);

  for (std::size_t n = 0; n < out_len; ++n) {
    const double center =
        static_cast<double>(n) * down / static_cast<double>(up);
    const long k_lo = std::lround(std::ceil(center - half_width));
    const long k_hi = std::lround(std::floor(center + half_width));
    double acc = 0.0;
    for (long k = std::max(0L, k_lo);
         k <= std::min<long>(static_cast<long>(input.size()) - 1, k_hi); ++k) {
      const double x = center - static_cast<double>(k);
      const double sx = cutoff * x;
      const double sinc =
          sx == 0.0 ? 1.0
                    : std::sin(std::numbers::pi * sx) / (std::numbers::pi * sx);
      // Blackman window over the kernel support
      const double u = 0.5 * (x / half_width + 1.0);
      const double window =
          0.42 - 0.5 * std::cos(2.0 * std::numbers::pi * u) +
          0.08 * std::cos(4.0 * std::numbers::pi * u);
      acc += input[static_cast<std::size_t>(k)] * cutoff * sinc * window;
    }
    out[n] = acc;
  }
  return out;
}

}  // namespace reverbmatch
