#include "reverbmatch/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace reverbmatch {

namespace {
// The FFTW planner is not thread safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft::Fft(std::size_t size) : size_(size) {
  if (size == 0) throw std::invalid_argument("FFT size must be positive");
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_complex* buf = fftw_alloc_complex(size);
  if (!buf) throw std::bad_alloc();
  fwd_ = fftw_plan_dft_1d(static_cast<int>(size), buf, buf, FFTW_FORWARD,
                          FFTW_ESTIMATE | FFTW_UNALIGNED);
  bwd_ = fftw_plan_dft_1d(static_cast<int>(size), buf, buf, FFTW_BACKWARD,
                          FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  if (!fwd_ || !bwd_) throw std::runtime_error("FFTW plan creation failed");
}

Fft::~Fft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  if (bwd_) fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void Fft::forward(std::complex<double>* buf) const {
  fftw_complex* p = reinterpret_cast<fftw_complex*>(buf);
  fftw_execute_dft(static_cast<fftw_plan>(fwd_), p, p);
}

void Fft::backward(std::complex<double>* buf) const {
  fftw_complex* p = reinterpret_cast<fftw_complex*>(buf);
  fftw_execute_dft(static_cast<fftw_plan>(bwd_), p, p);
}

std::vector<double> fft_convolve(const std::vector<double>& a,
                                 const std::vector<double>& b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("empty input");
  const std::size_t out_len = a.size() + b.size() - 1;
  std::size_t m = 1;
  while (m < out_len) m <<= 1;

  Fft fft(m);
  std::vector<std::complex<double>> fa(m), fb(m);
  for (std::size_t i = 0; i < a.size(); ++i) fa[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) fb[i] = b[i];
  fft.forward(fa.data());
  fft.forward(fb.data());
  for (std::size_t i = 0; i < m; ++i) fa[i] *= fb[i];
  fft.backward(fa.data());

  std::vector<double> out(out_len);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < out_len; ++i) out[i] = fa[i].real() * scale;
  return out;
}

}  // namespace reverbmatch
