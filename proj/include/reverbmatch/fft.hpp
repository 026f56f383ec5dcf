#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace reverbmatch {

// RAII wrapper over FFTW complex-to-complex plans of one size.
// Plans are created FFTW_ESTIMATE | FFTW_UNALIGNED so execute() may run on
// any caller buffer; planner calls are serialized internally. A constructed
// Fft is immutable and safe to share across threads.
class Fft {
 public:
  explicit Fft(std::size_t size);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::size_t size() const { return size_; }

  // In-place transform with kernel e^{-j2pi fn/N}, unnormalized.
  void forward(std::complex<double>* buf) const;
  // In-place transform with kernel e^{+j2pi fn/N}, unnormalized.
  void backward(std::complex<double>* buf) const;

 private:
  std::size_t size_ = 0;
  void* fwd_ = nullptr;
  void* bwd_ = nullptr;
};

// Full linear convolution of two real sequences, length a+b-1.
std::vector<double> fft_convolve(const std::vector<double>& a,
                                 const std::vector<double>& b);

}  // namespace reverbmatch
