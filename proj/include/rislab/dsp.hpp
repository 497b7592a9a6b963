// SPDX-License-Identifier: Apache-2.0
//
// Small DSP toolbox shared by the transmitter, the channel model and the
// receiver.
#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace rislab::dsp {

using cdouble = std::complex<double>;

/// Root-raised-cosine taps, span_symbols * sps + 1 long, normalized to unit energy.
std::vector<double> rrc_taps(double rolloff, std::size_t span_symbols, std::size_t sps);

/// Full linear convolution, length x.size() + h.size() - 1.
std::vector<cdouble> convolve(std::span<const cdouble> x, std::span<const double> h);

/// Band-limited value of x at fractional index t (Blackman-windowed sinc,
/// 16 taps). Samples outside [0, size) are treated as zero.
cdouble interpolate(std::span<const cdouble> x, double t);

double mean_power(std::span<const cdouble> x);

/// Forward DFT of fixed length backed by FFTW. Inputs shorter than the
/// transform length are zero padded, longer ones truncated.
class Fft {
public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::size_t size() const { return n_; }
  std::vector<cdouble> forward(std::span<const cdouble> in);

private:
  struct Impl;
  std::size_t n_;
  std::unique_ptr<Impl> impl_;
};

/// Per-thread cached transform of length n.
Fft& cached_fft(std::size_t n);

}  // namespace rislab::dsp
