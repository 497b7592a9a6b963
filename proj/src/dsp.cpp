// SPDX-License-Identifier: Apache-2.0
#include "rislab/dsp.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace rislab::dsp {

namespace {
constexpr double pi = std::numbers::pi;
constexpr int kInterpHalfWidth = 8;

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex()
{
  static std::mutex m;
  return m;
}
}  // namespace

std::vector<double> rrc_taps(double rolloff, std::size_t span_symbols, std::size_t sps)
{
  if (!(rolloff > 0.0 && rolloff <= 1.0)) throw std::invalid_argument("rrc_taps: rolloff must be in (0, 1]");
  if (span_symbols == 0 || sps == 0) throw std::invalid_argument("rrc_taps: span and sps must be > 0");
  const std::size_t n = span_symbols * sps + 1;
  const double a = rolloff;
  std::vector<double> h(n);
  const double center = static_cast<double>(n - 1) / 2.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (static_cast<double>(i) - center) / static_cast<double>(sps);
    if (std::abs(t) < 1e-12) {
      h[i] = 1.0 - a + 4.0 * a / pi;
    } else if (std::abs(std::abs(t) - 1.0 / (4.0 * a)) < 1e-12) {
      h[i] = a / std::sqrt(2.0) *
             ((1.0 + 2.0 / pi) * std::sin(pi / (4.0 * a)) + (1.0 - 2.0 / pi) * std::cos(pi / (4.0 * a)));
    } else {
      const double num = std::sin(pi * t * (1.0 - a)) + 4.0 * a * t * std::cos(pi * t * (1.0 + a));
      const double den = pi * t * (1.0 - (4.0 * a * t) * (4.0 * a * t));
      h[i] = num / den;
    }
  }
  double energy = 0.0;
  for (double v : h) energy += v * v;
  const double norm = 1.0 / std::sqrt(energy);
  for (double& v : h) v *= norm;
  return h;
}

std::vector<cdouble> convolve(std::span<const cdouble> x, std::span<const double> h)
{
  if (x.empty() || h.empty()) return {};
  std::vector<cdouble> y(x.size() + h.size() - 1, cdouble{0.0, 0.0});
  for (std::size_t i = 0; i < x.size(); ++i) {
    const cdouble xi = x[i];
    if (xi == cdouble{0.0, 0.0}) continue;
    for (std::size_t k = 0; k < h.size(); ++k) y[i + k] += xi * h[k];
  }
  return y;
}

cdouble interpolate(std::span<const cdouble> x, double t)
{
  const double base = std::floor(t);
  const double frac = t - base;
  const auto ib = static_cast<long>(base);
  if (frac == 0.0) {
    return (ib >= 0 && ib < static_cast<long>(x.size())) ? x[static_cast<std::size_t>(ib)] : cdouble{};
  }
  cdouble acc{0.0, 0.0};
  for (int k = -kInterpHalfWidth + 1; k <= kInterpHalfWidth; ++k) {
    const long idx = ib + k;
    if (idx < 0 || idx >= static_cast<long>(x.size())) continue;
    const double u = t - static_cast<double>(idx);  // in (-H, H)
    const double sinc = std::sin(pi * u) / (pi * u);
    const double w = 0.42 + 0.5 * std::cos(pi * u / kInterpHalfWidth) +
                     0.08 * std::cos(2.0 * pi * u / kInterpHalfWidth);
    acc += x[static_cast<std::size_t>(idx)] * (sinc * w);
  }
  return acc;
}

double mean_power(std::span<const cdouble> x)
{
  if (x.empty()) return 0.0;
  double p = 0.0;
  for (const auto& z : x) p += std::norm(z);
  return p / static_cast<double>(x.size());
}

struct Fft::Impl {
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan plan = nullptr;
};

Fft::Fft(std::size_t n) : n_(n), impl_(std::make_unique<Impl>())
{
  if (n == 0) throw std::invalid_argument("Fft: length must be > 0");
  std::lock_guard lock(planner_mutex());
  impl_->in = fftw_alloc_complex(n);
  impl_->out = fftw_alloc_complex(n);
  impl_->plan = fftw_plan_dft_1d(static_cast<int>(n), impl_->in, impl_->out, FFTW_FORWARD, FFTW_ESTIMATE);
}

Fft::~Fft()
{
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(impl_->plan);
  fftw_free(impl_->in);
  fftw_free(impl_->out);
}

std::vector<cdouble> Fft::forward(std::span<const cdouble> in)
{
  const std::size_t m = std::min(in.size(), n_);
  for (std::size_t i = 0; i < n_; ++i) {
    impl_->in[i][0] = i < m ? in[i].real() : 0.0;
    impl_->in[i][1] = i < m ? in[i].imag() : 0.0;
  }
  fftw_execute(impl_->plan);
  std::vector<cdouble> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = {impl_->out[i][0], impl_->out[i][1]};
  return out;
}

Fft& cached_fft(std::size_t n)
{
  thread_local std::map<std::size_t, std::unique_ptr<Fft>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Fft>(n);
  return *slot;
}

}  // namespace rislab::dsp
