// SPDX-License-Identifier: Apache-2.0
#include "rislab/phy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>

#include "rislab/dsp.hpp"
#include "rislab/seeding.hpp"

namespace rislab {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double kInvSqrt2 = 0.70710678118654752440;

// Slope of the Gardner detector's S-curve at lock, per sample of timing
// error, for unit-energy QPSK through RRC(0.5) x RRC(0.5) at 4 samples per
// symbol after AGC.
constexpr double kGardnerGain = 0.41;

struct LoopGains {
  double proportional;
  double integral;
};

// Second-order loop with a proportional-plus-integral filter.
LoopGains loop_gains(double bandwidth, double damping, double detector_gain)
{
  const double theta = bandwidth / (damping + 0.25 / damping);
  const double d = 1.0 + 2.0 * damping * theta + theta * theta;
  return {4.0 * damping * theta / d / detector_gain, 4.0 * theta * theta / d / detector_gain};
}

cdouble slice(cdouble z)
{
  return {z.real() >= 0.0 ? kInvSqrt2 : -kInvSqrt2, z.imag() >= 0.0 ? kInvSqrt2 : -kInvSqrt2};
}

double coarse_cfo(std::span<const cdouble> x, const FrameSpec& spec)
{
  std::vector<cdouble> p4(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const cdouble sq = x[i] * x[i];
    p4[i] = sq * sq;
  }
  auto& fft = dsp::cached_fft(spec.coarse_fft_len);
  const auto spectrum = fft.forward(p4);
  std::size_t peak = 0;
  double best = -1.0;
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const double m = std::norm(spectrum[k]);
    if (m > best) {
      best = m;
      peak = k;
    }
  }
  const auto n = static_cast<long>(spectrum.size());
  long signed_bin = static_cast<long>(peak);
  if (signed_bin >= n / 2) signed_bin -= n;
  return static_cast<double>(signed_bin) * spec.sample_rate_hz / static_cast<double>(n) / 4.0;
}

// Square-law (Oerder-Meyr) estimate of the symbol phase, in samples, used
// to start the Gardner loop close to lock.
double initial_timing(std::span<const cdouble> x, std::size_t sps)
{
  cdouble acc{0.0, 0.0};
  for (std::size_t n = 0; n < x.size(); ++n)
    acc += std::norm(x[n]) * std::polar(1.0, -2.0 * pi * static_cast<double>(n % sps) / static_cast<double>(sps));
  return -static_cast<double>(sps) * std::arg(acc) / (2.0 * pi);
}

std::vector<cdouble> gardner_recover(std::span<const cdouble> x, const FrameSpec& spec)
{
  const auto sps = static_cast<double>(spec.samples_per_symbol);
  const LoopGains g = loop_gains(spec.loop_bandwidth, spec.loop_damping, kGardnerGain);
  double t = initial_timing(x, spec.samples_per_symbol);
  while (t < sps) t += sps;

  std::vector<cdouble> out;
  out.reserve(x.size() / spec.samples_per_symbol + 1);
  const double last = static_cast<double>(x.size()) - 1.0;
  cdouble prev = dsp::interpolate(x, t);
  out.push_back(prev);
  double integrator = 0.0;
  t += sps;
  while (t <= last) {
    const cdouble cur = dsp::interpolate(x, t);
    const cdouble mid = dsp::interpolate(x, t - sps / 2.0);
    // Positive error means the strobe is late.
    const double err = std::real(std::conj(mid) * (cur - prev));
    integrator += g.integral * err;
    const double adjust = std::clamp(g.proportional * err + integrator, -sps / 4.0, sps / 4.0);
    out.push_back(cur);
    prev = cur;
    t += sps - adjust;
  }
  return out;
}

struct CarrierResult {
  std::vector<cdouble> symbols;
  double freq_rad_per_symbol = 0.0;
};

CarrierResult carrier_track(std::span<const cdouble> x, const FrameSpec& spec)
{
  // Fourth-power phase estimate seeds the loop; QPSK on the diagonals has s^4 = -1.
  cdouble acc{0.0, 0.0};
  for (const auto& z : x) {
    const cdouble sq = z * z;
    acc += sq * sq;
  }
  double phase = std::arg(-acc) / 4.0;
  const LoopGains g = loop_gains(spec.loop_bandwidth, spec.loop_damping, 1.0);
  double freq = 0.0;
  CarrierResult res;
  res.symbols.reserve(x.size());
  for (const auto& xk : x) {
    const cdouble z = xk * std::polar(1.0, -phase);
    const double err = std::imag(z * std::conj(slice(z)));
    freq += g.integral * err;
    phase += g.proportional * err + freq;
    res.symbols.push_back(z);
  }
  res.freq_rad_per_symbol = freq;
  return res;
}

}  // namespace

void FrameSpec::validate() const
{
  if (preamble_repeats < 1) throw std::invalid_argument("FrameSpec: preamble_repeats must be >= 1");
  if (payload_bits == 0 || payload_bits % 2 != 0)
    throw std::invalid_argument("FrameSpec: payload_bits must be even and > 0");
  if (samples_per_symbol < 2 || samples_per_symbol % 2 != 0)
    throw std::invalid_argument("FrameSpec: samples_per_symbol must be even and >= 2");
  if (!(rrc_rolloff > 0.0 && rrc_rolloff <= 1.0))
    throw std::invalid_argument("FrameSpec: rrc_rolloff must be in (0, 1]");
  if (rrc_span_symbols < 2 || rrc_span_symbols % 2 != 0)
    throw std::invalid_argument("FrameSpec: rrc_span_symbols must be even and >= 2");
  if (!(sample_rate_hz > 0.0)) throw std::invalid_argument("FrameSpec: sample_rate_hz must be > 0");
  if (coarse_fft_len < 16 || (coarse_fft_len & (coarse_fft_len - 1)) != 0)
    throw std::invalid_argument("FrameSpec: coarse_fft_len must be a power of two >= 16");
  if (!(loop_bandwidth > 0.0 && loop_bandwidth < 0.5))
    throw std::invalid_argument("FrameSpec: loop_bandwidth must be in (0, 0.5)");
  if (!(loop_damping > 0.0)) throw std::invalid_argument("FrameSpec: loop_damping must be > 0");
  if (!(sync_threshold > 0.0 && sync_threshold < 1.0))
    throw std::invalid_argument("FrameSpec: sync_threshold must be in (0, 1)");
  if (transport_bits < 2 || transport_bits > 16)
    throw std::invalid_argument("FrameSpec: transport_bits must be in [2, 16]");
}

void ImpairmentProfile::validate(const FrameSpec& spec) const
{
  if (!(cfo_max_hz >= 0.0 && cfo_max_hz < spec.sample_rate_hz / 8.0))
    throw std::invalid_argument("ImpairmentProfile: cfo_max_hz must be in [0, sample_rate/8)");
  if (!(phase_offset_max_rad >= 0.0 && phase_offset_max_rad <= pi))
    throw std::invalid_argument("ImpairmentProfile: phase_offset_max_rad must be in [0, pi]");
  if (!(timing_offset_max_symbols >= 0.0 && timing_offset_max_symbols <= 0.5))
    throw std::invalid_argument("ImpairmentProfile: timing_offset_max_symbols must be in [0, 0.5]");
  if (std::isnan(snr_db)) throw std::invalid_argument("ImpairmentProfile: snr_db is NaN");
}

ImpairmentSpec ImpairmentProfile::draw(const FrameSpec& spec, std::uint64_t seed) const
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ImpairmentSpec imp;
  imp.cfo_hz = cfo_max_hz * u(rng);
  imp.phase_offset_rad = phase_offset_max_rad * u(rng);
  imp.timing_offset_samples =
      timing_offset_max_symbols * static_cast<double>(spec.samples_per_symbol) * u(rng);
  imp.snr_db = snr_db;
  return imp;
}

std::vector<cdouble> map_qpsk(std::span<const std::uint8_t> bits)
{
  if (bits.size() % 2 != 0) throw std::invalid_argument("map_qpsk: odd number of bits");
  std::vector<cdouble> out(bits.size() / 2);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const std::uint8_t b0 = bits[2 * k];
    const std::uint8_t b1 = bits[2 * k + 1];
    if (b0 > 1 || b1 > 1) throw std::invalid_argument("map_qpsk: bits must be 0 or 1");
    out[k] = {b1 ? -kInvSqrt2 : kInvSqrt2, b0 ? -kInvSqrt2 : kInvSqrt2};
  }
  return out;
}

Bits demap_qpsk(std::span<const cdouble> symbols)
{
  Bits out(symbols.size() * 2);
  for (std::size_t k = 0; k < symbols.size(); ++k) {
    out[2 * k] = symbols[k].imag() < 0.0;
    out[2 * k + 1] = symbols[k].real() < 0.0;
  }
  return out;
}

std::vector<cdouble> preamble_symbols(const FrameSpec& spec)
{
  std::vector<cdouble> p;
  p.reserve(spec.preamble_symbols());
  for (std::size_t r = 0; r < spec.preamble_repeats; ++r)
    for (int chip : kBarker13) p.emplace_back(chip * kInvSqrt2, chip * kInvSqrt2);
  return p;
}

FrameWaveform build_frame(const FrameSpec& spec, std::span<const std::uint8_t> payload_bits)
{
  spec.validate();
  if (payload_bits.size() != spec.payload_bits)
    throw std::invalid_argument("build_frame: payload has " + std::to_string(payload_bits.size()) +
                                " bits, spec requires " + std::to_string(spec.payload_bits));
  FrameWaveform f;
  f.spec = spec;
  f.truth_bits.assign(payload_bits.begin(), payload_bits.end());
  f.payload_symbols = map_qpsk(payload_bits);

  std::vector<cdouble> symbols = preamble_symbols(spec);
  symbols.insert(symbols.end(), f.payload_symbols.begin(), f.payload_symbols.end());

  const std::size_t sps = spec.samples_per_symbol;
  std::vector<cdouble> up(symbols.size() * sps, cdouble{0.0, 0.0});
  for (std::size_t k = 0; k < symbols.size(); ++k) up[k * sps] = symbols[k];
  // Full convolution: (symbols + span) * sps samples.
  const auto taps = dsp::rrc_taps(spec.rrc_rolloff, spec.rrc_span_symbols, sps);
  f.samples = dsp::convolve(up, taps);
  return f;
}

Bits random_payload(const FrameSpec& spec, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  Bits bits(spec.payload_bits);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() >> 63);
  return bits;
}

std::vector<cdouble> apply_channel(const FrameWaveform& frame, const LinkChannel& channel,
                                   const ImpairmentSpec& imp, std::uint64_t seed)
{
  const auto& x = frame.samples;
  const double fs = frame.spec.sample_rate_hz;
  std::vector<cdouble> y(x.size());
  const bool rotate = imp.cfo_hz != 0.0 || imp.phase_offset_rad != 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    cdouble v = imp.timing_offset_samples == 0.0
                    ? x[n]
                    : dsp::interpolate(x, static_cast<double>(n) - imp.timing_offset_samples);
    v *= channel.gain;
    if (rotate)
      v *= std::polar(1.0, 2.0 * pi * imp.cfo_hz * static_cast<double>(n) / fs + imp.phase_offset_rad);
    y[n] = v;
  }
  if (std::isfinite(imp.snr_db)) {
    const double noise_var = dsp::mean_power(x) / std::pow(10.0, imp.snr_db / 10.0);
    const double sigma = std::sqrt(noise_var / 2.0);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01(0.0, 1.0);
    for (auto& v : y) {
      const double re = n01(rng);
      const double im = n01(rng);
      v += cdouble{sigma * re, sigma * im};
    }
  }
  return y;
}

RxResult rx_chain(std::span<const cdouble> samples, const FrameSpec& spec)
{
  spec.validate();
  RxResult res;
  if (samples.size() < spec.frame_samples() / 2) return res;

  // (1) coarse frequency compensation
  const double cfo_coarse = coarse_cfo(samples, spec);
  std::vector<cdouble> derot(samples.size());
  for (std::size_t n = 0; n < samples.size(); ++n)
    derot[n] = samples[n] * std::polar(1.0, -2.0 * pi * cfo_coarse * static_cast<double>(n) /
                                                 spec.sample_rate_hz);

  // (2) matched filter, then AGC towards the steady-state power of a
  // unit-energy raised-cosine stream.
  const auto taps = dsp::rrc_taps(spec.rrc_rolloff, spec.rrc_span_symbols, spec.samples_per_symbol);
  auto mf = dsp::convolve(derot, taps);
  const double p = dsp::mean_power(mf);
  if (!(p > 0.0) || !std::isfinite(p)) {
    res.est_cfo_hz = cfo_coarse;
    return res;
  }
  const double agc = std::sqrt((1.0 - spec.rrc_rolloff / 4.0) / p);
  for (auto& v : mf) v *= agc;

  // (3) timing recovery, (4) fine carrier recovery
  const auto timed = gardner_recover(mf, spec);
  const auto carrier = carrier_track(timed, spec);
  res.est_cfo_hz = cfo_coarse + carrier.freq_rad_per_symbol * spec.symbol_rate_hz() / (2.0 * pi);
  const auto& z = carrier.symbols;

  // (5) frame sync on the normalized preamble correlation
  const auto pre = preamble_symbols(spec);
  const std::size_t np = pre.size();
  const std::size_t nframe = spec.frame_symbols();
  if (z.size() < nframe) return res;
  double best = -1.0;
  std::size_t start = 0;
  cdouble best_corr{};
  for (std::size_t s = 0; s + nframe <= z.size(); ++s) {
    cdouble c{0.0, 0.0};
    double e = 0.0;
    for (std::size_t k = 0; k < np; ++k) {
      c += z[s + k] * std::conj(pre[k]);
      e += std::norm(z[s + k]);
    }
    const double metric = e > 0.0 ? std::abs(c) / std::sqrt(e * static_cast<double>(np)) : 0.0;
    if (metric > best) {
      best = metric;
      start = s;
      best_corr = c;
    }
  }
  res.sync_metric = best;
  res.frame_start = start;
  if (best < spec.sync_threshold) return res;

  // (6) quadrant ambiguity
  const double quarter = std::round(std::arg(best_corr) / (pi / 2.0));
  const cdouble derotate = std::polar(1.0, -quarter * pi / 2.0);

  // (7) one-tap gain from the preamble
  cdouble g{0.0, 0.0};
  for (std::size_t k = 0; k < np; ++k) g += z[start + k] * derotate * std::conj(pre[k]);
  g /= static_cast<double>(np);
  if (std::abs(g) == 0.0) return res;
  const cdouble eq = derotate / g;

  // (8) decisions
  res.synced_symbols.resize(spec.payload_symbols());
  for (std::size_t k = 0; k < res.synced_symbols.size(); ++k)
    res.synced_symbols[k] = z[start + np + k] * eq;
  res.recovered_bits = demap_qpsk(res.synced_symbols);
  res.sync_ok = true;
  return res;
}

void write_iq16(const std::filesystem::path& path, std::span<const cdouble> samples,
                const FrameSpec& spec, const nlohmann::json& extra)
{
  double peak = 0.0;
  for (const auto& z : samples) peak = std::max({peak, std::abs(z.real()), std::abs(z.imag())});
  const double full = static_cast<double>((1 << (spec.transport_bits - 1)) - 1);
  const double scale = peak > 0.0 ? full / peak : 1.0;

  std::vector<unsigned char> bytes;
  bytes.reserve(samples.size() * 4);
  auto put = [&](double v) {
    const auto q = static_cast<std::int16_t>(std::clamp(std::lround(v * scale), -32768L, 32767L));
    const auto u = static_cast<std::uint16_t>(q);
    bytes.push_back(static_cast<unsigned char>(u & 0xFF));
    bytes.push_back(static_cast<unsigned char>(u >> 8));
  };
  for (const auto& z : samples) {
    put(z.real());
    put(z.imag());
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("short write to " + path.string());

  nlohmann::json meta = extra;
  meta["format"] = "cs16le_interleaved_iq";
  meta["n_samples"] = samples.size();
  meta["sample_rate_hz"] = spec.sample_rate_hz;
  meta["bits_per_component"] = spec.transport_bits;
  meta["scale"] = scale;
  meta["transport_rate_bps"] = spec.transport_rate_bps();
  std::ofstream side(path.string() + ".json", std::ios::trunc);
  if (!side) throw std::runtime_error("cannot open " + path.string() + ".json for writing");
  side << meta.dump(2) << '\n';
}

std::vector<cdouble> read_iq16(const std::filesystem::path& path)
{
  std::ifstream side(path.string() + ".json");
  if (!side) throw std::runtime_error("missing sidecar " + path.string() + ".json");
  const auto meta = nlohmann::json::parse(side);
  const double scale = meta.at("scale").get<double>();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() % 4 != 0) throw std::runtime_error(path.string() + ": truncated I/Q file");
  std::vector<cdouble> out(bytes.size() / 4);
  auto get = [&](std::size_t off) {
    const auto u = static_cast<std::uint16_t>(bytes[off] | (bytes[off + 1] << 8));
    return static_cast<double>(static_cast<std::int16_t>(u)) / scale;
  };
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {get(4 * i), get(4 * i + 2)};
  return out;
}

}  // namespace rislab
