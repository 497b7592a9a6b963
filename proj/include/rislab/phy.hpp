// SPDX-License-Identifier: Apache-2.0
//
// Single-carrier QPSK burst modem.
//
// Frame: Barker-13 preamble repeated twice, Gray-mapped payload, both shaped
// with a root-raised-cosine pulse. The receiver runs a fixed chain:
//
//   coarse CFO (4th-power FFT peak)  ->  matched filter + AGC
//   -> Gardner timing loop  ->  decision-directed carrier loop
//   -> preamble correlation  ->  quadrant resolution  ->  one-tap equalizer
//   -> hard decisions
//
// Sync failure is reported through RxResult::sync_ok and never throws.
#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rislab/channel.hpp"

namespace rislab {

using Bits = std::vector<std::uint8_t>;

inline constexpr std::size_t kBarkerLength = 13;
inline constexpr int kBarker13[kBarkerLength] = {1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1};

struct FrameSpec {
  std::size_t preamble_repeats = 2;
  std::size_t payload_bits = 348;
  std::size_t samples_per_symbol = 4;
  double rrc_rolloff = 0.5;
  std::size_t rrc_span_symbols = 10;
  double sample_rate_hz = 400e3;

  // Receiver parameters.
  std::size_t coarse_fft_len = 4096;
  double loop_bandwidth = 0.01;  // normalized to the symbol rate
  double loop_damping = 0.707;
  double sync_threshold = 0.6;   // fraction of the ideal normalized correlation peak

  // Host transport format: signed 16-bit I and Q.
  std::size_t transport_bits = 16;

  std::size_t preamble_symbols() const { return preamble_repeats * kBarkerLength; }
  std::size_t payload_symbols() const { return payload_bits / 2; }
  std::size_t frame_symbols() const { return preamble_symbols() + payload_symbols(); }
  std::size_t frame_samples() const
  {
    return (frame_symbols() + rrc_span_symbols) * samples_per_symbol;
  }
  double symbol_rate_hz() const { return sample_rate_hz / static_cast<double>(samples_per_symbol); }
  /// I and Q components at transport_bits each.
  double transport_rate_bps() const
  {
    return sample_rate_hz * 2.0 * static_cast<double>(transport_bits);
  }

  void validate() const;  // throws std::invalid_argument
};

struct FrameWaveform {
  std::vector<cdouble> samples;
  Bits truth_bits;
  std::vector<cdouble> payload_symbols;
  FrameSpec spec;
};

/// Concrete impairments applied to one frame.
struct ImpairmentSpec {
  double cfo_hz = 0.0;
  double phase_offset_rad = 0.0;
  double timing_offset_samples = 0.0;
  double snr_db = std::numeric_limits<double>::infinity();  // infinity disables noise

  static ImpairmentSpec none() { return {}; }
};

/// Ranges from which a fresh ImpairmentSpec is drawn for every frame.
struct ImpairmentProfile {
  double cfo_max_hz = 2000.0;
  double phase_offset_max_rad = 3.141592653589793;
  double timing_offset_max_symbols = 0.5;
  double snr_db = 20.0;

  void validate(const FrameSpec& spec) const;
  ImpairmentSpec draw(const FrameSpec& spec, std::uint64_t seed) const;
};

struct RxResult {
  Bits recovered_bits;
  std::vector<cdouble> synced_symbols;  // equalized payload symbols, pre-decision
  bool sync_ok = false;
  double est_cfo_hz = 0.0;
  double sync_metric = 0.0;  // normalized preamble correlation peak
  std::size_t frame_start = 0;
};

/// Gray mapping: 00 -> (1+j), 01 -> (-1+j), 11 -> (-1-j), 10 -> (1-j), all / sqrt(2).
std::vector<cdouble> map_qpsk(std::span<const std::uint8_t> bits);
Bits demap_qpsk(std::span<const cdouble> symbols);

std::vector<cdouble> preamble_symbols(const FrameSpec& spec);

/// Throws std::invalid_argument if payload length differs from spec.payload_bits.
FrameWaveform build_frame(const FrameSpec& spec, std::span<const std::uint8_t> payload_bits);

/// Uniform random payload bits of the spec's length.
Bits random_payload(const FrameSpec& spec, std::uint64_t seed);

/// y[n] = gain * x(n - tau) * exp(j(2 pi cfo n / fs + phi0)) + w[n]. The noise
/// floor is referenced to the unit-gain transmit power, so the received SNR
/// is snr_db + 20 log10 |gain|.
std::vector<cdouble> apply_channel(const FrameWaveform& frame, const LinkChannel& channel,
                                   const ImpairmentSpec& imp, std::uint64_t seed);

RxResult rx_chain(std::span<const cdouble> samples, const FrameSpec& spec);

/// Writes interleaved little-endian int16 I/Q scaled to full range plus a
/// JSON sidecar (`<path>.json`) carrying the scale and `extra` metadata.
void write_iq16(const std::filesystem::path& path, std::span<const cdouble> samples,
                const FrameSpec& spec, const nlohmann::json& extra = nlohmann::json::object());

/// Reads a file written by write_iq16 back to complex baseband (scale undone).
std::vector<cdouble> read_iq16(const std::filesystem::path& path);

}  // namespace rislab
