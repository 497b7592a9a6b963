// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>

#include "rislab/channel.hpp"
#include "rislab/phy.hpp"

namespace rislab {

/// Link KPIs at one configuration. n_bits == 0 marks a sample that carries
/// only the noiseless channel magnitude (no PHY run).
struct KpiSample {
  double evm_rms_pct = 0.0;
  double ber = 0.0;
  std::size_t n_bits = 0;
  std::size_t n_bit_errors = 0;
  bool sync_ok = true;
  double gain_mag = 0.0;
  std::size_t frames_failed = 0;
};

/// Values assigned to a frame the receiver could not synchronize.
inline constexpr double kSyncFailEvmPct = 100.0;
inline constexpr double kSyncFailBer = 0.5;

/// Number of differing positions. Throws std::invalid_argument on empty or
/// mismatched input.
std::size_t bit_errors(std::span<const std::uint8_t> received, std::span<const std::uint8_t> transmitted);

/// Bit errors over transmitted bits.
double ber(std::span<const std::uint8_t> received, std::span<const std::uint8_t> transmitted);

/// RMS error vector in percent of the reference constellation's peak magnitude.
double evm_rms(std::span<const cdouble> received, std::span<const cdouble> reference);

/// Everything measure_link needs besides the channel and the configurations.
struct LinkSetup {
  FrameSpec frame{};
  ImpairmentProfile impairments{};
};

/// Runs n_frames independent frames (fresh payload, impairments and noise
/// each) through the fixed channel. EVM is the mean of per-frame RMS EVM;
/// bit errors are pooled. A frame that fails sync contributes the penalty
/// values and clears sync_ok.
KpiSample measure_link(const ChannelRealization& real, const ConfigPair& configs,
                       const Environment& env, std::size_t link, const LinkSetup& setup,
                       std::size_t n_frames, std::uint64_t seed);

/// Channel-only sample: the same frame sequence measure_link would run, but
/// with a known gain instead of one synthesized from configurations.
KpiSample measure_gain(const LinkChannel& channel, const LinkSetup& setup, std::size_t n_frames,
                       std::uint64_t seed);

/// Received samples of frame `frame_index` as measure_gain would produce them.
std::vector<cdouble> received_frame(const LinkChannel& channel, const LinkSetup& setup,
                                    std::size_t frame_index, std::uint64_t seed,
                                    FrameWaveform* tx = nullptr);

}  // namespace rislab
