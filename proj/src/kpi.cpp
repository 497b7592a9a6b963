// SPDX-License-Identifier: Apache-2.0
#include "rislab/kpi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rislab/seeding.hpp"

namespace rislab {

std::size_t bit_errors(std::span<const std::uint8_t> received, std::span<const std::uint8_t> transmitted)
{
  if (received.empty() || transmitted.empty())
    throw std::invalid_argument("ber: empty bit vector");
  if (received.size() != transmitted.size())
    throw std::invalid_argument("ber: length mismatch (" + std::to_string(received.size()) + " vs " +
                                std::to_string(transmitted.size()) + ")");
  std::size_t errors = 0;
  for (std::size_t i = 0; i < received.size(); ++i) errors += (received[i] != 0) != (transmitted[i] != 0);
  return errors;
}

double ber(std::span<const std::uint8_t> received, std::span<const std::uint8_t> transmitted)
{
  return static_cast<double>(bit_errors(received, transmitted)) / static_cast<double>(transmitted.size());
}

double evm_rms(std::span<const cdouble> received, std::span<const cdouble> reference)
{
  if (received.empty() || reference.empty()) throw std::invalid_argument("evm_rms: empty symbol vector");
  if (received.size() != reference.size())
    throw std::invalid_argument("evm_rms: length mismatch (" + std::to_string(received.size()) + " vs " +
                                std::to_string(reference.size()) + ")");
  double err = 0.0;
  double peak = 0.0;
  for (std::size_t k = 0; k < received.size(); ++k) {
    err += std::norm(received[k] - reference[k]);
    peak = std::max(peak, std::abs(reference[k]));
  }
  if (!(peak > 0.0)) throw std::invalid_argument("evm_rms: reference constellation has zero peak");
  return 100.0 * std::sqrt(err / static_cast<double>(received.size())) / peak;
}

std::vector<cdouble> received_frame(const LinkChannel& channel, const LinkSetup& setup,
                                    std::size_t frame_index, std::uint64_t seed, FrameWaveform* tx)
{
  const std::uint64_t fseed = derive_seed(seed, Stream::frame, {frame_index});
  FrameWaveform frame = build_frame(setup.frame, random_payload(setup.frame, derive_seed(fseed, Stream::payload)));
  const ImpairmentSpec imp = setup.impairments.draw(setup.frame, derive_seed(fseed, Stream::impairment));
  auto y = apply_channel(frame, channel, imp, derive_seed(fseed, Stream::noise));
  if (tx) *tx = std::move(frame);
  return y;
}

KpiSample measure_gain(const LinkChannel& channel, const LinkSetup& setup, std::size_t n_frames,
                       std::uint64_t seed)
{
  if (n_frames < 1) throw std::invalid_argument("measure_link: n_frames must be >= 1");
  KpiSample out;
  out.gain_mag = std::abs(channel.gain);
  double evm_sum = 0.0;
  for (std::size_t i = 0; i < n_frames; ++i) {
    FrameWaveform tx;
    const auto y = received_frame(channel, setup, i, seed, &tx);
    const RxResult rx = rx_chain(y, setup.frame);
    out.n_bits += tx.truth_bits.size();
    if (!rx.sync_ok) {
      ++out.frames_failed;
      out.sync_ok = false;
      evm_sum += kSyncFailEvmPct;
      out.n_bit_errors += static_cast<std::size_t>(kSyncFailBer * static_cast<double>(tx.truth_bits.size()));
      continue;
    }
    out.n_bit_errors += bit_errors(rx.recovered_bits, tx.truth_bits);
    evm_sum += evm_rms(rx.synced_symbols, tx.payload_symbols);
  }
  out.evm_rms_pct = evm_sum / static_cast<double>(n_frames);
  out.ber = static_cast<double>(out.n_bit_errors) / static_cast<double>(out.n_bits);
  return out;
}

KpiSample measure_link(const ChannelRealization& real, const ConfigPair& configs,
                       const Environment& env, std::size_t link, const LinkSetup& setup,
                       std::size_t n_frames, std::uint64_t seed)
{
  return measure_gain(link_gain(real, configs, env, link), setup, n_frames, seed);
}

}  // namespace rislab
