// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>

namespace rislab {

/// Named sub-streams. Every random draw in the simulator is keyed by a
/// (root seed, stream, indices...) tuple so results never depend on the
/// order in which evaluations happen.
enum class Stream : std::uint64_t {
  channel = 1,
  initial_config = 2,
  optimizer = 3,
  evaluation = 4,
  frame = 5,
  payload = 6,
  impairment = 7,
  noise = 8,
  cross = 9,
  candidate = 10,
};

std::uint64_t splitmix64(std::uint64_t x);

/// Mixes a root seed, a stream tag and any number of indices into a child seed.
std::uint64_t derive_seed(std::uint64_t root, Stream stream,
                          std::initializer_list<std::uint64_t> indices = {});

}  // namespace rislab
