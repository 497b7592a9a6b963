// SPDX-License-Identifier: Apache-2.0
#include "rislab/seeding.hpp"

namespace rislab {

std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, Stream stream,
                          std::initializer_list<std::uint64_t> indices)
{
  std::uint64_t h = splitmix64(root ^ 0x5bd1e9955bd1e995ULL);
  h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
  for (std::uint64_t idx : indices) h = splitmix64(h ^ (idx + 0x632be59bd9b4e019ULL));
  return h;
}

}  // namespace rislab
