#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace kpz {

using Engine = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Stream derivation: every Monte-Carlo replica owns an engine seeded from
// (root, channel, replica) through two rounds of splitmix64, so replica k of
// an experiment is reproducible on its own and independent of scheduling.
//
//   seed = splitmix64(splitmix64(root ^ (channel * 0xD1B54A32D192ED03))
//                     + (replica + 1) * 0x9E3779B97F4A7C15)
//
// `channel` separates experiment families that share one root seed.
std::uint64_t stream_seed(std::uint64_t root, std::uint64_t channel, std::uint64_t replica);

Engine make_engine(std::uint64_t root, std::uint64_t channel, std::uint64_t replica);

// Worker count for replica fan-out: KPZ_WORKERS if set and positive,
// otherwise std::thread::hardware_concurrency() (at least 1).
std::size_t worker_count();

}  // namespace kpz
