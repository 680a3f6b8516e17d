#include "kpz/rng.hpp"

#include <cstdlib>
#include <string>
#include <thread>

namespace kpz {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t root, std::uint64_t channel, std::uint64_t replica) {
  const std::uint64_t base = splitmix64(root ^ (channel * 0xD1B54A32D192ED03ULL));
  return splitmix64(base + (replica + 1) * 0x9E3779B97F4A7C15ULL);
}

Engine make_engine(std::uint64_t root, std::uint64_t channel, std::uint64_t replica) {
  return Engine(stream_seed(root, channel, replica));
}

std::size_t worker_count() {
  if (const char* env = std::getenv("KPZ_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace kpz
