#pragma once

#include <cstdint>
#include <random>

namespace deia {

// Deterministic RNG wrapper. std::mt19937_64 output is specified by the
// standard, but the std distributions are not; the mappings below are ours
// so streams are byte-identical across compilers and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // uniform in [0, 1)
  double uniform() { return (eng_() >> 11) * 0x1.0p-53; }

  // uniform in [0, n)
  std::uint32_t uniform_int(std::uint32_t n) {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(eng_()) * n) >> 64);
  }

  std::uint64_t next() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace deia
