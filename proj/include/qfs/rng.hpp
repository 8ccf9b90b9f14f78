#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace qfs {

// splitmix64 finalizer; bijective on 64-bit integers.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Purpose tag of a derived random stream.
enum class SeedTag : std::uint64_t {
  Ensemble = 1,
  SweepPoint = 2,
  ScanDelay = 3,
  CepDraw = 4,
  IntensityPoint = 5,
  EnergyPoint = 6,
};

/// Splittable-stream contract: child = mix64(mix64(mix64(base) ^ index) ^ tag).
/// The same (base, index, tag) triple always yields the same child seed, so
/// sweep points and scan delays can execute concurrently, in any order, and
/// still reproduce bit-identical results.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index, SeedTag tag) {
  return mix64(mix64(mix64(base) ^ index) ^ static_cast<std::uint64_t>(tag));
}

/// Deterministic random stream: mt19937_64 plus the uniform/normal helpers the
/// samplers build on. One instance per task; never shared between threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1); safe as a log() argument.
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; the second value of each pair is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open()));
    const double phi = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace qfs
