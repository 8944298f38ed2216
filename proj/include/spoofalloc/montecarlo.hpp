#pragma once

#include <complex>
#include <cstdint>
#include <map>

#include "spoofalloc/allocator.hpp"
#include "spoofalloc/model.hpp"

namespace spoofalloc::montecarlo {

// Splittable 64-bit generator; every chunk of trials owns an independent
// stream derived from (seed, chunk index), so results are bit-identical
// regardless of thread count or execution order.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // [0, 1)
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  // (0, 1]
  double uniform01_pos() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }
  // Standard complex Gaussian with per-component variance 1/2 (Box-Muller).
  std::complex<double> complex_noise();

  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>((static_cast<__uint128_t>(next()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

std::uint64_t mix64(std::uint64_t x);
std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk_index);

struct SimConfig {
  LinkParams params;
  allocator::AllocationPlan plan;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t chunk_size = 1 << 16;
};

struct TypeTally {
  std::uint64_t failures = 0;
  std::uint64_t trials = 0;
};

struct SimResult {
  std::map<SymbolType, TypeTally> per_type_failures;
  double overall_sser = 0.0;   // prior-weighted sum of per-type rates
  double ci_half_width = 0.0;  // 3-sigma binomial half width
};

// Spoofing signal for one (sent, target) pair under the plan's policy for
// that pair's type. Time-shared policies draw their level from rng.
std::complex<double> spoof_signal(std::complex<double> x,
                                  std::complex<double> xbar,
                                  const allocator::AllocationPlan& plan,
                                  SplitMix64& rng);

// threads = 0 picks the hardware concurrency.
SimResult run(const SimConfig& config, unsigned threads = 0);

}  // namespace spoofalloc::montecarlo
