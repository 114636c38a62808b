#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace seglearn {

/// mt19937_64 with portable derived distributions. The standard library
/// distributions are implementation-defined, so uniform, normal and bounded
/// integer draws are computed here to keep results identical across
/// toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Seed for an independent stream, splitmix64 of (master, index).
  static std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index);

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  /// Standard normal via Box-Muller.
  double normal();
  /// Uniform integer in [0, n), unbiased.
  std::size_t below(std::size_t n);

  /// k distinct indices drawn uniformly from [0, n), in draw order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace seglearn
