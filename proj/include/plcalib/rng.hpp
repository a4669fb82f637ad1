#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace plcalib {

// Advances a splitmix64 state and returns the next value. Used to expand a
// user seed into generator state and to derive named sub-stream seeds.
std::uint64_t splitmix64(std::uint64_t& state);

// xoshiro256++ with Box-Muller gaussians. The algorithm is pinned here (rather
// than delegating to std::mt19937 / std::normal_distribution) because report
// bytes must be reproducible across standard libraries and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0, 1) using the top 53 bits.
  double uniform01();
  double uniform(double lo, double hi);

  // Box-Muller; the second variate of each pair is cached and served next.
  double gaussian(double mean = 0.0, double stddev = 1.0);

 private:
  std::array<std::uint64_t, 4> state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Stable decorrelated seed for a named sub-stream, e.g. one pose of an
// experiment: hash(stream_id) folded into the master seed. Rendering poses in
// any order (or in parallel) therefore yields identical noise per pose.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream_id);

}  // namespace plcalib
