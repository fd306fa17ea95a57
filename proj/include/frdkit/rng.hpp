#pragma once

#include <cstdint>

namespace frd {

// Counter-based pseudo-random stream keyed by (master seed, stream index).
// Each draw hashes an incrementing counter (splitmix64), so streams are
// cheap to create per replication and output never depends on how work is
// scheduled across threads.
class CounterRng {
 public:
  CounterRng(std::uint64_t master_seed, std::uint64_t stream);

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1]; safe as a log argument.
  double uniform_open();

  bool bernoulli(double prob);
  double normal();  // standard normal, Box-Muller
  double gamma(double shape);
  double beta(double a, double b);  // two-gamma ratio

 private:
  std::uint64_t state_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace frd
