#ifndef CHAOSCOPE_RNG_HPP
#define CHAOSCOPE_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace chaoscope {

/// splitmix64 finalizer; used to derive stream keys from a master seed
uint64_t mix64(uint64_t x);

/// Counter-based generator (philox 4x32, 10 rounds). Output is a pure
/// function of (key, counter), so any substream can be reproduced without
/// generating its predecessors.
struct Philox4x32 {
  std::array<uint32_t, 2> key;

  std::array<uint32_t, 4> block(uint64_t counter_hi, uint64_t counter_lo) const;
};

/// One logical random stream: master seed plus a path of split indices.
/// Streams with distinct paths are independent; draws within a stream are
/// indexed by an internal 128-bit counter.
class RngStream {
 public:
  RngStream() : RngStream(0, {}) {}
  explicit RngStream(uint64_t master_seed,
                     std::initializer_list<uint64_t> path = {});

  /// child stream: same master seed, path extended by `index`
  RngStream split(uint64_t index) const;

  uint64_t next_u64();
  /// uniform on the open interval (0,1)
  double uniform();
  /// standard normal (Box-Muller, pairs cached)
  double normal();
  double exponential() { return -std::log(uniform()); }
  /// exact Poisson sample; cost linear in mean
  uint64_t poisson(double mean);
  /// Pareto tail P(Z > z) = (z / z_min)^(-alpha), z >= z_min
  double pareto(double z_min, double alpha);

  uint64_t master_seed() const { return master_seed_; }

 private:
  uint64_t master_seed_ = 0;
  uint64_t stream_id_ = 0;
  Philox4x32 gen_;
  uint64_t counter_ = 0;
  std::array<uint32_t, 4> buf_{};
  int buf_pos_ = 4;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;

  void refill();
};

/// Walker alias table for O(1) sampling from a finite weight vector.
class AliasTable {
 public:
  explicit AliasTable(const std::vector<double>& weights);
  std::size_t sample(RngStream& rng) const;
  double total_weight() const { return total_; }

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
  double total_ = 0.0;
};

}  // namespace chaoscope

#endif
