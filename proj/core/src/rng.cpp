#include "chaoscope/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chaoscope {

uint64_t mix64(uint64_t x) {
  x += UINT64_C(0x9E3779B97F4A7C15);
  x = (x ^ (x >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
  x = (x ^ (x >> 27)) * UINT64_C(0x94D049BB133111EB);
  return x ^ (x >> 31);
}

namespace {

constexpr uint32_t kPhiloxW32A = 0x9E3779B9;
constexpr uint32_t kPhiloxW32B = 0xBB67AE85;
constexpr uint32_t kPhiloxM4x32A = 0xD2511F53;
constexpr uint32_t kPhiloxM4x32B = 0xCD9E8D57;

inline void mul_hi_lo(uint32_t a, uint32_t b, uint32_t& lo, uint32_t& hi) {
  const uint64_t p = static_cast<uint64_t>(a) * b;
  lo = static_cast<uint32_t>(p);
  hi = static_cast<uint32_t>(p >> 32);
}

}  // namespace

std::array<uint32_t, 4> Philox4x32::block(uint64_t counter_hi,
                                          uint64_t counter_lo) const {
  std::array<uint32_t, 4> ctr = {
      static_cast<uint32_t>(counter_lo), static_cast<uint32_t>(counter_lo >> 32),
      static_cast<uint32_t>(counter_hi), static_cast<uint32_t>(counter_hi >> 32)};
  std::array<uint32_t, 2> k = key;
  for (int round = 0; round < 10; ++round) {
    uint32_t lo0, hi0, lo1, hi1;
    mul_hi_lo(kPhiloxM4x32A, ctr[0], lo0, hi0);
    mul_hi_lo(kPhiloxM4x32B, ctr[2], lo1, hi1);
    ctr = {hi1 ^ ctr[1] ^ k[0], lo1, hi0 ^ ctr[3] ^ k[1], lo0};
    k[0] += kPhiloxW32A;
    k[1] += kPhiloxW32B;
  }
  return ctr;
}

RngStream::RngStream(uint64_t master_seed, std::initializer_list<uint64_t> path)
    : master_seed_(master_seed) {
  uint64_t id = mix64(master_seed);
  for (uint64_t p : path) id = mix64(id ^ mix64(p));
  stream_id_ = id;
  gen_.key = {static_cast<uint32_t>(id), static_cast<uint32_t>(id >> 32)};
}

RngStream RngStream::split(uint64_t index) const {
  RngStream child;
  child.master_seed_ = master_seed_;
  child.stream_id_ = mix64(stream_id_ ^ mix64(index));
  child.gen_.key = {static_cast<uint32_t>(child.stream_id_),
                    static_cast<uint32_t>(child.stream_id_ >> 32)};
  return child;
}

void RngStream::refill() {
  buf_ = gen_.block(stream_id_, counter_++);
  buf_pos_ = 0;
}

uint64_t RngStream::next_u64() {
  if (buf_pos_ > 2) refill();
  const uint64_t lo = buf_[buf_pos_];
  const uint64_t hi = buf_[buf_pos_ + 1];
  buf_pos_ += 2;
  return (hi << 32) | lo;
}

double RngStream::uniform() {
  // 53 random bits, offset to land strictly inside (0,1)
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
}

double RngStream::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(theta);
  has_cached_normal_ = true;
  return r * std::cos(theta);
}

uint64_t RngStream::poisson(double mean) {
  if (!(mean >= 0.0)) throw std::invalid_argument("poisson: mean must be >= 0");
  uint64_t total = 0;
  // sum of independent Poisson chunks keeps the product-of-uniforms method
  // inside double range for any mean
  while (mean > 0.0) {
    const double chunk = std::min(mean, 25.0);
    mean -= chunk;
    const double limit = std::exp(-chunk);
    double prod = uniform();
    uint64_t k = 0;
    while (prod > limit) {
      ++k;
      prod *= uniform();
    }
    total += k;
  }
  return total;
}

double RngStream::pareto(double z_min, double alpha) {
  return z_min * std::pow(uniform(), -1.0 / alpha);
}

AliasTable::AliasTable(const std::vector<double>& weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw std::invalid_argument("AliasTable: empty weights");
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("AliasTable: negative weight");
    total_ += w;
  }
  prob_.assign(n, 1.0);
  alias_.resize(n);
  for (std::size_t i = 0; i < n; ++i) alias_[i] = i;
  if (total_ <= 0.0) return;

  std::vector<double> scaled(n);
  for (std::size_t i = 0; i < n; ++i) scaled[i] = weights[i] * n / total_;
  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < n; ++i)
    (scaled[i] < 1.0 ? small : large).push_back(i);
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
}

std::size_t AliasTable::sample(RngStream& rng) const {
  const std::size_t n = prob_.size();
  const double u = rng.uniform() * n;
  std::size_t i = static_cast<std::size_t>(u);
  if (i >= n) i = n - 1;
  const double frac = u - i;
  return frac < prob_[i] ? i : alias_[i];
}

}  // namespace chaoscope
