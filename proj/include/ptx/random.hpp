#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <limits>
#include <random>

namespace ptx {

// Philox4x32-10 counter-based generator (Salmon et al., Random123).
// The 128-bit counter is split into a 64-bit block index and a 64-bit
// substream id; the 64-bit key is the master seed. Every (seed, substream)
// pair therefore addresses a disjoint 2^64-block sequence, with no state
// shared between substreams.
class Philox4x32 {
 public:
  using result_type = std::uint64_t;
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t seed, std::uint64_t substream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        substream_(substream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (cursor_ == 2) {
      refill();
    }
    return buffer_[cursor_++];
  }

  // Raw block function, exposed for known-answer tests.
  static Counter block(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += 0x9E3779B9u;
        key[1] += 0xBB67AE85u;
      }
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  void refill() {
    const Counter ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                      static_cast<std::uint32_t>(substream_),
                      static_cast<std::uint32_t>(substream_ >> 32)};
    const Counter out = block(ctr, key_);
    buffer_[0] = (std::uint64_t{out[1]} << 32) | out[0];
    buffer_[1] = (std::uint64_t{out[3]} << 32) | out[2];
    ++block_;
    cursor_ = 0;
  }

  Key key_;
  std::uint64_t substream_;
  std::uint64_t block_ = 0;
  std::array<result_type, 2> buffer_{};
  int cursor_ = 2;
};

// One independent Gaussian stream per (master_seed, substream_id). Not meant
// to be shared between threads; each worker builds its own.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t substream_id)
      : master_seed_(master_seed), substream_id_(substream_id), engine_(master_seed, substream_id) {}

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t substream_id() const { return substream_id_; }

  // Standard normal variate.
  double gaussian() { return normal_(engine_); }

  template <typename Derived>
  void fill_gaussian(Eigen::DenseBase<Derived>& out) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      for (Eigen::Index i = 0; i < out.rows(); ++i) {
        out(i, j) = static_cast<typename Derived::Scalar>(gaussian());
      }
    }
  }

 private:
  std::uint64_t master_seed_;
  std::uint64_t substream_id_;
  Philox4x32 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// n i.i.d. standard normal draws from the stream.
Eigen::VectorXd gaussian_draws(RandomStream& stream, Eigen::Index n);

}  // namespace ptx
