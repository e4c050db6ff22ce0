#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "exsieve/arith.hpp"
#include "exsieve/errors.hpp"

namespace exsieve {

struct TableOptions {
  /// Largest limit build() accepts. 2^32 costs 256 MiB.
  std::uint64_t max_limit = std::uint64_t{1} << 32;
};

/// Bit-packed odd-only primality map over [0, limit] with prime-count
/// checkpoints every 2^16 integers. Immutable after construction.
class PrimeTable {
 public:
  static constexpr unsigned kCheckpointShift = 16;
  static constexpr std::uint64_t kCheckpointStride = std::uint64_t{1} << kCheckpointShift;

  static PrimeTable build(std::uint64_t limit, TableOptions opts = {}) {
    if (limit < 2) throw invalid_argument("PrimeTable: limit must be at least 2");
    if (limit > opts.max_limit) {
      throw limit_exceeded("PrimeTable: limit " + std::to_string(limit) +
                           " exceeds configured maximum " + std::to_string(opts.max_limit));
    }
    PrimeTable t;
    t.limit_ = limit;
    t.sieve();
    t.build_checkpoints();
    return t;
  }

  std::uint64_t limit() const noexcept { return limit_; }

  bool is_prime(std::uint64_t k) const {
    if (k > limit_) throw out_of_range("is_prime: " + std::to_string(k) + " > table limit");
    return test(k);
  }

  /// Number of primes <= n.
  std::uint64_t pi(std::uint64_t n) const {
    if (n > limit_) throw out_of_range("prime_pi: " + std::to_string(n) + " > table limit");
    if (n < 2) return 0;
    const std::uint64_t block = n >> kCheckpointShift;
    const std::uint64_t first_bit = (block << kCheckpointShift) >> 1;
    const std::uint64_t last_bit = (n - 1) >> 1;
    std::uint64_t count = checkpoints_[block];
    if (block == 0) ++count;  // the prime 2 has no bit
    if (last_bit >= first_bit) count += popcount_range(first_bit, last_bit);
    return count;
  }

  /// All primes in [lo, hi], ascending.
  std::vector<std::uint64_t> primes(std::uint64_t lo, std::uint64_t hi) const {
    hi = std::min(hi, limit_);
    std::vector<std::uint64_t> out;
    if (lo > hi) return out;
    if (lo <= 2 && hi >= 2) out.push_back(2);
    for_each_odd_prime(std::max<std::uint64_t>(lo, 3), hi, [&](std::uint64_t p) { out.push_back(p); });
    return out;
  }

  std::vector<std::uint64_t> primes(std::uint64_t hi) const { return primes(0, hi); }
  std::vector<std::uint64_t> primes() const { return primes(0, limit_); }

  /// Visits odd primes in [lo, hi] in ascending order.
  template <class F>
  void for_each_odd_prime(std::uint64_t lo, std::uint64_t hi, F&& f) const {
    hi = std::min(hi, limit_);
    if (lo < 3) lo = 3;
    if (lo > hi) return;
    std::uint64_t bit = lo >> 1;
    const std::uint64_t last = (hi - 1) >> 1;
    while (bit <= last) {
      const std::uint64_t w = bit >> 6;
      std::uint64_t word = bits_[w] & (~std::uint64_t{0} << (bit & 63));
      const std::uint64_t word_end = (w << 6) + 63;
      if (word_end > last) word &= ~std::uint64_t{0} >> (63 - (last & 63));
      while (word) {
        const std::uint64_t b = (w << 6) + static_cast<std::uint64_t>(std::countr_zero(word));
        f(2 * b + 1);
        word &= word - 1;
      }
      bit = word_end + 1;
    }
  }

  /// Unchecked primality test; caller guarantees k <= limit().
  bool test(std::uint64_t k) const noexcept {
    if (k < 3) return k == 2;
    if ((k & 1) == 0) return false;
    const std::uint64_t b = k >> 1;
    return (bits_[b >> 6] >> (b & 63)) & 1;
  }

  std::size_t memory_bytes() const noexcept {
    return bits_.size() * sizeof(std::uint64_t) + checkpoints_.size() * sizeof(std::uint64_t);
  }

 private:
  std::uint64_t limit_ = 0;
  std::vector<std::uint64_t> bits_;         // bit b <-> odd integer 2b+1
  std::vector<std::uint64_t> checkpoints_;  // [k] = #primes < k * 2^16

  std::uint64_t popcount_range(std::uint64_t first, std::uint64_t last) const noexcept {
    const std::uint64_t fw = first >> 6, lw = last >> 6;
    const std::uint64_t lo_mask = ~std::uint64_t{0} << (first & 63);
    const std::uint64_t hi_mask = ~std::uint64_t{0} >> (63 - (last & 63));
    if (fw == lw) return static_cast<std::uint64_t>(std::popcount(bits_[fw] & lo_mask & hi_mask));
    std::uint64_t c = static_cast<std::uint64_t>(std::popcount(bits_[fw] & lo_mask));
    for (std::uint64_t w = fw + 1; w < lw; ++w) c += static_cast<std::uint64_t>(std::popcount(bits_[w]));
    return c + static_cast<std::uint64_t>(std::popcount(bits_[lw] & hi_mask));
  }

  void sieve() {
    const std::uint64_t nbits = (limit_ + 1) / 2;  // odd numbers 1, 3, ..., <= limit
    bits_.assign((nbits + 63) / 64, ~std::uint64_t{0});
    if (nbits % 64) bits_.back() &= (std::uint64_t{1} << (nbits % 64)) - 1;
    bits_[0] &= ~std::uint64_t{1};  // 1 is not prime

    // Base primes up to sqrt(limit) from a plain byte sieve.
    const std::uint64_t root = isqrt(limit_);
    std::vector<std::uint8_t> small(root + 1, 1);
    std::vector<std::uint64_t> base;
    for (std::uint64_t i = 3; i <= root; i += 2) {
      if (!small[i]) continue;
      base.push_back(i);
      for (std::uint64_t j = i * i; j <= root; j += 2 * i) small[j] = 0;
    }

    // Cross off in cache-sized blocks of bits.
    constexpr std::uint64_t kBlockBits = std::uint64_t{1} << 18;
    std::vector<std::uint64_t> next(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) next[i] = (base[i] * base[i]) >> 1;
    for (std::uint64_t block_lo = 0; block_lo < nbits; block_lo += kBlockBits) {
      const std::uint64_t block_hi = std::min(nbits, block_lo + kBlockBits);
      for (std::size_t i = 0; i < base.size(); ++i) {
        const std::uint64_t p = base[i];
        std::uint64_t b = next[i];
        for (; b < block_hi; b += p) bits_[b >> 6] &= ~(std::uint64_t{1} << (b & 63));
        next[i] = b;
      }
    }
  }

  void build_checkpoints() {
    const std::uint64_t blocks = (limit_ >> kCheckpointShift) + 1;
    checkpoints_.assign(blocks, 0);
    constexpr std::uint64_t kWordsPerBlock = kCheckpointStride / 128;
    std::uint64_t running = limit_ >= 2 ? 1 : 0;
    for (std::uint64_t k = 1; k < blocks; ++k) {
      const std::uint64_t w0 = (k - 1) * kWordsPerBlock;
      for (std::uint64_t w = w0; w < w0 + kWordsPerBlock && w < bits_.size(); ++w)
        running += static_cast<std::uint64_t>(std::popcount(bits_[w]));
      checkpoints_[k] = running;
    }
  }
};

inline PrimeTable build_prime_table(std::uint64_t limit, TableOptions opts = {}) {
  return PrimeTable::build(limit, opts);
}

inline std::uint64_t prime_pi(const PrimeTable& table, std::uint64_t n) { return table.pi(n); }

/// Number of primes p <= n with p = residue (mod modulus).
inline std::uint64_t prime_pi_residue(const PrimeTable& table, std::uint64_t n,
                                      std::uint64_t modulus, std::uint64_t residue) {
  if (modulus == 0) throw invalid_argument("prime_pi_residue: modulus must be positive");
  if (residue >= modulus) throw invalid_argument("prime_pi_residue: residue must be below modulus");
  if (n > table.limit()) throw out_of_range("prime_pi_residue: n exceeds table limit");
  if (modulus == 1) return table.pi(n);
  std::uint64_t count = 0;
  if (modulus % 2 == 0) {
    // Only the residue class containing 2 can hold an even prime; others are all odd.
    if (residue % 2 == 0) return (residue == 2 % modulus && n >= 2) ? 1 : 0;
    for (std::uint64_t k = residue; k <= n; k += modulus) count += table.test(k);
    return count;
  }
  // Odd modulus: step by 2*modulus through the odd members only.
  std::uint64_t k = residue;
  if (k == 2 && n >= 2) ++count;
  if (k % 2 == 0) k += modulus;
  for (; k <= n; k += 2 * modulus) count += table.test(k);
  return count;
}

/// Primality flags over the half-open range [lo, hi).
class Segment {
 public:
  Segment() = default;
  Segment(std::uint64_t lo, std::uint64_t hi, std::vector<std::uint8_t> flags)
      : lo_(lo), hi_(hi), flags_(std::move(flags)) {}

  std::uint64_t lo() const noexcept { return lo_; }
  std::uint64_t hi() const noexcept { return hi_; }
  bool empty() const noexcept { return lo_ == hi_; }
  std::uint64_t size() const noexcept { return hi_ - lo_; }

  bool is_prime(std::uint64_t k) const {
    if (k < lo_ || k >= hi_) throw out_of_range("Segment::is_prime: outside segment");
    return flags_[k - lo_] != 0;
  }
  std::span<const std::uint8_t> flags() const noexcept { return flags_; }

  std::uint64_t count() const noexcept {
    return static_cast<std::uint64_t>(std::count(flags_.begin(), flags_.end(), std::uint8_t{1}));
  }

  std::vector<std::uint64_t> primes() const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 0; i < flags_.size(); ++i)
      if (flags_[i]) out.push_back(lo_ + i);
    return out;
  }

 private:
  std::uint64_t lo_ = 0, hi_ = 0;
  std::vector<std::uint8_t> flags_;
};

/// Sieves [lo, hi) with the base table's primes. Needs base.limit() >= floor(sqrt(hi)).
inline Segment segmented_primes(std::uint64_t lo, std::uint64_t hi, const PrimeTable& base) {
  if (lo > hi) throw invalid_argument("segmented_primes: lo > hi");
  if (lo == hi) return Segment(lo, hi, {});
  const std::uint64_t root = isqrt(hi);
  if (base.limit() < root) {
    throw insufficient_base("segmented_primes: base table limit " + std::to_string(base.limit()) +
                            " < sqrt(hi) = " + std::to_string(root));
  }
  std::vector<std::uint8_t> flags(hi - lo, 1);
  for (std::uint64_t k = lo; k < std::min<std::uint64_t>(hi, 2); ++k) flags[k - lo] = 0;
  const std::uint64_t top = isqrt(hi - 1);
  auto strike = [&](std::uint64_t p) {
    std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
    for (std::uint64_t m = start; m < hi; m += p) flags[m - lo] = 0;
  };
  if (top >= 2) strike(2);
  base.for_each_odd_prime(3, top, strike);
  return Segment(lo, hi, std::move(flags));
}

}  // namespace exsieve
