#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "exsieve/arith.hpp"
#include "exsieve/errors.hpp"

namespace exsieve {

namespace detail {

// phi(x, c) for the first c <= 6 primes is periodic in the primorial.
struct PrimorialTables {
  static constexpr std::array<std::uint64_t, 7> kPrimorial{1, 2, 6, 30, 210, 2310, 30030};
  static constexpr std::array<std::uint64_t, 7> kTotient{1, 1, 2, 8, 48, 480, 5760};
  static constexpr std::array<std::uint64_t, 6> kFirstPrimes{2, 3, 5, 7, 11, 13};

  std::array<std::vector<std::uint32_t>, 7> cumulative;  // [c][r] = phi(r, c), r < primorial

  PrimorialTables() {
    for (std::size_t c = 0; c < kPrimorial.size(); ++c) {
      auto& t = cumulative[c];
      t.resize(kPrimorial[c]);
      std::uint32_t run = 0;
      for (std::uint64_t r = 0; r < kPrimorial[c]; ++r) {
        bool coprime = r != 0;
        for (std::size_t i = 0; i < c && coprime; ++i) coprime = r % kFirstPrimes[i] != 0;
        run += coprime;
        t[r] = run;
      }
    }
  }

  std::uint64_t phi(std::uint64_t x, std::size_t c) const {
    const std::uint64_t q = kPrimorial[c];
    return (x / q) * kTotient[c] + cumulative[c][x % q];
  }

  static const PrimorialTables& instance() {
    static const PrimorialTables tables;
    return tables;
  }
};

inline std::vector<std::uint64_t> small_primes_upto(std::uint64_t bound) {
  std::vector<std::uint8_t> mark(bound + 1, 1);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i <= bound; ++i) {
    if (!mark[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= bound; j += i) mark[j] = 0;
  }
  return out;
}

}  // namespace detail

/// Legendre's phi: sum over squarefree d | p_1 ... p_a of mu(d) * floor(x / d),
/// i.e. the count of 1 <= k <= x free of the first `a` primes.
inline std::uint64_t legendre_phi(std::uint64_t x, std::size_t a, std::span<const std::uint64_t> primes) {
  if (x == 0) return 0;
  if (a == 0) return x;
  if (a < detail::PrimorialTables::kPrimorial.size()) return detail::PrimorialTables::instance().phi(x, a);
  // Every k in [2, x] has a prime factor <= x <= p_a.
  if (primes[a - 1] >= x) return 1;
  return legendre_phi(x, a - 1, primes) - legendre_phi(x / primes[a - 1], a - 1, primes);
}

/// Term-by-term Mobius sum, exponential in `a`; reference for small inputs.
inline std::int64_t legendre_sum_naive(std::uint64_t x, std::span<const std::uint64_t> primes) {
  const std::size_t a = primes.size();
  std::int64_t total = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << a); ++mask) {
    std::uint64_t d = 1;
    int sign = 1;
    for (std::size_t i = 0; i < a; ++i) {
      if (!((mask >> i) & 1)) continue;
      d = d > x ? d : d * primes[i];
      sign = -sign;
    }
    total += sign * static_cast<std::int64_t>(d > x ? 0 : x / d);
  }
  return total;
}

/// pi(n) from the Mobius sum over primes <= sqrt(n). The sieve leaves 1 and
/// the primes in (sqrt(n), n], hence the -1 + pi(sqrt(n)) correction.
inline std::uint64_t legendre_count(std::uint64_t n, std::span<const std::uint64_t> primes_to_root) {
  if (n < 4) throw invalid_argument("legendre_count: n must be at least 4");
  const std::uint64_t root = isqrt(n);
  std::size_t a = 0;
  while (a < primes_to_root.size() && primes_to_root[a] <= root) ++a;
  if (a == primes_to_root.size() && (a == 0 || primes_to_root[a - 1] < root)) {
    // Caller's list may stop short of sqrt(n); make sure it really covers it.
    std::uint64_t next_checked = a == 0 ? 2 : primes_to_root[a - 1] + 1;
    for (std::uint64_t k = next_checked; k <= root; ++k) {
      bool composite = false;
      for (std::size_t i = 0; i < a && primes_to_root[i] * primes_to_root[i] <= k; ++i)
        composite |= k % primes_to_root[i] == 0;
      if (!composite) throw invalid_argument("legendre_count: prime list does not reach sqrt(n)");
    }
  }
  return legendre_phi(n, a, primes_to_root) - 1 + a;
}

inline std::uint64_t legendre_count(std::uint64_t n) {
  if (n < 4) throw invalid_argument("legendre_count: n must be at least 4");
  const auto primes = detail::small_primes_upto(isqrt(n));
  return legendre_count(n, primes);
}

}  // namespace exsieve
