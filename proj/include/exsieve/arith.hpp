#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

#include "exsieve/errors.hpp"

namespace exsieve {

/// floor(sqrt(n)) without floating-point rounding surprises.
constexpr std::uint64_t isqrt(std::uint64_t n) noexcept {
  if (n < 2) return n;
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r > n / r) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

/// Inverse of a modulo m, or nullopt when gcd(a, m) != 1.
constexpr std::optional<std::uint64_t> mod_inverse(std::uint64_t a, std::uint64_t m) noexcept {
  if (m == 1) return 0;
  std::int64_t old_r = static_cast<std::int64_t>(a % m), r = static_cast<std::int64_t>(m);
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) return std::nullopt;
  const auto mm = static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(((old_s % mm) + mm) % mm);
}

struct Congruence {
  std::uint64_t residue;
  std::uint64_t modulus;
};

/// Combines x = a.residue (mod a.modulus) and x = b.residue (mod b.modulus)
/// for coprime moduli. The combined modulus must fit in 64 bits.
inline Congruence crt_combine(Congruence a, Congruence b) {
  const auto inv = mod_inverse(a.modulus % b.modulus, b.modulus);
  if (!inv) throw invalid_argument("crt_combine: moduli are not coprime");
  const std::uint64_t ra = a.residue % b.modulus;
  const std::uint64_t diff = (b.residue % b.modulus + b.modulus - ra) % b.modulus;
  const auto t = static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(diff) * *inv) % b.modulus);
  return {a.residue + a.modulus * t, a.modulus * b.modulus};
}

}  // namespace exsieve
