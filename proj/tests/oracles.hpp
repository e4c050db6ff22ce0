#pragma once

// Brute-force references used only by the tests. Nothing here touches the
// bit-packed table or the Mobius walk.

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

namespace oracle {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<std::uint64_t> primes_upto(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = 2; k <= n; ++k)
    if (is_prime(k)) out.push_back(k);
  return out;
}

/// Sieve of flags over [0, n] by trial division; cached by the caller for speed.
inline std::vector<bool> prime_flags(std::uint64_t n) {
  std::vector<bool> f(n + 1);
  for (std::uint64_t k = 0; k <= n; ++k) f[k] = is_prime(k);
  return f;
}

/// Ordered pairs (p, q) of odd primes with p + q = n.
inline std::uint64_t goldbach_pairs(const std::vector<bool>& f, std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t p = 3; p + 3 <= n; ++p)
    if (f[p] && f[n - p]) ++c;
  return c;
}

inline std::uint64_t twin_pairs(const std::vector<bool>& f, std::uint64_t n, bool strict) {
  std::uint64_t c = 0;
  for (std::uint64_t p = 3; p <= n; ++p) {
    if (strict && p + 2 > n) break;
    if (f[p] && f[p + 2]) ++c;
  }
  return c;
}

/// The union of residue classes, built as an explicit set.
inline std::set<std::uint64_t> residue_union(const std::vector<bool>& f, std::uint64_t n, bool goldbach) {
  std::set<std::uint64_t> u;
  for (std::uint64_t p = 3; p * p <= n; ++p) {
    if (!f[p]) continue;
    const std::uint64_t r = goldbach ? n % p : p - 2;
    for (std::uint64_t a = r; a <= n; a += p)
      if (f[a]) u.insert(a);
  }
  return u;
}

inline std::uint64_t pi(const std::vector<bool>& f, std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t k = 0; k <= n; ++k) c += f[k];
  return c;
}

/// integral_2^x dt / ln^2 t by composite Simpson in t with `steps` panels.
inline double log_squared_integral_simpson(double x, std::uint64_t steps) {
  if (steps % 2) ++steps;
  const double h = (x - 2.0) / static_cast<double>(steps);
  auto f = [](double t) { return 1.0 / (std::log(t) * std::log(t)); };
  double s = f(2.0) + f(x);
  for (std::uint64_t i = 1; i < steps; ++i) s += f(2.0 + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// li(x) by the Ramanujan series; integral_2^x dt/ln^2 t = li(x) - x/ln x - li(2) + 2/ln 2.
inline double li(double x) {
  constexpr double kGamma = 0.57721566490153286061;
  const double l = std::log(x);
  double sum = 0, fact = 1, pow_l = 1;
  for (int n = 1; n < 200; ++n) {
    fact *= n;
    pow_l *= l;
    double inner = 0;
    for (int k = 0; k <= (n - 1) / 2; ++k) inner += 1.0 / (2 * k + 1);
    const double term = ((n - 1) % 2 ? -1.0 : 1.0) * pow_l / (fact * std::ldexp(1.0, n - 1)) * inner;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return kGamma + std::log(l) + std::sqrt(x) * sum;
}

inline double log_squared_integral_li(double x) {
  return li(x) - x / std::log(x) - li(2.0) + 2.0 / std::log(2.0);
}

}  // namespace oracle
