#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>

#include "exsieve/arith.hpp"
#include "exsieve/errors.hpp"
#include "exsieve/pair_counts.hpp"
#include "exsieve/prime_table.hpp"

namespace exsieve {

inline constexpr std::uint64_t kDefaultTruncationLimit = 1'000'000;

/// A truncated product together with an upper bound on what the omitted tail can change.
struct SeriesValue {
  double value = 0;
  std::uint64_t truncation_limit = 0;
  double tail_bound = 0;
};

/// prod over odd primes p <= limit of (1 - 1/(p-1)^2).
///
/// The omitted factors multiply the value by prod_{p > L}(1 - x_p) >= 1 - sum x_p, and
/// sum_{p > L} 1/(p-1)^2 <= sum_{k >= L} 1/k^2 <= 1/(L-1), so value/(L-1) bounds the change.
inline SeriesValue twin_constant(const PrimeTable& table, std::uint64_t truncation_limit) {
  if (truncation_limit < 3) throw invalid_argument("twin_constant: truncation limit must be >= 3");
  if (truncation_limit > table.limit()) throw out_of_range("twin_constant: limit exceeds table");
  double product = 1.0;
  table.for_each_odd_prime(3, truncation_limit, [&](std::uint64_t p) {
    const double q = static_cast<double>(p - 1);
    product *= 1.0 - 1.0 / (q * q);
  });
  return {product, truncation_limit, product / static_cast<double>(truncation_limit - 1)};
}

inline SeriesValue twin_constant(std::uint64_t truncation_limit = kDefaultTruncationLimit) {
  return twin_constant(PrimeTable::build(std::max<std::uint64_t>(truncation_limit, 3)), truncation_limit);
}

/// prod over odd primes p | n of (p-1)/(p-2), factoring n by trial division with the table's primes.
inline double divisor_correction(const PrimeTable& table, std::uint64_t n) {
  const std::uint64_t root = isqrt(n);
  if (root > table.limit()) throw out_of_range("singular_series: table does not reach sqrt(n)");
  while (n % 2 == 0 && n > 0) n /= 2;
  double factor = 1.0;
  auto apply = [&](std::uint64_t p) {
    factor *= static_cast<double>(p - 1) / static_cast<double>(p - 2);
  };
  table.for_each_odd_prime(3, root, [&](std::uint64_t p) {
    if (n % p != 0) return;
    apply(p);
    while (n % p == 0) n /= p;
  });
  if (n > 1) apply(n);  // one prime factor above sqrt(n) can remain
  return factor;
}

/// C(n) = twin constant * prod_{p | n, p > 2} (p-1)/(p-2).
inline SeriesValue singular_series(const PrimeTable& table, std::uint64_t n, const SeriesValue& twin) {
  if (n < 4 || n % 2 != 0) throw invalid_argument("singular_series: n must be even and >= 4");
  const double f = divisor_correction(table, n);
  return {twin.value * f, twin.truncation_limit, twin.tail_bound * f};
}

/// Adaptive Simpson with a relative tolerance.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  struct Impl {
    const std::function<double(double)>& f;
    static double simpson(double a, double fa, double fm, double b, double fb) {
      return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    }
    double rec(double a, double fa, double b, double fb, double m, double fm, double whole, double tol,
               int depth) const {
      const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      const double left = simpson(a, fa, flm, m, fm), right = simpson(m, fm, frm, b, fb);
      const double delta = left + right - whole;
      if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
      return rec(a, fa, m, fm, lm, flm, left, tol / 2, depth - 1) +
             rec(m, fm, b, fb, rm, frm, right, tol / 2, depth - 1);
    }
  } impl{f};
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  const double whole = Impl::simpson(a, fa, fm, b, fb);
  // Absolute target from a coarse estimate of the integral's size.
  const double scale = std::max(std::abs(whole), std::numeric_limits<double>::min());
  return impl.rec(a, fa, b, fb, m, fm, whole, rel_tol * scale, 60);
}

/// integral from 2 to x of dt / ln^2 t.
inline double log_squared_integral(double x, double rel_tol = 1e-8) {
  if (x < 2.0) throw invalid_argument("log_squared_integral: x must be >= 2");
  // Over u = ln t the integrand e^u / u^2 is smooth and the range is short.
  auto g = [](double u) { return std::exp(u) / (u * u); };
  return adaptive_simpson(g, std::log(2.0), std::log(x), rel_tol);
}

struct MainTermRecord {
  std::uint64_t n = 0;
  Kind kind = Kind::goldbach;
  double constant = 0;      // C(n), or the twin constant
  double main_term = 0;     // 2 C n / ln^2 n
  double refined_term = 0;  // 2 C * integral_2^n dt / ln^2 t
  std::uint64_t actual = 0;
  double ratio = 0;
  double refined_ratio = 0;
};

/// Hardy-Littlewood main terms against the direct count (twin counts use extended mode).
inline MainTermRecord main_term(const PrimeTable& table, std::uint64_t n, Kind kind, const SeriesValue& twin) {
  if (n < 4 || n % 2 != 0) throw invalid_argument("main_term: n must be even and >= 4");
  MainTermRecord r;
  r.n = n;
  r.kind = kind;
  r.constant = kind == Kind::goldbach ? singular_series(table, n, twin).value : twin.value;
  const double x = static_cast<double>(n), ln = std::log(x);
  r.main_term = 2.0 * r.constant * x / (ln * ln);
  r.refined_term = 2.0 * r.constant * log_squared_integral(x);
  r.actual = direct_count(table, n, kind, TwinMode::extended);
  r.ratio = static_cast<double>(r.actual) / r.main_term;
  r.refined_ratio = static_cast<double>(r.actual) / r.refined_term;
  return r;
}

}  // namespace exsieve
