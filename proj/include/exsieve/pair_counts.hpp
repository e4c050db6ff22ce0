#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "exsieve/arith.hpp"
#include "exsieve/errors.hpp"
#include "exsieve/prime_table.hpp"

namespace exsieve {

enum class Kind { goldbach, twin };

/// strict: p + 2 must itself be <= n. extended: p + 2 may reach n + 2.
enum class TwinMode { strict, extended };

inline std::string_view to_string(Kind k) { return k == Kind::goldbach ? "goldbach" : "twin"; }
inline std::string_view to_string(TwinMode m) { return m == TwinMode::strict ? "strict" : "extended"; }

inline Kind parse_kind(std::string_view s) {
  if (s == "goldbach") return Kind::goldbach;
  if (s == "twin") return Kind::twin;
  throw invalid_argument("unknown kind: " + std::string(s));
}

inline TwinMode parse_mode(std::string_view s) {
  if (s == "strict") return TwinMode::strict;
  if (s == "extended") return TwinMode::extended;
  throw invalid_argument("unknown mode: " + std::string(s));
}

namespace detail {

inline void require_even(std::uint64_t n, std::uint64_t min, const char* who) {
  if (n % 2 != 0 || n < min)
    throw invalid_argument(std::string(who) + ": n must be even and >= " + std::to_string(min));
}

inline void require_covered(const PrimeTable& t, std::uint64_t n, const char* who) {
  if (n > t.limit())
    throw out_of_range(std::string(who) + ": " + std::to_string(n) + " exceeds table limit " +
                       std::to_string(t.limit()));
}

/// Residue each sieving prime removes: n mod p (goldbach) or p - 2 (twin).
inline std::uint64_t sieving_residue(Kind kind, std::uint64_t n, std::uint64_t p) {
  return kind == Kind::goldbach ? n % p : p - 2;
}

}  // namespace detail

struct SequencePair {
  std::uint64_t alpha;
  std::optional<std::uint64_t> beta;
};

/// alpha = 1..n paired with beta_g = n - alpha (undefined at alpha = n) or beta_t = alpha + 2.
inline std::vector<SequencePair> alpha_beta(std::uint64_t n, Kind kind) {
  detail::require_even(n, 4, "alpha_beta");
  std::vector<SequencePair> out;
  out.reserve(n);
  for (std::uint64_t i = 1; i <= n; ++i) {
    if (kind == Kind::goldbach)
      out.push_back({i, i < n ? std::optional<std::uint64_t>(n - i) : std::nullopt});
    else
      out.push_back({i, i + 2});
  }
  return out;
}

/// Ordered decompositions n = p + q with p, q odd primes.
inline std::uint64_t count_goldbach(const PrimeTable& table, std::uint64_t n) {
  detail::require_even(n, 4, "count_goldbach");
  detail::require_covered(table, n, "count_goldbach");
  std::uint64_t count = 0;
  if (n < 6) return 0;
  table.for_each_odd_prime(3, n - 3, [&](std::uint64_t p) { count += table.test(n - p); });
  return count;
}

/// Odd primes p <= n with p + 2 prime (and p + 2 <= n in strict mode).
inline std::uint64_t count_twin(const PrimeTable& table, std::uint64_t n, TwinMode mode = TwinMode::extended) {
  detail::require_even(n, 4, "count_twin");
  const std::uint64_t top = mode == TwinMode::extended ? n : n - 2;
  detail::require_covered(table, top + 2, "count_twin");
  std::uint64_t count = 0;
  table.for_each_odd_prime(3, top, [&](std::uint64_t p) { count += table.test(p + 2); });
  return count;
}

inline std::uint64_t direct_count(const PrimeTable& table, std::uint64_t n, Kind kind,
                                  TwinMode mode = TwinMode::extended) {
  return kind == Kind::goldbach ? count_goldbach(table, n) : count_twin(table, n, mode);
}

/// Odd primes <= sqrt(n): the sieving set for both Mobius forms.
inline std::vector<std::uint64_t> sieving_primes(const PrimeTable& table, std::uint64_t n) {
  return table.primes(3, isqrt(n));
}

namespace detail {

/// inv[x] = x^-1 mod p for 1 <= x < p, p prime.
inline std::vector<std::uint32_t> inverse_table(std::uint64_t p) {
  std::vector<std::uint32_t> inv(p, 0);
  if (p > 1) inv[1] = 1;
  for (std::uint64_t i = 2; i < p; ++i) inv[i] = static_cast<std::uint32_t>((p - (p / i) * inv[p % i] % p) % p);
  return inv;
}

struct MobiusWalk {
  const PrimeTable& table;
  std::uint64_t n;
  const std::vector<std::uint64_t>& primes;
  const std::vector<std::uint64_t>& residues;
  std::vector<std::vector<std::uint32_t>> inverses;
  std::int64_t total = 0;
  std::uint64_t terms = 0;

  MobiusWalk(const PrimeTable& t, std::uint64_t n_, const std::vector<std::uint64_t>& ps,
             const std::vector<std::uint64_t>& rs)
      : table(t), n(n_), primes(ps), residues(rs) {
    inverses.reserve(ps.size());
    for (auto p : ps) inverses.push_back(inverse_table(p));
  }

  // CRT step: the class r (mod d) refined by residues[j] (mod primes[j]).
  Congruence refine(Congruence cls, std::size_t j) const {
    const std::uint64_t q = primes[j];
    std::uint64_t t;
    if (cls.modulus <= std::numeric_limits<std::uint32_t>::max()) {
      // residue < modulus here, so 32-bit division suffices
      const auto q32 = static_cast<std::uint32_t>(q);
      const auto r32 = static_cast<std::uint32_t>(cls.residue), d32 = static_cast<std::uint32_t>(cls.modulus);
      const std::uint32_t rq = static_cast<std::uint32_t>(residues[j]);
      const std::uint32_t rr = r32 % q32;
      const std::uint32_t diff = rq >= rr ? rq - rr : rq + q32 - rr;
      t = static_cast<std::uint32_t>(static_cast<std::uint64_t>(diff) * inverses[j][d32 % q32] % q32);
    } else {
      const std::uint64_t diff = (residues[j] + q - cls.residue % q) % q;
      t = diff * inverses[j][cls.modulus % q] % q;
    }
    return {cls.residue + cls.modulus * t, cls.modulus * q};
  }

  // Below this many members a class is refined by filtering its members directly.
  static constexpr std::uint64_t kExplicitClass = 8;

  // Refinements of an explicitly listed class: pi(n, d q, r_{d q}) is the number of
  // members in the residue class of q.
  void explicit_walk(std::size_t from, const std::vector<std::uint64_t>& members, int sign) {
    std::vector<std::uint64_t> sub;
    for (std::size_t j = from; j < primes.size(); ++j) {
      sub.clear();
      for (auto a : members)
        if (a % primes[j] == residues[j]) sub.push_back(a);
      if (sub.empty()) continue;
      ++terms;
      total -= sign * static_cast<std::int64_t>(sub.size());
      explicit_walk(j + 1, sub, -sign);
    }
  }

  std::vector<std::uint64_t> members(Congruence cls) const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t k = cls.residue; k <= n; k += cls.modulus)
      if (table.test(k)) out.push_back(k);
    return out;
  }

  void walk(std::size_t from, Congruence cls, int sign) {
    for (std::size_t j = from; j < primes.size(); ++j) {
      const Congruence next = refine(cls, j);
      const int child = -sign;
      if (next.modulus <= n) {
        const std::uint64_t c = prime_pi_residue(table, n, next.modulus, next.residue);
        if (c == 0) continue;  // every refinement of an empty class is empty too
        ++terms;
        total += child * static_cast<std::int64_t>(c);
        if (c <= kExplicitClass)
          explicit_walk(j + 1, members(next), child);
        else
          walk(j + 1, next, child);
      } else if (next.residue <= n && table.test(next.residue)) {
        // A modulus above n leaves at most one prime: the residue itself.
        ++terms;
        total += child;
        explicit_walk(j + 1, {next.residue}, child);
      }
    }
  }
};

}  // namespace detail

struct MobiusEvaluation {
  std::uint64_t value;            // pi(n) + sum_{d > 1} mu(d) pi(n, d, r_d)
  std::int64_t correction;        // the d > 1 part of the sum
  std::uint64_t nonzero_terms;    // terms with pi(n, d, r_d) > 0, d = 1 included
};

/// pi(n) + sum over squarefree d > 1 built from odd primes <= sqrt(n) of
/// mu(d) * pi(n, d, r_d), with r_d the CRT composition of the per-prime residues.
inline MobiusEvaluation moebius_evaluate(const PrimeTable& table, std::uint64_t n, Kind kind) {
  if (n < 9) throw invalid_argument("moebius_survivors: n must be at least 9");
  detail::require_covered(table, n, "moebius_survivors");
  const auto primes = sieving_primes(table, n);
  std::vector<std::uint64_t> residues;
  residues.reserve(primes.size());
  for (auto p : primes) residues.push_back(detail::sieving_residue(kind, n, p));
  detail::MobiusWalk w(table, n, primes, residues);
  w.walk(0, {0, 1}, 1);
  const auto pi_n = static_cast<std::int64_t>(table.pi(n));
  return {static_cast<std::uint64_t>(pi_n + w.total), w.total, w.terms + 1};
}

inline std::uint64_t moebius_survivors(const PrimeTable& table, std::uint64_t n, Kind kind) {
  return moebius_evaluate(table, n, kind).value;
}

/// |union over odd p <= sqrt(n) of {a prime <= n : a = r_p (mod p)}|, by scanning every prime.
inline std::uint64_t union_count(const PrimeTable& table, std::uint64_t n, Kind kind) {
  if (n < 9) throw invalid_argument("union_count: n must be at least 9");
  detail::require_covered(table, n, "union_count");
  const auto primes = sieving_primes(table, n);
  std::vector<std::uint64_t> residues;
  for (auto p : primes) residues.push_back(detail::sieving_residue(kind, n, p));
  auto hit = [&](std::uint64_t a) {
    for (std::size_t i = 0; i < primes.size(); ++i)
      if (a % primes[i] == residues[i]) return true;
    return false;
  };
  std::uint64_t count = hit(2) ? 1 : 0;
  table.for_each_odd_prime(3, n, [&](std::uint64_t a) { count += hit(a); });
  return count;
}

/// Allowed gap between the Mobius form and the direct count.
inline std::uint64_t closeness_tolerance(const PrimeTable& table, std::uint64_t n) {
  return 2 * table.pi(isqrt(n)) + 3;
}

struct PairCountRecord {
  std::uint64_t n = 0;
  Kind kind = Kind::goldbach;
  TwinMode mode = TwinMode::extended;
  std::uint64_t direct = 0;
  std::uint64_t moebius_survivors = 0;
  std::uint64_t union_size = 0;
  std::uint64_t prime_count = 0;

  bool identity_holds() const noexcept { return moebius_survivors + union_size == prime_count; }
  std::uint64_t gap() const noexcept {
    return direct > moebius_survivors ? direct - moebius_survivors : moebius_survivors - direct;
  }
};

inline PairCountRecord pair_count_record(const PrimeTable& table, std::uint64_t n, Kind kind,
                                         TwinMode mode = TwinMode::extended) {
  PairCountRecord r;
  r.n = n;
  r.kind = kind;
  r.mode = mode;
  r.direct = direct_count(table, n, kind, mode);
  r.moebius_survivors = moebius_survivors(table, n, kind);
  r.union_size = union_count(table, n, kind);
  r.prime_count = table.pi(n);
  return r;
}

struct DifferenceDecomposition {
  std::uint64_t n1 = 0, n2 = 0;
  std::uint64_t delta_p_size = 0;  // primes in (n2, n1]
  std::uint64_t set1_size = 0;
  std::uint64_t set2_size = 0;
  std::int64_t d_diff = 0;  // D_t(n1) - D_t(n2)
  std::optional<std::uint64_t> p_min;  // least prime in (sqrt(n2), sqrt(n1)]

  // |set1| < (n2 / p_min)(sqrt(n1) - sqrt(n2)) < sqrt(n1 n2) - n2 < n1 - n2
  double set1_majorant = 0, middle_bound = 0, outer_bound = 0;
  std::optional<bool> set1_below_majorant, majorant_below_middle, middle_below_outer;

  bool degenerate() const noexcept { return !p_min.has_value(); }
  /// 0 <= d_diff < n1 - n2
  bool difference_bound_holds() const noexcept {
    return d_diff >= 0 && static_cast<std::uint64_t>(d_diff) < n1 - n2;
  }
  /// d_diff - (|set2| - |set1|): how far the limit form is from the observed difference.
  std::int64_t limit_gap() const noexcept {
    return d_diff - (static_cast<std::int64_t>(set2_size) - static_cast<std::int64_t>(set1_size));
  }
};

inline DifferenceDecomposition difference_decomposition(const PrimeTable& table, std::uint64_t n1,
                                                        std::uint64_t n2, TwinMode mode = TwinMode::extended) {
  if (n1 % 2 || n2 % 2) throw invalid_argument("difference_decomposition: n1 and n2 must be even");
  if (n2 < 16 || n1 <= n2) throw invalid_argument("difference_decomposition: requires n1 > n2 >= 16");
  detail::require_covered(table, n1 + 2, "difference_decomposition");

  DifferenceDecomposition d;
  d.n1 = n1;
  d.n2 = n2;
  d.delta_p_size = table.pi(n1) - table.pi(n2);
  d.d_diff = static_cast<std::int64_t>(count_twin(table, n1, mode)) -
             static_cast<std::int64_t>(count_twin(table, n2, mode));

  const std::uint64_t r1 = isqrt(n1), r2 = isqrt(n2);
  // p > sqrt(n2) <=> p > floor(sqrt(n2)) for integer p.
  const auto window = table.primes(r2 + 1, r1);
  if (!window.empty()) d.p_min = window.front();

  table.for_each_odd_prime(3, n2, [&](std::uint64_t a) {
    for (auto p : window) {
      if (a % p == p - 2) {
        ++d.set1_size;
        return;
      }
    }
  });

  const auto all = table.primes(3, r1);
  table.for_each_odd_prime(n2 + 1, n1, [&](std::uint64_t b) {
    for (auto p : all)
      if (b % p == p - 2) return;
    ++d.set2_size;
  });

  const double s1 = std::sqrt(static_cast<double>(n1)), s2 = std::sqrt(static_cast<double>(n2));
  d.middle_bound = std::sqrt(static_cast<double>(n1) * static_cast<double>(n2)) - static_cast<double>(n2);
  d.outer_bound = static_cast<double>(n1 - n2);
  if (d.p_min) {
    d.set1_majorant = static_cast<double>(n2) / static_cast<double>(*d.p_min) * (s1 - s2);
    d.set1_below_majorant = static_cast<double>(d.set1_size) < d.set1_majorant;
    d.majorant_below_middle = d.set1_majorant < d.middle_bound;
  }
  d.middle_below_outer = d.middle_bound < d.outer_bound;
  return d;
}

}  // namespace exsieve
