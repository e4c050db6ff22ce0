#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "exsieve/sieve_function.hpp"

namespace exsieve {

struct PropertyOutcome {
  std::string name;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  bool passed() const noexcept { return failures == 0; }
};

struct AxiomSuiteReport {
  std::uint64_t seed = 0;
  std::vector<PropertyOutcome> properties;
  std::uint64_t increment_equalities = 0;  // cases where lhs == rhs, i.e. "<" would have failed
  bool passed() const noexcept {
    for (const auto& p : properties)
      if (!p.passed()) return false;
    return true;
  }
};

/// Seeded generator of small sieve instances.
class InstanceGenerator {
 public:
  explicit InstanceGenerator(std::uint64_t seed) : rng_(seed) {}

  Multiset multiset(std::size_t max_size, std::uint64_t max_value) {
    std::vector<std::uint64_t> v(pick(0, max_size));
    for (auto& x : v) x = pick(1, max_value);
    return Multiset(std::move(v));
  }

  /// Multiset whose values avoid every value of `avoid`; nonempty when possible.
  Multiset disjoint_multiset(const Multiset& avoid, std::size_t max_size, std::uint64_t max_value) {
    std::vector<std::uint64_t> v;
    const std::size_t want = pick(1, max_size);
    for (std::size_t tries = 0; v.size() < want && tries < 50 * want; ++tries) {
      const std::uint64_t x = pick(1, max_value);
      if (!std::binary_search(avoid.values().begin(), avoid.values().end(), x)) v.push_back(x);
    }
    return Multiset(std::move(v));
  }

  std::vector<std::uint64_t> prime_subset() {
    static constexpr std::uint64_t kPool[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};
    std::vector<std::uint64_t> out;
    for (auto p : kPool)
      if (pick(0, 2) != 0) out.push_back(p);
    return out;
  }

  double threshold() { return std::uniform_real_distribution<double>(1.0, 60.0)(rng_); }

  std::uint64_t pick(std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng_);
  }

 private:
  std::mt19937_64 rng_;
};

/// Monotonicity, bounds, additivity and the increment inequality on random instances.
inline AxiomSuiteReport run_axiom_suite(std::uint64_t cases, std::uint64_t seed) {
  AxiomSuiteReport report;
  report.seed = seed;
  PropertyOutcome mono{"monotonicity"}, bounds{"bounds"}, additivity{"additivity"}, increment{"increment"};
  InstanceGenerator gen(seed);
  constexpr std::size_t kMaxSize = 40;
  constexpr std::uint64_t kMaxValue = 500;

  for (std::uint64_t i = 0; i < cases; ++i) {
    const auto a = gen.multiset(kMaxSize, kMaxValue);
    const auto primes = gen.prime_subset();
    double z1 = gen.threshold(), z2 = gen.threshold();
    if (z1 < z2) std::swap(z1, z2);

    ++mono.cases;
    if (sieve_count(a, primes, z1) > sieve_count(a, primes, z2)) ++mono.failures;

    ++bounds.cases;
    if (sieve_count(a, primes, z1) > a.size()) ++bounds.failures;

    const auto delta = gen.disjoint_multiset(a, kMaxSize / 2, kMaxValue);
    ++additivity.cases;
    if (sieve_count(a + delta, primes, z2) != sieve_count(a, primes, z2) + sieve_count(delta, primes, z2))
      ++additivity.failures;

    ++increment.cases;
    const auto b = increment_bound(IncrementSet({a, primes, z1}, delta), z1, z2);
    if (!b.holds()) ++increment.failures;
    if (b.lhs == b.rhs) ++report.increment_equalities;
  }
  report.properties = {mono, bounds, additivity, increment};
  return report;
}

}  // namespace exsieve
