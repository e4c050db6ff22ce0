#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "exsieve/errors.hpp"

namespace exsieve {

/// Finite multiset of positive integers kept as a sorted sequence.
class Multiset {
 public:
  Multiset() = default;
  Multiset(std::vector<std::uint64_t> values) : values_(std::move(values)) {  // NOLINT
    if (std::find(values_.begin(), values_.end(), 0) != values_.end())
      throw invalid_argument("Multiset: elements must be positive");
    std::sort(values_.begin(), values_.end());
  }
  Multiset(std::initializer_list<std::uint64_t> values) : Multiset(std::vector<std::uint64_t>(values)) {}

  static Multiset range(std::uint64_t first, std::uint64_t last) {
    std::vector<std::uint64_t> v;
    for (std::uint64_t k = first; k <= last; ++k) v.push_back(k);
    return Multiset(std::move(v));
  }

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  const std::vector<std::uint64_t>& values() const noexcept { return values_; }

  /// No value occurs in both.
  bool disjoint_from(const Multiset& other) const {
    auto a = values_.begin(), b = other.values_.begin();
    while (a != values_.end() && b != other.values_.end()) {
      if (*a == *b) return false;
      if (*a < *b) ++a; else ++b;
    }
    return true;
  }

  friend Multiset operator+(const Multiset& lhs, const Multiset& rhs) {
    Multiset out;
    out.values_.reserve(lhs.size() + rhs.size());
    std::merge(lhs.values_.begin(), lhs.values_.end(), rhs.values_.begin(), rhs.values_.end(),
               std::back_inserter(out.values_));
    return out;
  }

  bool operator==(const Multiset&) const = default;

 private:
  std::vector<std::uint64_t> values_;
};

/// The argument of S(A, P, z): a multiset, a set of primes, and a real threshold.
struct SieveInstance {
  Multiset elements;
  std::vector<std::uint64_t> primes;
  double threshold = 2.0;
};

/// Elements of A divisible by no p in P with p < z (strict).
inline std::uint64_t sieve_count(const Multiset& elements, const std::vector<std::uint64_t>& primes,
                                 double threshold) {
  std::vector<std::uint64_t> active;
  for (auto p : primes)
    if (static_cast<double>(p) < threshold) active.push_back(p);
  std::uint64_t survivors = 0;
  for (auto a : elements.values()) {
    bool hit = false;
    for (auto p : active) {
      if (a % p == 0) {
        hit = true;
        break;
      }
    }
    survivors += !hit;
  }
  return survivors;
}

inline std::uint64_t sieve_count(const SieveInstance& inst) {
  return sieve_count(inst.elements, inst.primes, inst.threshold);
}

/// A base instance and a disjoint increment.
class IncrementSet {
 public:
  IncrementSet(SieveInstance base, Multiset delta) : base_(std::move(base)), delta_(std::move(delta)) {
    if (!base_.elements.disjoint_from(delta_))
      throw invalid_argument("IncrementSet: base and increment must be disjoint");
  }
  const SieveInstance& base() const noexcept { return base_; }
  const Multiset& delta() const noexcept { return delta_; }

 private:
  SieveInstance base_;
  Multiset delta_;
};

struct IncrementBound {
  std::uint64_t lhs;  // S(A + dA, P, z1)
  std::uint64_t rhs;  // S(A, P, z2) + |dA|
  bool holds() const noexcept { return lhs <= rhs; }
  bool strict() const noexcept { return lhs < rhs; }
};

inline IncrementBound increment_bound(const IncrementSet& inc, double z1, double z2) {
  if (z1 < z2) throw invalid_argument("increment_bound: requires z1 >= z2");
  const auto& b = inc.base();
  return {sieve_count(b.elements + inc.delta(), b.primes, z1),
          sieve_count(b.elements, b.primes, z2) + inc.delta().size()};
}

/// true if the even number is exceptional.
using EvenClassifier = std::function<bool(std::uint64_t)>;

struct PigeonholeResult {
  std::optional<std::uint64_t> found;  // least non-exceptional even in the interval
  std::uint64_t distance = 0;          // found - M
  std::uint64_t exceptional_seen = 0;  // exceptional evens passed before `found`
  bool exhausted() const noexcept { return !found.has_value(); }
};

/// Least non-exceptional even number in [M, M + 2 * half_width].
inline PigeonholeResult pigeonhole_interval(std::uint64_t start, std::uint64_t half_width,
                                            const EvenClassifier& is_exceptional) {
  if (start % 2 != 0) throw invalid_argument("pigeonhole_interval: M must be even");
  PigeonholeResult r;
  for (std::uint64_t k = 0; k <= half_width; ++k) {
    const std::uint64_t n = start + 2 * k;
    if (!is_exceptional(n)) {
      r.found = n;
      r.distance = n - start;
      return r;
    }
    ++r.exceptional_seen;
  }
  return r;
}

}  // namespace exsieve
