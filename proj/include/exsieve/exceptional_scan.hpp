#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "exsieve/errors.hpp"
#include "exsieve/pair_counts.hpp"
#include "exsieve/prime_table.hpp"
#include "exsieve/sieve_function.hpp"

namespace exsieve {

inline constexpr std::uint64_t kDefaultMaxScan = 100'000'000;

struct ScanConfig {
  std::uint64_t x = 4;
  Kind kind = Kind::goldbach;
  TwinMode mode = TwinMode::extended;
  double exponent_a = 5.0;
  unsigned worker_count = 1;
  std::uint64_t segment_size = std::uint64_t{1} << 16;  // integers per work item
  std::uint64_t max_x = kDefaultMaxScan;

  void validate() const {
    if (x < 4 || x % 2 != 0) throw invalid_argument("ScanConfig: x must be even and >= 4");
    if (!(exponent_a > 0)) throw invalid_argument("ScanConfig: exponent A must be positive");
    if (worker_count == 0) throw invalid_argument("ScanConfig: worker_count must be positive");
    if (segment_size < 2) throw invalid_argument("ScanConfig: segment_size must be >= 2");
    if (x > max_x)
      throw limit_exceeded("scan bound " + std::to_string(x) + " exceeds maximum " + std::to_string(max_x));
  }

  /// Largest integer whose primality the scan reads.
  std::uint64_t table_limit() const { return kind == Kind::twin ? x + 2 : x; }
};

struct CurvePoint {
  std::uint64_t x;
  double bound;  // x / ln^A x
  std::uint64_t observed = 0;
};

struct ExceptionalReport {
  std::uint64_t x = 0;
  Kind kind = Kind::goldbach;
  TwinMode mode = TwinMode::extended;
  double exponent_a = 5.0;
  std::vector<std::uint64_t> elements;
  std::uint64_t count = 0;
  std::vector<CurvePoint> curve;
  bool recount_verified = false;

  bool contains(std::uint64_t n) const { return std::binary_search(elements.begin(), elements.end(), n); }

  /// E(y) for y <= x.
  std::uint64_t count_upto(std::uint64_t y) const {
    return static_cast<std::uint64_t>(std::upper_bound(elements.begin(), elements.end(), y) - elements.begin());
  }
};

/// Up to `points` samples x, x / 10^(1/4), x / 10^(1/2), ... (rounded down to even, >= 16), ascending.
inline std::vector<CurvePoint> bound_curve(std::uint64_t x, double exponent_a, std::size_t points) {
  if (!(exponent_a > 0)) throw invalid_argument("bound_curve: A must be positive");
  if (x < 16) throw invalid_argument("bound_curve: x must be >= 16");
  std::vector<CurvePoint> out;
  const double step = std::pow(10.0, 0.25);
  double xi = static_cast<double>(x);
  for (std::size_t i = 0; i < points; ++i, xi /= step) {
    auto n = static_cast<std::uint64_t>(std::floor(xi));
    n -= n % 2;
    if (n < 16) break;
    if (!out.empty() && out.back().x == n) continue;
    const double l = std::log(static_cast<double>(n));
    out.push_back({n, static_cast<double>(n) / std::pow(l, exponent_a), 0});
  }
  std::reverse(out.begin(), out.end());
  return out;
}

/// Enough points to reach down to 16.
inline std::size_t default_curve_points(std::uint64_t x) {
  if (x < 16) return 0;
  return static_cast<std::size_t>(std::floor(4.0 * std::log10(static_cast<double>(x) / 16.0))) + 1;
}

namespace detail {

/// Early-exit test: tries p = 3, 5, 7, ... until n - p is prime.
class GoldbachProbe {
 public:
  explicit GoldbachProbe(const PrimeTable& t) : table_(t), small_(t.primes(3, std::min<std::uint64_t>(t.limit(), 1u << 16))) {}

  bool representable(std::uint64_t n) const {
    const std::uint64_t half = n / 2;
    for (auto p : small_) {
      if (p > half) return false;
      if (table_.test(n - p)) return true;
    }
    bool found = false;
    const std::uint64_t from = small_.empty() ? 3 : small_.back() + 1;
    // Rare: falls off the small-prime list.
    table_.for_each_odd_prime(from, half, [&](std::uint64_t p) { found = found || table_.test(n - p); });
    return found;
  }

 private:
  const PrimeTable& table_;
  std::vector<std::uint64_t> small_;
};

class TwinProbe {
 public:
  TwinProbe(const PrimeTable& t, TwinMode mode) : table_(t), mode_(mode) {}

  bool representable(std::uint64_t n) const {
    const std::uint64_t top = mode_ == TwinMode::extended ? n : n - 2;
    bool found = false;
    for (std::uint64_t p = 3; p <= top && !found; p += 2) found = table_.test(p) && table_.test(p + 2);
    return found;
  }

 private:
  const PrimeTable& table_;
  TwinMode mode_;
};

template <class Probe>
std::vector<std::uint64_t> parallel_scan(const ScanConfig& cfg, const Probe& probe) {
  // Even n in [4, x], cut into work items of segment_size integers.
  const std::uint64_t span = cfg.x - 4 + 1;
  const std::uint64_t items = (span + cfg.segment_size - 1) / cfg.segment_size;
  std::vector<std::vector<std::uint64_t>> partial(items);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t i = next++; i < items; i = next++) {
      std::uint64_t lo = 4 + i * cfg.segment_size;
      const std::uint64_t hi = std::min(cfg.x, lo + cfg.segment_size - 1);
      lo += lo % 2;
      for (std::uint64_t n = lo; n <= hi; n += 2)
        if (!probe.representable(n)) partial[i].push_back(n);
    }
  };
  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(cfg.worker_count, items));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  std::vector<std::uint64_t> merged;
  for (auto& p : partial) merged.insert(merged.end(), p.begin(), p.end());
  return merged;
}

inline ExceptionalReport finish_report(const ScanConfig& cfg, const PrimeTable& table,
                                       std::vector<std::uint64_t> elements) {
  ExceptionalReport r;
  r.x = cfg.x;
  r.kind = cfg.kind;
  r.mode = cfg.mode;
  r.exponent_a = cfg.exponent_a;
  r.elements = std::move(elements);
  r.count = r.elements.size();
  // Full recount, independent of the early-exit probes.
  r.recount_verified = std::all_of(r.elements.begin(), r.elements.end(), [&](std::uint64_t n) {
    return direct_count(table, n, cfg.kind, cfg.mode) == 0;
  });
  if (cfg.x >= 16) {
    r.curve = bound_curve(cfg.x, cfg.exponent_a, default_curve_points(cfg.x));
    for (auto& pt : r.curve) pt.observed = r.count_upto(pt.x);
  }
  return r;
}

inline void require_table(const ScanConfig& cfg, const PrimeTable& table) {
  if (table.limit() < cfg.table_limit())
    throw out_of_range("scan: table limit " + std::to_string(table.limit()) + " below required " +
                       std::to_string(cfg.table_limit()));
}

}  // namespace detail

/// Even n in (2, x] with no decomposition into two odd primes.
inline ExceptionalReport scan_goldbach_exceptional(ScanConfig cfg, const PrimeTable& table) {
  cfg.kind = Kind::goldbach;
  cfg.validate();
  detail::require_table(cfg, table);
  const detail::GoldbachProbe probe(table);
  return detail::finish_report(cfg, table, detail::parallel_scan(cfg, probe));
}

/// Even n in (2, x] with count_twin(n, mode) == 0.
inline ExceptionalReport scan_twin_exceptional(ScanConfig cfg, const PrimeTable& table) {
  cfg.kind = Kind::twin;
  cfg.validate();
  detail::require_table(cfg, table);
  const detail::TwinProbe probe(table, cfg.mode);
  return detail::finish_report(cfg, table, detail::parallel_scan(cfg, probe));
}

inline ExceptionalReport scan_exceptional(const ScanConfig& cfg, const PrimeTable& table) {
  return cfg.kind == Kind::goldbach ? scan_goldbach_exceptional(cfg, table) : scan_twin_exceptional(cfg, table);
}

inline ExceptionalReport scan_exceptional(const ScanConfig& cfg) {
  cfg.validate();
  return scan_exceptional(cfg, PrimeTable::build(cfg.table_limit()));
}

struct IntervalExperiment {
  std::uint64_t start = 0;       // M
  std::uint64_t half_width = 0;  // observed E(x)
  PigeonholeResult result;
  bool start_exceptional = false;
  /// A non-exceptional even was found no further than 2 E(x) from M.
  bool within_bound() const noexcept { return !result.exhausted() && result.distance <= 2 * half_width; }
};

/// Runs the pigeonhole search from M with half-width E(x) against a finished scan.
inline IntervalExperiment interval_experiment(const ExceptionalReport& report, std::uint64_t start) {
  if (start % 2 != 0 || start < 4) throw invalid_argument("interval_experiment: M must be even and >= 4");
  const std::uint64_t end = start + 2 * report.count;
  if (end > report.x) throw out_of_range("interval_experiment: [M, M + 2E(x)] leaves the scanned range");
  IntervalExperiment e;
  e.start = start;
  e.half_width = report.count;
  e.start_exceptional = report.contains(start);
  e.result = pigeonhole_interval(start, report.count, [&](std::uint64_t n) { return report.contains(n); });
  return e;
}

inline IntervalExperiment interval_experiment(const ScanConfig& cfg, std::uint64_t start) {
  return interval_experiment(scan_exceptional(cfg), start);
}

}  // namespace exsieve
