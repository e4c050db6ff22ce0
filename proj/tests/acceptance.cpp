// Acceptance checks. One PASS/FAIL line per criterion; exit status is nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "exsieve/exsieve.hpp"
#include "oracles.hpp"

using namespace exsieve;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void verdict(int id, bool ok, const std::string& detail) {
  std::printf("%s %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  failures += !ok;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const PrimeTable& table() {
  static const PrimeTable t = PrimeTable::build(1'000'002);
  return t;
}

ScanConfig scan_config(std::uint64_t x, Kind kind, TwinMode mode, unsigned workers) {
  ScanConfig c;
  c.x = x;
  c.kind = kind;
  c.mode = mode;
  c.worker_count = workers;
  return c;
}

void legendre_identity() {
  const auto t0 = Clock::now();
  std::uint64_t bad = 0, first = 0;
  for (std::uint64_t n = 4; n <= 100'000; ++n)
    if (legendre_count(n) != table().pi(n) && !bad++) first = n;
  const double s = seconds_since(t0);
  verdict(1, bad == 0 && s < 30,
          fmt("legendre_count == prime_pi on [4, 1e5]: %llu mismatches (first %llu), %.2f s",
              (unsigned long long)bad, (unsigned long long)first, s));
}

void inclusion_exclusion() {
  std::uint64_t bad = 0, cases = 0;
  for (std::uint64_t n = 10; n <= 10'000; n += 2)
    for (auto kind : {Kind::goldbach, Kind::twin}) {
      ++cases;
      bad += moebius_survivors(table(), n, kind) + union_count(table(), n, kind) != table().pi(n);
    }
  verdict(2, bad == 0, fmt("survivors + union == pi(n), even 10..1e4, both kinds: %llu/%llu mismatches",
                           (unsigned long long)bad, (unsigned long long)cases));
}

void closeness() {
  // moebius_survivors needs n >= 9, so the range starts at 10.
  const auto t0 = Clock::now();
  std::uint64_t bad = 0, cases = 0, worst = 0, worst_n = 0;
  for (std::uint64_t n = 10; n <= 100'000; n += 2)
    for (auto kind : {Kind::goldbach, Kind::twin}) {
      ++cases;
      const auto m = moebius_survivors(table(), n, kind);
      const auto d = direct_count(table(), n, kind);
      const auto gap = m > d ? m - d : d - m;
      if (gap > closeness_tolerance(table(), n)) ++bad;
      if (gap > worst) worst = gap, worst_n = n;
    }
  verdict(3, bad == 0,
          fmt("|survivors - direct| <= 2 pi(sqrt n) + 3, even 10..1e5, both kinds: %llu/%llu violations, "
              "largest gap %llu at n=%llu, %.1f s",
              (unsigned long long)bad, (unsigned long long)cases, (unsigned long long)worst,
              (unsigned long long)worst_n, seconds_since(t0)));
}

void oracle_equivalence() {
  const auto flags = oracle::prime_flags(10'002);
  std::uint64_t bad = 0;
  for (std::uint64_t n = 4; n <= 10'000; n += 2) {
    bad += count_goldbach(table(), n) != oracle::goldbach_pairs(flags, n);
    bad += count_twin(table(), n, TwinMode::strict) != oracle::twin_pairs(flags, n, true);
    bad += count_twin(table(), n, TwinMode::extended) != oracle::twin_pairs(flags, n, false);
  }
  const auto dg10 = count_goldbach(table(), 10);
  const auto dt = count_twin(table(), 10'000);
  verdict(4, bad == 0 && dg10 == 3 && dt == 205,
          fmt("counts vs trial division for even n <= 1e4: %llu mismatches; D_g(10)=%llu, D_t(1e4)=%llu",
              (unsigned long long)bad, (unsigned long long)dg10, (unsigned long long)dt));
}

void exceptional_scans() {
  const auto t0 = Clock::now();
  const auto table_g = PrimeTable::build(1'000'002);
  const auto g = scan_goldbach_exceptional(scan_config(1'000'000, Kind::goldbach, TwinMode::extended, 1), table_g);
  const auto te = scan_twin_exceptional(scan_config(1'000'000, Kind::twin, TwinMode::extended, 1), table_g);
  const auto ts = scan_twin_exceptional(scan_config(1'000'000, Kind::twin, TwinMode::strict, 1), table_g);
  const double s = seconds_since(t0);
  const std::vector<std::uint64_t> four{4};
  const bool ok = g.elements == four && te.elements.empty() && ts.elements == four && g.recount_verified &&
                  te.recount_verified && ts.recount_verified && s < 60;
  verdict(5, ok, fmt("E_g(1e6) size %zu, E_t extended size %zu, E_t strict size %zu, recounts ok, "
                     "table + three scans single-threaded %.2f s",
                     g.elements.size(), te.elements.size(), ts.elements.size(), s));
}

void axioms() {
  const auto rep = run_axiom_suite(1000, 42);
  std::string detail = "seed 42, 1000 cases:";
  for (const auto& p : rep.properties)
    detail += fmt(" %s %llu/%llu failed;", p.name.c_str(), (unsigned long long)p.failures,
                  (unsigned long long)p.cases);
  detail += fmt(" increment equalities %llu", (unsigned long long)rep.increment_equalities);
  verdict(6, rep.passed(), detail);
}

void difference_bounds() {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::uint64_t> half(8, 500'000);  // the decomposition needs n2 >= 16
  std::uint64_t bound_bad = 0, majorant_checked = 0, majorant_bad = 0, degenerate = 0;
  std::uint64_t chain_middle = 0, chain_outer = 0;
  for (int i = 0; i < 1000; ++i) {
    std::uint64_t a = 2 * half(rng), b = 2 * half(rng);
    while (a == b) b = 2 * half(rng);
    const auto d = difference_decomposition(table(), std::max(a, b), std::min(a, b), TwinMode::extended);
    bound_bad += !d.difference_bound_holds();
    if (d.degenerate()) {
      ++degenerate;
      continue;
    }
    ++majorant_checked;
    majorant_bad += !d.set1_below_majorant.value_or(false);
    chain_middle += d.majorant_below_middle.value_or(false);
    chain_outer += d.middle_below_outer.value_or(false);
  }
  verdict(7, bound_bad == 0 && majorant_bad == 0,
          fmt("1000 random pairs <= 1e6: difference bound violated %llu; |set1| majorant failed %llu of %llu "
              "with p_min (%llu degenerate); majorant<=middle %llu, middle<=outer %llu",
              (unsigned long long)bound_bad, (unsigned long long)majorant_bad,
              (unsigned long long)majorant_checked, (unsigned long long)degenerate,
              (unsigned long long)chain_middle, (unsigned long long)chain_outer));
}

void main_term_ratios() {
  const auto twin = twin_constant(table(), kDefaultTruncationLimit);
  const auto t = main_term(table(), 1'000'000, Kind::twin, twin);
  bool ok = t.ratio >= 1.05 && t.ratio <= 1.30 && t.refined_ratio >= 0.95 && t.refined_ratio <= 1.05;
  double lo = 1e9, hi = 0;
  for (std::uint64_t n = 999'962; n <= 1'000'000; n += 2) {
    const auto g = main_term(table(), n, Kind::goldbach, twin);
    lo = std::min(lo, g.refined_ratio);
    hi = std::max(hi, g.refined_ratio);
  }
  ok = ok && lo >= 0.9 && hi <= 1.2;
  verdict(8, ok,
          fmt("twin at 1e6: actual %llu, crude ratio %.4f, refined ratio %.4f; Goldbach refined ratio over "
              "20 even n in [999962, 1e6]: [%.4f, %.4f]",
              (unsigned long long)t.actual, t.ratio, t.refined_ratio, lo, hi));
}

void pigeonhole() {
  const auto rep = scan_goldbach_exceptional(scan_config(10'000, Kind::goldbach, TwinMode::extended, 1), table());
  bool ok = true;
  std::string distances;
  for (auto m : rep.elements) {
    const auto e = interval_experiment(rep, m);
    ok = ok && e.within_bound();
    distances += fmt(" M=%llu:%llu", (unsigned long long)m, (unsigned long long)e.result.distance);
  }
  verdict(9, ok, fmt("Goldbach x=1e4, E_g=%llu, bound 2E_g=%llu, distances%s", (unsigned long long)rep.count,
                     (unsigned long long)(2 * rep.count), distances.c_str()));
}

void performance() {
  const auto t0 = Clock::now();
  const auto big = PrimeTable::build(100'000'000);
  const double s = seconds_since(t0);
  const bool pi_ok = big.pi(100'000'000) == 5'761'455;
  bool same = true;
  for (auto kind : {Kind::goldbach, Kind::twin})
    for (auto mode : {TwinMode::strict, TwinMode::extended}) {
      const auto ref = scan_exceptional(scan_config(1'000'000, kind, mode, 1), table());
      for (unsigned w : {4u, 16u}) {
        auto cfg = scan_config(1'000'000, kind, mode, w);
        cfg.segment_size = 10'000;
        const auto r = scan_exceptional(cfg, table());
        same = same && r.elements == ref.elements;
        for (std::size_t i = 0; same && i < r.curve.size(); ++i) same = r.curve[i].observed == ref.curve[i].observed;
      }
    }
  verdict(10, s < 10 && pi_ok && same,
          fmt("prime table to 1e8 in %.2f s (pi=%llu); scans identical for workers {1,4,16}: %s", s,
              (unsigned long long)big.pi(100'000'000), same ? "yes" : "no"));
}

}  // namespace

int main() {
  legendre_identity();
  inclusion_exclusion();
  closeness();
  oracle_equivalence();
  exceptional_scans();
  axioms();
  difference_bounds();
  main_term_ratios();
  pigeonhole();
  performance();
  return failures == 0 ? 0 : 1;
}
