#pragma once

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "cli/report.hpp"
#include "exsieve/exsieve.hpp"

namespace exsieve::cli {

enum ExitCode : int { kSuccess = 0, kInvariantFailure = 1, kUsageError = 2 };

inline constexpr const char* kOutDirEnv = "EXSIEVE_OUT_DIR";

struct Options {
  std::string kind = "goldbach";
  std::string mode = "extended";
  std::string format = "csv";
  std::optional<std::uint64_t> n, x, n1, n2, limit;
  double exponent_a = 5.0;
  unsigned workers = 1;
  std::uint64_t seed = 42;
  std::uint64_t cases = 1000;
  std::uint64_t truncation = kDefaultTruncationLimit;
  std::string out_dir;
  std::string verify_target = "all";
};

/// An invariant the run checked did not hold.
struct InvariantFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

using report::RunManifest;
using report::Table;
using Json = nlohmann::ordered_json;

inline std::vector<std::uint64_t> geometric_evens(std::uint64_t from, std::uint64_t to) {
  std::vector<std::uint64_t> out;
  const double step = std::pow(10.0, 0.25);
  for (double v = static_cast<double>(from); v <= static_cast<double>(to) * (1 + 1e-12); v *= step) {
    auto n = static_cast<std::uint64_t>(std::llround(v));
    n -= n % 2;
    if (n >= 4 && (out.empty() || out.back() != n)) out.push_back(n);
  }
  if (to >= 4 && (out.empty() || out.back() != to - to % 2)) out.push_back(to - to % 2);
  return out;
}

inline PrimeTable table_for(const Options& o, std::uint64_t needed) {
  const std::uint64_t lim = o.limit.value_or(needed);
  if (lim < needed)
    throw exsieve::out_of_range("--limit " + std::to_string(lim) + " below required " + std::to_string(needed));
  return PrimeTable::build(std::max<std::uint64_t>(lim, 2));
}

inline std::uint64_t require(const std::optional<std::uint64_t>& v, const char* flag) {
  if (!v) throw CLI::ValidationError(flag, "required for this subcommand");
  return *v;
}

struct Run {
  const Options& opt;
  std::ostream& out;
  RunManifest manifest;
  std::filesystem::path dir;

  void emit_table(const std::string& stem, const Table& t) {
    const std::string body = t.render(opt.format);
    report::write_output(dir, stem + (opt.format == "json" ? ".json" : ".csv"), body, manifest);
    out << body;
  }

  int sieve() {
    const std::uint64_t limit = opt.limit.value_or(opt.x.value_or(1'000'000));
    manifest.parameters["limit"] = limit;
    const auto table = PrimeTable::build(limit);
    manifest.table_limit = table.limit();
    Table t({"n", "pi", "legendre"});
    bool ok = true;
    for (auto n : geometric_evens(10, limit)) {
      const auto pi = table.pi(n);
      const auto leg = legendre_count(n);
      ok = ok && leg == pi;
      t.add_row({n, pi, leg});
    }
    emit_table("sieve", t);
    if (!ok) throw InvariantFailure("legendre identity: legendre_count(n) != prime_pi(n)");
    return kSuccess;
  }

  int count() {
    const Kind kind = parse_kind(opt.kind);
    const TwinMode mode = parse_mode(opt.mode);
    std::vector<std::uint64_t> ns;
    if (opt.n) {
      if (*opt.n < 4 || *opt.n % 2) throw exsieve::invalid_argument("count: --n must be even and >= 4");
      ns.push_back(*opt.n);
    } else {
      for (std::uint64_t n = 10; n <= require(opt.x, "--n/--x"); n += 2) ns.push_back(n);
    }
    const std::uint64_t top = ns.empty() ? 4 : *std::max_element(ns.begin(), ns.end());
    manifest.parameters["kind"] = opt.kind;
    manifest.parameters["mode"] = opt.mode;
    if (opt.n) manifest.parameters["n"] = *opt.n; else manifest.parameters["x"] = *opt.x;
    manifest.parameters["workers"] = opt.workers;
    const auto table = table_for(opt, top + 2);
    manifest.table_limit = table.limit();

    std::vector<std::vector<Table::Cell>> rows(ns.size());
    std::string violated;
    auto work = [&](std::size_t w, std::size_t stride) {
      for (std::size_t i = w; i < ns.size(); i += stride) {
        const std::uint64_t n = ns[i];
        auto& row = rows[i];
        row = {n, std::string(to_string(kind)), std::string(kind == Kind::twin ? to_string(mode) : "")};
        row.push_back(direct_count(table, n, kind, mode));
        if (n >= 9) {
          const auto rec = pair_count_record(table, n, kind, mode);
          const auto tol = closeness_tolerance(table, n);
          row.insert(row.end(), {rec.moebius_survivors, rec.union_size, rec.prime_count, tol,
                                 rec.identity_holds(), rec.gap() <= tol});
        } else {
          row.insert(row.end(), {nullptr, nullptr, table.pi(n), nullptr, nullptr, nullptr});
        }
      }
    };
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(opt.workers, ns.size()));
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work, w, workers);
      work(0, workers);
    }
    Table t({"n", "kind", "mode", "direct", "moebius_survivors", "union_size", "pi", "tolerance",
             "identity_holds", "within_tolerance"});
    for (auto& r : rows) {
      if (r[8].is_boolean() && !r[8].get<bool>())
        violated = "inclusion-exclusion identity fails at n=" + r[0].dump();
      t.add_row(std::move(r));
    }
    emit_table("count", t);
    if (!violated.empty()) throw InvariantFailure(violated);
    return kSuccess;
  }

  int series() {
    const Kind kind = parse_kind(opt.kind);
    std::vector<std::uint64_t> ns = opt.n ? std::vector<std::uint64_t>{*opt.n}
                                          : geometric_evens(10'000, require(opt.x, "--n/--x"));
    const std::uint64_t top = *std::max_element(ns.begin(), ns.end());
    manifest.parameters["kind"] = opt.kind;
    if (opt.n) manifest.parameters["n"] = *opt.n; else manifest.parameters["x"] = *opt.x;
    manifest.parameters["truncation_limit"] = opt.truncation;
    const auto table = table_for(opt, std::max(top + 2, opt.truncation));
    manifest.table_limit = table.limit();
    const auto twin = twin_constant(table, opt.truncation);
    Table t({"n", "kind", "C", "crude_term", "refined_term", "actual", "ratio", "refined_ratio"});
    for (auto n : ns) {
      const auto m = main_term(table, n, kind, twin);
      t.add_row({n, std::string(to_string(kind)), m.constant, m.main_term, m.refined_term, m.actual, m.ratio,
                 m.refined_ratio});
    }
    emit_table("series", t);
    return kSuccess;
  }

  int scan() {
    ScanConfig cfg;
    cfg.x = require(opt.x, "--x");
    cfg.kind = parse_kind(opt.kind);
    cfg.mode = parse_mode(opt.mode);
    cfg.exponent_a = opt.exponent_a;
    cfg.worker_count = opt.workers;
    cfg.validate();
    manifest.parameters["x"] = cfg.x;
    manifest.parameters["kind"] = opt.kind;
    manifest.parameters["mode"] = opt.mode;
    manifest.parameters["exponent_a"] = cfg.exponent_a;
    manifest.parameters["workers"] = cfg.worker_count;
    const auto table = table_for(opt, cfg.table_limit());
    manifest.table_limit = table.limit();
    const auto rep = scan_exceptional(cfg, table);

    std::string list;
    for (auto n : rep.elements) list += std::to_string(n) + "\n";
    const std::string stem = std::string(to_string(cfg.kind)) +
                             (cfg.kind == Kind::twin ? "_" + std::string(to_string(cfg.mode)) : "");
    report::write_output(dir, stem + "_exceptional.txt", list, manifest);

    Json summary;
    summary["x"] = rep.x;
    summary["kind"] = std::string(to_string(rep.kind));
    summary["mode"] = std::string(to_string(rep.mode));
    summary["count"] = rep.count;
    summary["A"] = rep.exponent_a;
    summary["curve"] = Json::array();
    for (const auto& p : rep.curve) summary["curve"].push_back(Json::array({p.x, p.bound, p.observed}));
    const std::string body = summary.dump(2) + "\n";
    report::write_output(dir, stem + "_summary.json", body, manifest);
    out << body;
    if (!rep.recount_verified) throw InvariantFailure("exceptional recount: a listed n has a representation");
    return kSuccess;
  }

  int diff() {
    const std::uint64_t n1 = require(opt.n1, "--n1"), n2 = require(opt.n2, "--n2");
    const TwinMode mode = parse_mode(opt.mode);
    manifest.parameters["n1"] = n1;
    manifest.parameters["n2"] = n2;
    manifest.parameters["mode"] = opt.mode;
    const auto table = table_for(opt, n1 + 2);
    manifest.table_limit = table.limit();
    const auto d = difference_decomposition(table, n1, n2, mode);
    auto opt_cell = [](const auto& o) -> Table::Cell { return o ? Table::Cell(*o) : Table::Cell(nullptr); };
    Table t({"n1", "n2", "delta_p", "set1", "set2", "d_diff", "p_min", "set1_majorant", "middle_bound",
             "outer_bound", "set1_below_majorant", "majorant_below_middle", "middle_below_outer",
             "difference_bound_holds", "limit_gap"});
    t.add_row({d.n1, d.n2, d.delta_p_size, d.set1_size, d.set2_size, d.d_diff, opt_cell(d.p_min),
               d.p_min ? Table::Cell(d.set1_majorant) : Table::Cell(nullptr), d.middle_bound, d.outer_bound,
               opt_cell(d.set1_below_majorant), opt_cell(d.majorant_below_middle), opt_cell(d.middle_below_outer),
               d.difference_bound_holds(), d.limit_gap()});
    emit_table("diff", t);
    if (!d.difference_bound_holds()) throw InvariantFailure("difference bound: 0 <= D_t(n1) - D_t(n2) < n1 - n2");
    return kSuccess;
  }

  int verify() {
    manifest.parameters["target"] = opt.verify_target;
    Table t({"property", "cases", "failures", "passed"});
    std::string violated;
    auto record = [&](const std::string& name, std::uint64_t cases, std::uint64_t failures) {
      t.add_row({name, cases, failures, failures == 0});
      if (failures && violated.empty()) violated = name;
    };
    const bool all = opt.verify_target == "all";
    if (all || opt.verify_target == "axioms") {
      manifest.parameters["cases"] = opt.cases;
      manifest.parameters["seed"] = opt.seed;
      const auto rep = run_axiom_suite(opt.cases, opt.seed);
      for (const auto& p : rep.properties) record(p.name, p.cases, p.failures);
      t.add_row({"increment_equalities", opt.cases, rep.increment_equalities, true});
    }
    if (all || opt.verify_target == "identities") {
      const std::uint64_t x = opt.x.value_or(10'000);
      manifest.parameters["x"] = x;
      const auto table = table_for(opt, x + 2);
      manifest.table_limit = table.limit();
      std::uint64_t leg_fail = 0, ie_fail = 0, close_fail = 0, cases = 0;
      for (std::uint64_t n = 4; n <= x; ++n) leg_fail += legendre_count(n) != table.pi(n);
      record("legendre_identity", x - 3, leg_fail);
      for (std::uint64_t n = 10; n <= x; n += 2) {
        for (auto kind : {Kind::goldbach, Kind::twin}) {
          ++cases;
          const auto m = moebius_survivors(table, n, kind);
          ie_fail += m + union_count(table, n, kind) != table.pi(n);
          const auto direct = direct_count(table, n, kind);
          close_fail += (m > direct ? m - direct : direct - m) > closeness_tolerance(table, n);
        }
      }
      record("inclusion_exclusion", cases, ie_fail);
      record("closeness", cases, close_fail);
    }
    emit_table("verify", t);
    if (!violated.empty()) throw InvariantFailure("property failed: " + violated);
    return kSuccess;
  }
};

}  // namespace detail

inline void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--limit", o.limit, "Prime table size (defaults to what the run needs)");
  sub->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--out", o.out_dir, "Output directory (default $EXSIEVE_OUT_DIR or .)");
  sub->add_option("--format", o.format, "Tabular output format")->check(CLI::IsMember({"csv", "json"}));
}

inline void add_kind(CLI::App* sub, Options& o) {
  sub->add_option("--kind", o.kind, "goldbach or twin")->check(CLI::IsMember({"goldbach", "twin"}));
  sub->add_option("--mode", o.mode, "Twin membership: strict or extended")
      ->check(CLI::IsMember({"strict", "extended"}));
}

/// Parses argv, runs one subcommand, writes outputs plus a manifest.
/// Returns 0 on success, 1 on an invariant failure and 2 on a usage error.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  Options o;
  CLI::App app{"Sieve counts, singular series and exceptional-set scans for Goldbach and twin primes", "exsieve"};
  app.require_subcommand(1);

  auto* sieve = app.add_subcommand("sieve", "Prime table: pi(n) against the Legendre sum");
  add_common(sieve, o);
  sieve->add_option("--x", o.x, "Largest n sampled");

  auto* count = app.add_subcommand("count", "Direct, Mobius and union counts at n (or every even n <= x)");
  add_common(count, o);
  add_kind(count, o);
  count->add_option("--n", o.n, "Even n");
  count->add_option("--x", o.x, "Every even 10 <= n <= x");

  auto* series = app.add_subcommand("series", "Main terms and ratios against actual counts");
  add_common(series, o);
  add_kind(series, o);
  series->add_option("--n", o.n, "Even n");
  series->add_option("--x", o.x, "Geometric samples 10^4 .. x");
  series->add_option("--truncation", o.truncation, "Prime bound for the twin constant")->check(CLI::Range(3ull, 1ull << 32));

  auto* scan = app.add_subcommand("scan", "Exceptional set up to x");
  add_common(scan, o);
  add_kind(scan, o);
  scan->add_option("--x", o.x, "Even bound")->required();
  scan->add_option("--exponent-a", o.exponent_a, "Exponent A in x / ln^A x")->check(CLI::PositiveNumber);

  auto* diff = app.add_subcommand("diff", "Difference decomposition of D_t(n1) - D_t(n2)");
  add_common(diff, o);
  diff->add_option("--mode", o.mode, "strict or extended")->check(CLI::IsMember({"strict", "extended"}));
  diff->add_option("--n1", o.n1, "Larger even n")->required();
  diff->add_option("--n2", o.n2, "Smaller even n")->required();

  auto* verify = app.add_subcommand("verify", "Property suites");
  add_common(verify, o);
  verify->add_option("target", o.verify_target, "axioms, identities or all")
      ->check(CLI::IsMember({"axioms", "identities", "all"}));
  verify->add_option("--cases", o.cases, "Random instances per property");
  verify->add_option("--seed", o.seed, "Generator seed");
  verify->add_option("--x", o.x, "Identity range");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsageError;
  }

  const auto* sub = app.get_subcommands().front();
  detail::Run r{o, out, {}, {}};
  r.manifest.subcommand = sub->get_name();
  if (o.out_dir.empty()) {
    const char* env = std::getenv(kOutDirEnv);
    o.out_dir = env && *env ? env : ".";
  }
  r.dir = o.out_dir;
  r.manifest.parameters["format"] = o.format;

  const auto start = std::chrono::steady_clock::now();
  int code = kSuccess;
  std::string failure;
  try {
    const std::string& name = r.manifest.subcommand;
    if (name == "sieve") code = r.sieve();
    else if (name == "count") code = r.count();
    else if (name == "series") code = r.series();
    else if (name == "scan") code = r.scan();
    else if (name == "diff") code = r.diff();
    else code = r.verify();
  } catch (const InvariantFailure& e) {
    failure = e.what();
    code = kInvariantFailure;
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n" << sub->help();
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::out_of_range& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::length_error& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  }
  r.manifest.duration_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!failure.empty()) {
    r.manifest.parameters["invariant_failure"] = failure;
    err << "invariant failure: " << failure << "\n";
  }
  report::RunManifest m = r.manifest;
  const std::string body = m.to_json().dump(2) + "\n";
  std::filesystem::create_directories(r.dir);
  std::ofstream(r.dir / (m.subcommand + "_manifest.json"), std::ios::trunc) << body;
  return code;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace exsieve::cli
