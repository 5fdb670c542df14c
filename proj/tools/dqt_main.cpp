// Command-line surface for the D(q) census toolkit: slope constants, exact
// pair/triple censuses, verification suites and convergence reports.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
// 3 resource or I/O error.

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dqt/asym.hpp"
#include "dqt/goodprimes.hpp"
#include "dqt/lfun.hpp"
#include "dqt/quadforms.hpp"
#include "dqt/tuples.hpp"

namespace {

using dqt::i64;
using dqt::u64;

std::string fmt10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Accepts plain integers and scientific shorthand like 1e6.
i64 parse_count(const std::string& s) {
  errno = 0;
  char* end = nullptr;
  long double v = strtold(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE)
    throw dqt::domain_error("not a number: " + s);
  if (!(v >= 1.0L && v <= 2147483648.0L))
    throw dqt::domain_error("count out of range [1, 2^31]: " + s);
  long double r = roundl(v);
  if (v != r) throw dqt::domain_error("count must be an integer: " + s);
  return i64(r);
}

// Output target: -o path or stdout.
struct Output {
  std::ofstream file;
  bool to_file = false;

  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file.open(path);
      if (!file) throw dqt::resource_error("cannot open output path: " + path);
      to_file = true;
    }
  }
  std::ostream& stream() { return to_file ? static_cast<std::ostream&>(file) : std::cout; }
};

struct Options {
  std::vector<i64> q_list;
  std::string n_text = "";
  std::vector<std::string> checkpoint_text;
  std::string format = "plain";
  std::string out_path;
  std::string stream_kind;
  int threads = 1;
  i64 sieve_limit = 0;  // 0: pick from N
};

std::unique_ptr<dqt::SpfSieve> make_sieve(const Options& opt, i64 needed) {
  i64 limit = opt.sieve_limit > 0 ? opt.sieve_limit : needed;
  return std::make_unique<dqt::SpfSieve>(std::max<i64>(limit, 2));
}

int run_slope(const Options& opt) {
  auto qp = dqt::QParam::of(opt.q_list.at(0));
  auto rep = dqt::SlopeReport::for_q(qp);
  Output out(opt.out_path);
  std::ostream& os = out.stream();
  if (opt.format == "csv") {
    os << "q,L1,zeta2,pair_slope,b_slope,triple_slope\n"
       << qp.q << ',' << fmt10(rep.L1) << ',' << fmt10(rep.zeta2) << ',' << fmt10(rep.pair_slope)
       << ',' << fmt10(rep.b_slope) << ',' << fmt10(rep.triple_slope) << '\n';
  } else if (opt.format == "json") {
    os << "{\"q\": " << qp.q << ", \"L1\": " << fmt10(rep.L1) << ", \"zeta2\": " << fmt10(rep.zeta2)
       << ", \"pair_slope\": " << fmt10(rep.pair_slope) << ", \"b_slope\": " << fmt10(rep.b_slope)
       << ", \"triple_slope\": " << fmt10(rep.triple_slope) << "}\n";
  } else {
    os << "q = " << qp.q << '\n'
       << "L1 = " << fmt10(rep.L1) << '\n'
       << "zeta2 = " << fmt10(rep.zeta2) << '\n'
       << "pair_slope = " << fmt10(rep.pair_slope) << '\n'
       << "b_slope = " << fmt10(rep.b_slope) << '\n'
       << "triple_slope = " << fmt10(rep.triple_slope) << '\n';
  }
  return 0;
}

int run_census(const Options& opt) {
  auto qp = dqt::QParam::of(opt.q_list.at(0));
  i64 N = parse_count(opt.n_text);
  auto sieve = make_sieve(opt, N);
  Output out(opt.out_path);
  std::ostream& os = out.stream();
  if (opt.stream_kind == "pairs") {
    os << "a,b,r\n";
    u64 d2 = dqt::count_pairs(qp, N, sieve.get(), [&os](const dqt::PairRecord& p) {
      os << p.a << ',' << p.b << ',' << p.r << '\n';
    });
    std::cerr << "d2 = " << d2 << '\n';
    return 0;
  }
  if (opt.stream_kind == "triples") {
    os << "a,b,c,r,s,t,regular,e\n";
    auto table = dqt::count_triples(qp, N, sieve.get(), [&os](const dqt::TripleRecord& t) {
      os << t.a << ',' << t.b << ',' << t.c << ',' << t.r << ',' << t.s << ',' << t.t << ','
         << (t.regular ? 1 : 0) << ',' << t.e << '\n';
    });
    std::cerr << "d3 = " << table.d3 << '\n';
    return 0;
  }
  auto table = dqt::count_triples(qp, N, sieve.get(), nullptr, opt.threads);
  if (opt.format == "csv") {
    os << "q,N,d2,d3,d3_regular,d3_irregular\n"
       << qp.q << ',' << N << ',' << table.d2 << ',' << table.d3 << ',' << table.d3_regular << ','
       << table.d3_irregular << '\n';
  } else if (opt.format == "json") {
    os << "{\"q\": " << qp.q << ", \"N\": " << N << ", \"d2\": " << table.d2
       << ", \"d3\": " << table.d3 << ", \"d3_regular\": " << table.d3_regular
       << ", \"d3_irregular\": " << table.d3_irregular << "}\n";
  } else {
    os << "q = " << qp.q << '\n'
       << "N = " << N << '\n'
       << "d2 = " << table.d2 << '\n'
       << "d3 = " << table.d3 << '\n'
       << "d3_regular = " << table.d3_regular << '\n'
       << "d3_irregular = " << table.d3_irregular << '\n';
  }
  return 0;
}

int run_verify(const Options& opt) {
  i64 N = parse_count(opt.n_text);
  if (N > 1'000'000) throw dqt::resource_error("verify: N capped at 10^6");
  constexpr i64 kBruteCap = 20'000;
  bool all_ok = true;
  auto report = [&all_ok](bool ok, const std::string& what) {
    std::cout << (ok ? "[ ok ] " : "[FAIL] ") << what << '\n';
    all_ok = all_ok && ok;
  };
  for (i64 q : opt.q_list) {
    auto qp = dqt::QParam::of(q);
    dqt::require_admissible(qp, "verify");
    auto sieve = make_sieve(opt, N);
    dqt::CongruenceSolver solver(q, sieve.get());

    i64 brute_to = std::min(N, kBruteCap);
    bool ok = true;
    for (i64 n = 1; n <= N && ok; ++n) {
      u64 formula = dqt::solution_count_formula(qp, n, sieve.get());
      if (formula != solver.count(n)) ok = false;
      if (n <= brute_to && formula != dqt::count_solutions_bruteforce(q, n)) ok = false;
    }
    report(ok, "q=" + std::to_string(q) + " count formula == solver (n <= " + std::to_string(N) +
                   "), == brute force (n <= " + std::to_string(brute_to) + ")");

    auto table = dqt::sieve_weight_prefix(qp, N, *sieve);
    u64 direct = dqt::total_solutions_direct(qp, N, sieve.get(), opt.threads);
    u64 decomposed = dqt::total_solutions_decomposed(qp, N, table);
    report(direct == decomposed, "q=" + std::to_string(q) + " direct total " +
                                     std::to_string(direct) + " == decomposed total " +
                                     std::to_string(decomposed));

    try {
      double dev = dqt::verify_class_number_formula(qp);
      report(dev <= 1e-8, "q=" + std::to_string(q) + " class number formula deviation " +
                              fmt10(dev) + " <= 1e-8");
    } catch (const dqt::unsupported_error&) {
      std::cout << "[skip] q=" << q << " class number formula (no fundamental positive discriminant)\n";
    }
  }
  return all_ok ? 0 : 1;
}

int run_report(const Options& opt) {
  auto qp = dqt::QParam::of(opt.q_list.at(0));
  std::vector<i64> checkpoints;
  for (const auto& text : opt.checkpoint_text) checkpoints.push_back(parse_count(text));
  if (checkpoints.empty()) throw dqt::domain_error("report: need at least one checkpoint");
  i64 maxN = checkpoints.back();
  auto sieve = make_sieve(opt, maxN);
  auto rep = dqt::convergence_report(qp, checkpoints, sieve.get(), opt.threads);
  Output out(opt.out_path);
  if (opt.format == "json")
    dqt::write_json(rep, out.stream());
  else
    dqt::write_csv(rep, out.stream());
  const auto& last = rep.rows.back();
  std::ostream& summary = out.to_file ? std::cout : std::cerr;
  summary << "q=" << qp.q << " N=" << last.N << " C/N=" << fmt10(last.C_over_N)
          << " slope=" << fmt10(last.slope) << " rel_dev=" << fmt10(last.rel_dev) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact D(q)-pair/triple censuses and their theoretical slopes"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&opt](CLI::App* cmd, bool multi_q, bool with_n) {
    if (multi_q)
      cmd->add_option("-q", opt.q_list, "parameter q (comma-separated list)")
          ->required()
          ->delimiter(',');
    else {
      opt.q_list.resize(1);
      cmd->add_option("-q", opt.q_list[0], "parameter q")->required();
    }
    if (with_n) cmd->add_option("-N", opt.n_text, "census bound (accepts 1e6 shorthand)")->required();
    cmd->add_option("--threads", opt.threads, "worker thread hint (output-invariant)")
        ->check(CLI::Range(1, 256));
    cmd->add_option("--sieve-limit", opt.sieve_limit, "smallest-prime-factor sieve size override");
    cmd->add_option("-o", opt.out_path, "output path (default: stdout)");
    return cmd;
  };

  auto* slope = app.add_subcommand("slope", "theoretical slope constants for q");
  add_common(slope, false, false);
  slope->add_option("-f", opt.format, "output format")
      ->check(CLI::IsMember({"plain", "csv", "json"}));

  auto* census = app.add_subcommand("census", "exact D(q)-pair and triple counts up to N");
  add_common(census, false, true);
  census->add_option("-f", opt.format, "output format")
      ->check(CLI::IsMember({"plain", "csv", "json"}));
  census->add_option("--stream", opt.stream_kind, "emit pair/triple records instead of counts")
      ->check(CLI::IsMember({"pairs", "triples"}));

  auto* verify = app.add_subcommand("verify", "run the oracle-equivalence suites");
  add_common(verify, true, true);

  auto* report = app.add_subcommand("report", "convergence report over checkpoints");
  add_common(report, false, false);
  report->add_option("-c", opt.checkpoint_text, "checkpoints (comma-separated, 1e6 shorthand)")
      ->required()
      ->delimiter(',');
  report->add_option("-f", opt.format, "output format")
      ->check(CLI::IsMember({"plain", "csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (slope->parsed()) return run_slope(opt);
    if (census->parsed()) return run_census(opt);
    if (verify->parsed()) return run_verify(opt);
    if (report->parsed()) return run_report(opt);
  } catch (const dqt::resource_error& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return 3;
  } catch (const dqt::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const dqt::internal_error& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
