#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "dqt/arith.hpp"
#include "dqt/errors.hpp"
#include "dqt/goodprimes.hpp"
#include "dqt/lfun.hpp"
#include "dqt/parallel.hpp"
#include "dqt/tuples.hpp"

namespace dqt {

// One term m * B_q(floor(N / d)) of the total-count decomposition.
struct DecompositionTerm {
  i64 divisor = 1;
  u64 multiplier = 1;
};

struct Decomposition {
  QParam qparam;
  std::vector<DecompositionTerm> terms;
};

// Decomposition of C_q(N) into weight-prefix evaluations. Divisors are the
// admissible 2^a |q|^e cofactors, multipliers the per-a solution factors:
//   q = +-2, q = -1:   d in {1, 2}, m = 1
//   q = 3 (mod 4):     d in {1, 2, |q|, 2|q|}, m = 1
//   q = 5 (mod 8):     d in {1, 2, 4} x {1, |q|}, m = (1, 1, 2)
//   q = 1 (mod 8):     d = 2^a |q|^e <= N, e <= 1, m = (1, 1, 2, 4, 4, ...)
inline Decomposition decomposition_for(const QParam& qp, i64 N) {
  require_admissible(qp, "decomposition_for");
  if (N < 1) throw domain_error("decomposition_for: N must be >= 1");
  Decomposition dec;
  dec.qparam = qp;
  i64 aq = qp.abs_q();
  switch (qp.cls) {
    case QClass::two:
    case QClass::minus_two:
    case QClass::minus_one:
      dec.terms = {{1, 1}, {2, 1}};
      break;
    case QClass::q3mod4:
      dec.terms = {{1, 1}, {2, 1}, {aq, 1}, {2 * aq, 1}};
      break;
    case QClass::q5mod8:
      dec.terms = {{1, 1}, {2, 1}, {4, 2}, {aq, 1}, {2 * aq, 1}, {4 * aq, 2}};
      break;
    case QClass::q1mod8:
      for (i64 qpart : {i64(1), aq}) {
        int a = 0;
        for (i128 d = qpart; d <= N; d *= 2, ++a)
          dec.terms.push_back({i64(d), a <= 1 ? u64(1) : (a == 2 ? u64(2) : u64(4))});
      }
      break;
    case QClass::none:
      throw domain_error("decomposition_for: unclassified q");
  }
  return dec;
}

// Ground-truth total: sum over n <= N of the exact root count of
// x^2 = q (mod n), each modulus solved outright.
inline u64 total_solutions_direct(const QParam& qp, i64 N, const SpfSieve* sieve = nullptr,
                                  int threads = 1) {
  if (qp.q == 0) throw domain_error("total_solutions_direct: q must be nonzero");
  detail::require_census_range(N, "total_solutions_direct");
  return chunked_reduce<u64>(1, N, threads, [&](i64 lo, i64 hi) {
    CongruenceSolver solver(qp.q, sieve);
    u64 total = 0;
    for (i64 n = lo; n <= hi; ++n) total += solver.count(n);
    return total;
  });
}

// The same total assembled from the decomposition terms; exact equality
// with the direct route is the strongest structural test in the suite.
inline u64 total_solutions_decomposed(const QParam& qp, i64 N, const WeightPrefixTable& table) {
  if (N < 1) throw domain_error("total_solutions_decomposed: N must be >= 1");
  if (table.limit < N)
    throw precondition_error("total_solutions_decomposed: table smaller than N");
  u64 total = 0;
  for (const auto& term : decomposition_for(qp, N).terms)
    total += term.multiplier * table.at(N / term.divisor);
  return total;
}

// Difference between the congruence-solution total and the exact pair
// count; the two grow together and the gap stabilizes to a constant.
inline i64 pair_vs_solution_gap(const QParam& qp, i64 N, const SpfSieve* sieve = nullptr,
                                int threads = 1) {
  u64 c = total_solutions_direct(qp, N, sieve, threads);
  u64 d2 = count_pairs(qp, N, sieve, nullptr, threads);
  return i64(c) - i64(d2);
}

struct ConvergenceRow {
  i64 N = 0;
  u64 C = 0;
  double C_over_N = 0.0;
  double slope = 0.0;
  double rel_dev = 0.0;
  u64 D2 = 0;
  u64 D3 = 0;
  double d3_over_d2 = 0.0;
};

struct ConvergenceReport {
  QParam qparam;
  std::vector<ConvergenceRow> rows;
};

namespace detail {

inline std::string fmt10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace detail

inline constexpr const char* kConvergenceCsvHeader = "N,C,C_over_N,slope,rel_dev,D2,D3,d3_over_d2";

inline void write_csv(const ConvergenceReport& rep, std::ostream& os) {
  os << kConvergenceCsvHeader << '\n';
  for (const auto& r : rep.rows) {
    os << r.N << ',' << r.C << ',' << detail::fmt10(r.C_over_N) << ',' << detail::fmt10(r.slope)
       << ',' << detail::fmt10(r.rel_dev) << ',' << r.D2 << ',' << r.D3 << ','
       << detail::fmt10(r.d3_over_d2) << '\n';
  }
}

inline void write_json(const ConvergenceReport& rep, std::ostream& os) {
  os << "[\n";
  for (size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& r = rep.rows[i];
    os << "  {\"N\": " << r.N << ", \"C\": " << r.C << ", \"C_over_N\": "
       << detail::fmt10(r.C_over_N) << ", \"slope\": " << detail::fmt10(r.slope)
       << ", \"rel_dev\": " << detail::fmt10(r.rel_dev) << ", \"D2\": " << r.D2
       << ", \"D3\": " << r.D3 << ", \"d3_over_d2\": " << detail::fmt10(r.d3_over_d2) << "}"
       << (i + 1 < rep.rows.size() ? "," : "") << '\n';
  }
  os << "]\n";
}

// Empirical witness of the linear growth: exact counts against the
// theoretical slope at each checkpoint.
inline ConvergenceReport convergence_report(const QParam& qp, const std::vector<i64>& checkpoints,
                                            const SpfSieve* sieve = nullptr, int threads = 1) {
  require_admissible(qp, "convergence_report");
  for (size_t i = 1; i < checkpoints.size(); ++i)
    if (checkpoints[i] <= checkpoints[i - 1])
      throw domain_error("convergence_report: checkpoints must be strictly ascending");
  ConvergenceReport rep;
  rep.qparam = qp;
  double slope = pair_slope(qp);
  for (i64 N : checkpoints) {
    detail::require_census_range(N, "convergence_report");
    ConvergenceRow row;
    row.N = N;
    row.C = total_solutions_direct(qp, N, sieve, threads);
    row.C_over_N = double(row.C) / double(N);
    row.slope = slope;
    row.rel_dev = std::fabs(row.C_over_N - slope) / slope;
    CensusTable census = count_triples(qp, N, sieve, nullptr, threads);
    row.D2 = census.d2;
    row.D3 = census.d3;
    row.d3_over_d2 = census.d2 ? double(census.d3) / double(census.d2) : 0.0;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace dqt
