#pragma once

#include <functional>
#include <optional>
#include <tuple>
#include <vector>

#include "dqt/arith.hpp"
#include "dqt/errors.hpp"
#include "dqt/goodprimes.hpp"
#include "dqt/parallel.hpp"

namespace dqt {

// Census bound: with N <= 2^31, products like a*c and t^2 stay within
// 64-bit range (128-bit intermediates cover the rest).
inline constexpr i64 kCensusCap = i64(1) << 31;

struct PairRecord {
  i64 a = 0, b = 0;  // 1 <= a < b, ab + q a perfect square
  i64 r = 0;         // r >= 0, r^2 = ab + q
};

struct TripleRecord {
  i64 a = 0, b = 0, c = 0;
  i64 r = 0, s = 0, t = 0;  // r^2 = ab+q, s^2 = ac+q, t^2 = bc+q
  bool regular = false;     // c == a + b + 2r
  i64 e = 0;                // e-invariant; 0 for regular triples
};

struct CensusTable {
  QParam qparam;
  i64 limit = 0;
  u64 d2 = 0;
  u64 d3 = 0;
  u64 d3_regular = 0;
  u64 d3_irregular = 0;
};

using PairSink = std::function<void(const PairRecord&)>;
using TripleSink = std::function<void(const TripleRecord&)>;

namespace detail {

inline void require_census_range(i64 N, const char* who) {
  if (N < 1) throw domain_error(std::string(who) + ": N must be >= 1");
  if (N > kCensusCap)
    throw resource_error(std::string(who) + ": N exceeds the 2^31 census cap");
}

// Pairs (a, b) with fixed larger element b: for every root class x of
// x^2 = q (mod b), candidates r = x, x + b, ... give a = (r^2 - q)/b; the
// window b <= r^2 - q < b^2 is exactly 1 <= a < b. Starting the walk at
// r = x mod b (allowing r = 0) keeps pairs with ab + q = 0.
template <typename Fn>
void for_pairs_with_larger(CongruenceSolver& solver, std::vector<i64>& roots, i64 b, Fn&& fn) {
  solver.solve_into(b, roots);
  i128 bb = i128(b) * b;
  for (i64 x : roots) {
    for (i64 r = x % b;; r += b) {
      i128 v = i128(r) * r - solver.q();
      if (v >= bb) break;
      if (v >= b) fn(i64(v / b), r);
    }
  }
}

}  // namespace detail

// Exact number of D(q)-pairs {a, b} with a < b <= N. With a sink (single
// threaded only), records stream in (b, a) lexicographic order.
inline u64 count_pairs(const QParam& qp, i64 N, const SpfSieve* sieve = nullptr,
                       const PairSink& sink = nullptr, int threads = 1) {
  detail::require_census_range(N, "count_pairs");
  if (sink) {
    CongruenceSolver solver(qp.q, sieve);
    std::vector<i64> roots;
    std::vector<std::pair<i64, i64>> found;  // (a, r)
    u64 count = 0;
    for (i64 b = 2; b <= N; ++b) {
      found.clear();
      detail::for_pairs_with_larger(solver, roots, b,
                                    [&](i64 a, i64 r) { found.emplace_back(a, r); });
      std::sort(found.begin(), found.end());
      for (auto [a, r] : found) sink(PairRecord{a, b, r});
      count += found.size();
    }
    return count;
  }
  return chunked_reduce<u64>(2, N, threads, [&](i64 lo, i64 hi) {
    CongruenceSolver solver(qp.q, sieve);
    std::vector<i64> roots;
    u64 count = 0;
    for (i64 b = lo; b <= hi; ++b)
      detail::for_pairs_with_larger(solver, roots, b, [&](i64, i64) { ++count; });
    return count;
  });
}

// O(N^2) oracle over all a < b <= N with an exact square test.
inline u64 count_pairs_naive(const QParam& qp, i64 N) {
  if (N < 1) throw domain_error("count_pairs_naive: N must be >= 1");
  if (N > 10'000) throw resource_error("count_pairs_naive: N exceeds the 10^4 oracle cap");
  u64 count = 0;
  for (i64 b = 2; b <= N; ++b)
    for (i64 a = 1; a < b; ++a)
      if (is_perfect_square(a * b + qp.q)) ++count;
  return count;
}

// Classify a D(q)-triple a < b < c: regularity and the e-invariant with its
// full square certificate. The invariant comes from x = at - rs via
// e = (x^2 - q^2)/a; non-integral e or a failed certificate aborts loudly
// since it can only mean an arithmetic bug.
inline TripleRecord classify_triple(const QParam& qp, i64 a, i64 b, i64 c) {
  if (!(0 < a && a < b && b < c)) throw domain_error("classify_triple: need 0 < a < b < c");
  if (c > kCensusCap) throw resource_error("classify_triple: c exceeds the 2^31 census cap");
  i64 q = qp.q;
  auto r = is_perfect_square(a * b + q);
  auto s = is_perfect_square(a * c + q);
  auto t = is_perfect_square(b * c + q);
  if (!r || !s || !t) throw domain_error("classify_triple: {a, b, c} is not a D(q)-triple");
  TripleRecord rec{a, b, c, *r, *s, *t, false, 0};
  rec.regular = (c == a + b + 2 * rec.r);
  i128 x = i128(a) * rec.t - i128(rec.r) * rec.s;
  i128 num = x * x - i128(q) * q;
  if (num % a != 0) throw internal_error("classify_triple: e-invariant is not integral");
  i128 e = num / a;
  i128 y = i128(b) * rec.s - i128(rec.r) * rec.t;
  i128 z = i128(c) * rec.r - i128(rec.s) * rec.t;
  if (i128(b) * e + i128(q) * q != y * y || i128(c) * e + i128(q) * q != z * z)
    throw internal_error("classify_triple: e-invariant certificate failed");
  if (rec.regular && e != 0) throw internal_error("classify_triple: regular triple with e != 0");
  if (e > kCensusCap * i128(kCensusCap) || e < -kCensusCap * i128(kCensusCap))
    throw resource_error("classify_triple: e-invariant exceeds 64-bit range");
  rec.e = i64(e);
  return rec;
}

// Third element a + b + 2r extending a D(q)-pair upward; always yields a
// valid triple (ac + q = (a+r)^2, bc + q = (b+r)^2) unless it degenerates
// to c <= b.
inline std::optional<i64> regular_completion(const QParam& qp, i64 a, i64 b) {
  if (a < 1 || b <= a) throw domain_error("regular_completion: need 1 <= a < b");
  auto r = is_perfect_square(a * b + qp.q);
  if (!r) throw domain_error("regular_completion: ab + q is not a perfect square");
  i64 c = a + b + 2 * *r;
  if (c <= b) return std::nullopt;
  return c;
}

// Gap principle for irregular triples: c > q^2 forces c q^2 > 3ab.
inline bool gap_check(const QParam& qp, const TripleRecord& tr) {
  if (tr.regular) return true;
  i128 q2 = i128(qp.q) * qp.q;
  if (tr.c <= q2) return true;
  return i128(tr.c) * q2 > 3 * i128(tr.a) * tr.b;
}

namespace detail {

struct TripleCounts {
  u64 d3 = 0, regular = 0, irregular = 0;
  TripleCounts operator+(const TripleCounts& o) const {
    return {d3 + o.d3, regular + o.regular, irregular + o.irregular};
  }
};

// Pair adjacency in CSR layout: smaller elements a of every pair whose
// larger element is b.
struct PairAdjacency {
  std::vector<u64> offset;  // size N+2
  std::vector<i64> a_list;  // size d2
};

inline PairAdjacency build_pair_adjacency(const QParam& qp, i64 N, const SpfSieve* sieve) {
  PairAdjacency adj;
  adj.offset.assign(size_t(N) + 2, 0);
  CongruenceSolver solver(qp.q, sieve);
  std::vector<i64> roots;
  for (i64 b = 2; b <= N; ++b)
    for_pairs_with_larger(solver, roots, b, [&](i64, i64) { ++adj.offset[size_t(b) + 1]; });
  for (size_t i = 1; i < adj.offset.size(); ++i) adj.offset[i] += adj.offset[i - 1];
  adj.a_list.resize(adj.offset.back());
  std::vector<u64> cursor(adj.offset.begin(), adj.offset.end() - 1);
  for (i64 b = 2; b <= N; ++b)
    for_pairs_with_larger(solver, roots, b, [&](i64 a, i64) { adj.a_list[cursor[size_t(b)]++] = a; });
  return adj;
}

// Walk candidates c in (b, N] with bc + q a perfect square, stepping t
// through the root classes of x^2 = q (mod b).
template <typename Fn>
void for_third_elements(CongruenceSolver& solver, std::vector<i64>& roots, i64 b, i64 N, Fn&& fn) {
  solver.solve_into(b, roots);
  i64 q = solver.q();
  i128 low = i128(b) * b + q;    // need t^2 > low  (c > b)
  i128 high = i128(b) * N + q;   // need t^2 <= high (c <= N)
  if (high <= 0) return;
  i64 tmin = 0;
  if (low >= 0) {
    tmin = i64(isqrt(u64(low)));
    while (i128(tmin) * tmin <= low) ++tmin;
  }
  for (i64 x : roots) {
    i64 t = x % b;
    if (t < tmin) t += (tmin - t + b - 1) / b * b;
    for (; i128(t) * t <= high; t += b) fn(i64((i128(t) * t - q) / b), t);
  }
}

}  // namespace detail

// Exact census of D(q)-triples with all elements <= N (d2 comes along for
// free). Every triple {a, b, c} is found once through its middle element:
// pairs (a, b) are grouped by larger element b, third elements c > b are
// enumerated from b's congruence classes, and ac + q is square-tested.
inline CensusTable count_triples(const QParam& qp, i64 N, const SpfSieve* sieve = nullptr,
                                 const TripleSink& sink = nullptr, int threads = 1) {
  detail::require_census_range(N, "count_triples");
  CensusTable table;
  table.qparam = qp;
  table.limit = N;
  detail::PairAdjacency adj = detail::build_pair_adjacency(qp, N, sieve);
  table.d2 = adj.a_list.size();
  std::vector<TripleRecord> stream;
  auto scan = [&](i64 lo, i64 hi) {
    detail::TripleCounts counts;
    CongruenceSolver solver(qp.q, sieve);
    std::vector<i64> roots;
    for (i64 b = lo; b <= hi; ++b) {
      u64 begin = adj.offset[size_t(b)], end = adj.offset[size_t(b) + 1];
      if (begin == end) continue;
      detail::for_third_elements(solver, roots, b, N, [&](i64 c, i64 t) {
        for (u64 i = begin; i < end; ++i) {
          i64 a = adj.a_list[i];
          auto s = is_perfect_square(a * c + qp.q);
          if (!s) continue;
          ++counts.d3;
          i64 r = *is_perfect_square(a * b + qp.q);
          bool regular = (c == a + b + 2 * r);
          (regular ? counts.regular : counts.irregular)++;
          if (sink) stream.push_back(TripleRecord{a, b, c, r, *s, t, regular, 0});
        }
      });
    }
    return counts;
  };
  detail::TripleCounts counts =
      sink ? scan(2, N) : chunked_reduce<detail::TripleCounts>(2, N, threads, scan);
  table.d3 = counts.d3;
  table.d3_regular = counts.regular;
  table.d3_irregular = counts.irregular;
  if (sink) {
    std::sort(stream.begin(), stream.end(), [](const TripleRecord& u, const TripleRecord& v) {
      return std::tuple(u.a, u.b, u.c) < std::tuple(v.a, v.b, v.c);
    });
    for (auto& rec : stream) sink(classify_triple(qp, rec.a, rec.b, rec.c));
  }
  return table;
}

// O(N^3)-flavor oracle: scan pairs, then extend by every c.
inline CensusTable count_triples_naive(const QParam& qp, i64 N) {
  if (N < 1) throw domain_error("count_triples_naive: N must be >= 1");
  if (N > 512) throw resource_error("count_triples_naive: N exceeds the oracle cap of 512");
  CensusTable table;
  table.qparam = qp;
  table.limit = N;
  for (i64 a = 1; a <= N; ++a)
    for (i64 b = a + 1; b <= N; ++b) {
      auto r = is_perfect_square(a * b + qp.q);
      if (!r) continue;
      ++table.d2;
      for (i64 c = b + 1; c <= N; ++c) {
        if (!is_perfect_square(b * c + qp.q) || !is_perfect_square(a * c + qp.q)) continue;
        ++table.d3;
        (c == a + b + 2 * *r ? table.d3_regular : table.d3_irregular)++;
      }
    }
  return table;
}

}  // namespace dqt
