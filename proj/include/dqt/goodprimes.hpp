#pragma once

#include <string>
#include <vector>

#include "dqt/arith.hpp"
#include "dqt/errors.hpp"

namespace dqt {

// Residue class of q that drives solvability and counting rules. Values
// other than `none` cover q = +-2, q = -1 and all odd q; even |q| > 2 is
// unclassified (such q are census-only).
enum class QClass { two, minus_two, minus_one, q3mod4, q5mod8, q1mod8, none };

// The parameter q with its admissibility certificate. Census operations
// accept any nonzero q; classification, counting formulas and slopes
// require admissible() (|q| prime or q = -1).
struct QParam {
  i64 q = 0;
  bool abs_is_prime = false;
  QClass cls = QClass::none;

  i64 abs_q() const { return q < 0 ? -q : q; }
  bool admissible() const { return abs_is_prime || q == -1; }

  static QParam of(i64 q) {
    if (q == 0) throw domain_error("q must be nonzero");
    if (q > (i64(1) << 31) || q < -(i64(1) << 31))
      throw domain_error("|q| exceeds the 2^31 cap");
    QParam qp;
    qp.q = q;
    i64 a = q < 0 ? -q : q;
    qp.abs_is_prime = [a] {
      if (a < 2) return false;
      for (i64 d = 2; d * d <= a; d += (d == 2 ? 1 : 2))
        if (a % d == 0) return false;
      return true;
    }();
    if (q == 2) {
      qp.cls = QClass::two;
    } else if (q == -2) {
      qp.cls = QClass::minus_two;
    } else if (q == -1) {
      qp.cls = QClass::minus_one;
    } else if (q % 2 != 0) {
      switch (mod_pos(q, 8)) {
        case 1: qp.cls = QClass::q1mod8; break;
        case 5: qp.cls = QClass::q5mod8; break;
        default: qp.cls = QClass::q3mod4; break;  // 3 or 7 mod 8
      }
    }
    return qp;
  }
};

inline void require_admissible(const QParam& qp, const char* who) {
  if (!qp.admissible())
    throw domain_error(std::string(who) + ": q = " + std::to_string(qp.q) +
                       " is not admissible (|q| must be prime, or q = -1)");
}

// Admissible cofactors of 2 and |q| in solvable moduli, plus whether
// arbitrary 2-powers are allowed (only for q = 1 mod 8).
struct GoodPrimeRule {
  QParam qparam;
  std::vector<i64> delta_set;
  bool two_power_unbounded = false;

  static GoodPrimeRule for_q(const QParam& qp) {
    require_admissible(qp, "GoodPrimeRule");
    GoodPrimeRule r;
    r.qparam = qp;
    i64 aq = qp.abs_q();
    switch (qp.cls) {
      case QClass::two:
      case QClass::minus_two:
      case QClass::minus_one:
        r.delta_set = {1, 2};
        break;
      case QClass::q3mod4:
        r.delta_set = {1, 2, aq, 2 * aq};
        break;
      case QClass::q5mod8:
        r.delta_set = {1, 2, 4, aq, 2 * aq, 4 * aq};
        break;
      case QClass::q1mod8:
        r.delta_set = {1, aq};
        r.two_power_unbounded = true;
        break;
      case QClass::none:
        throw domain_error("GoodPrimeRule: unclassified q");
    }
    return r;
  }
};

// Membership test for the good-prime set of q. Requires p prime and
// p not in {2, |q|}; those primes are governed by the delta set instead.
inline bool is_good_prime(const QParam& qp, i64 p) {
  require_admissible(qp, "is_good_prime");
  if (p == 2 || p == qp.abs_q())
    throw precondition_error("is_good_prime: p in {2, |q|} is handled by the delta set");
  switch (qp.cls) {
    case QClass::two: {
      i64 m = p % 8;
      return m == 1 || m == 7;
    }
    case QClass::minus_two: {
      i64 m = p % 8;
      return m == 1 || m == 3;
    }
    case QClass::minus_one:
      return p % 4 == 1;
    case QClass::q3mod4: {
      // Reciprocity form: (p | |q|) must equal (-1)^((p-1)/2).
      int want = (p % 4 == 1) ? 1 : -1;
      return kronecker(p, qp.abs_q()) == want;
    }
    case QClass::q5mod8:
    case QClass::q1mod8:
      return kronecker(p, qp.abs_q()) == 1;
    case QClass::none:
      break;
  }
  throw domain_error("is_good_prime: unclassified q");
}

// Indicator that every prime factor of n is good for q (1 on n = 1).
// Factors of 2 and |q| are never good.
inline int good_indicator(const QParam& qp, i64 n, const SpfSieve* sieve = nullptr) {
  require_admissible(qp, "good_indicator");
  if (n < 1) throw domain_error("good_indicator: n must be >= 1");
  for (const auto& [p, k] : factorize(n, sieve).factors) {
    (void)k;
    if (p == 2 || p == qp.abs_q() || !is_good_prime(qp, p)) return 0;
  }
  return 1;
}

// Solution weight 2^omega(n) on good-factored n, 0 elsewhere; this equals
// the number of roots of x^2 = q (mod n) for such n.
inline u64 good_solution_weight(const QParam& qp, i64 n, const SpfSieve* sieve = nullptr) {
  require_admissible(qp, "good_solution_weight");
  if (n < 1) throw domain_error("good_solution_weight: n must be >= 1");
  Factorization f = factorize(n, sieve);
  for (const auto& [p, k] : f.factors) {
    (void)k;
    if (p == 2 || p == qp.abs_q() || !is_good_prime(qp, p)) return 0;
  }
  return u64(1) << f.omega();
}

// Prefix sums over n <= k of the good solution weights.
struct WeightPrefixTable {
  QParam qparam;
  i64 limit = 0;
  std::vector<u64> prefix;  // prefix[k] for k in [0, limit]

  u64 at(i64 k) const {
    if (k <= 0) return 0;
    if (k > limit) throw precondition_error("WeightPrefixTable: k exceeds table limit");
    return prefix[size_t(k)];
  }
};

// Sieved prefix sums of good_solution_weight in one linear pass; omega and
// the good flag propagate from n / spf(n).
inline WeightPrefixTable sieve_weight_prefix(const QParam& qp, i64 limit, const SpfSieve& sieve) {
  require_admissible(qp, "sieve_weight_prefix");
  if (limit < 1) throw domain_error("sieve_weight_prefix: limit must be >= 1");
  if (limit > sieve.limit())
    throw precondition_error("sieve_weight_prefix: sieve smaller than requested limit");
  WeightPrefixTable t;
  t.qparam = qp;
  t.limit = limit;
  t.prefix.assign(size_t(limit) + 1, 0);
  std::vector<uint8_t> omega(size_t(limit) + 1, 0);
  std::vector<uint8_t> good(size_t(limit) + 1, 0);
  good[1] = 1;
  t.prefix[1] = 1;
  i64 aq = qp.abs_q();
  for (i64 n = 2; n <= limit; ++n) {
    i64 p = sieve.spf(n);
    i64 m = n / p;
    if (m % p == 0) {
      omega[size_t(n)] = omega[size_t(m)];
      good[size_t(n)] = good[size_t(m)];
    } else {
      omega[size_t(n)] = uint8_t(omega[size_t(m)] + 1);
      bool p_good = (p != 2 && p != aq) && is_good_prime(qp, p);
      good[size_t(n)] = uint8_t(good[size_t(m)] && p_good);
    }
    u64 w = good[size_t(n)] ? (u64(1) << omega[size_t(n)]) : 0;
    t.prefix[size_t(n)] = t.prefix[size_t(n) - 1] + w;
  }
  return t;
}

inline WeightPrefixTable sieve_weight_prefix(const QParam& qp, i64 limit) {
  SpfSieve sieve(std::max<i64>(limit, 2));
  return sieve_weight_prefix(qp, limit, sieve);
}

namespace detail {

// n = 2^a * |q|^e * b with gcd(b, 2q) = 1; good says every prime of b is
// good for q.
struct ModulusShape {
  int a = 0;
  int e = 0;
  bool good = true;
  int omega_b = 0;
};

inline ModulusShape modulus_shape(const QParam& qp, i64 n, const SpfSieve* sieve) {
  ModulusShape s;
  i64 aq = qp.abs_q();
  for (const auto& [p, k] : factorize(n, sieve).factors) {
    if (p == 2) {
      s.a = k;
    } else if (aq > 2 && p == aq) {
      s.e = k;
    } else {
      ++s.omega_b;
      if (!is_good_prime(qp, p)) s.good = false;
    }
  }
  return s;
}

}  // namespace detail

// Whether x^2 = q (mod n) is solvable, by the delta-set rules.
inline bool is_solvable(const QParam& qp, i64 n, const SpfSieve* sieve = nullptr) {
  require_admissible(qp, "is_solvable");
  if (n < 1) throw domain_error("is_solvable: n must be >= 1");
  auto s = detail::modulus_shape(qp, n, sieve);
  if (!s.good) return false;
  switch (qp.cls) {
    case QClass::two:
    case QClass::minus_two:
    case QClass::minus_one:
      return s.a <= 1;  // e is vacuous: |q| <= 2
    case QClass::q3mod4:
      return s.a <= 1 && s.e <= 1;
    case QClass::q5mod8:
      return s.a <= 2 && s.e <= 1;
    case QClass::q1mod8:
      return s.e <= 1;
    case QClass::none:
      break;
  }
  throw domain_error("is_solvable: unclassified q");
}

// Tabulated number of roots of x^2 = q (mod n): writing n = 2^a |q|^e b,
// the count is 2^omega(b) times a 2-power multiplier depending only on a.
// The |q| factor never changes the count. Multipliers per class:
//   q = +-2, q = -1, q = 3 (mod 4):  m(0) = m(1) = 1
//   q = 5 (mod 8):                   m = 1, 1, 2
//   q = 1 (mod 8):                   m = 1, 1, 2, 4, 4, ...
inline u64 solution_count_formula(const QParam& qp, i64 n, const SpfSieve* sieve = nullptr) {
  require_admissible(qp, "solution_count_formula");
  if (n < 1) throw domain_error("solution_count_formula: n must be >= 1");
  auto s = detail::modulus_shape(qp, n, sieve);
  if (!s.good) return 0;
  u64 base = u64(1) << s.omega_b;
  switch (qp.cls) {
    case QClass::two:
    case QClass::minus_two:
    case QClass::minus_one:
      return (s.a <= 1) ? base : 0;
    case QClass::q3mod4:
      return (s.a <= 1 && s.e <= 1) ? base : 0;
    case QClass::q5mod8:
      if (s.e > 1 || s.a > 2) return 0;
      return base * (s.a == 2 ? 2 : 1);
    case QClass::q1mod8: {
      if (s.e > 1) return 0;
      u64 mult = s.a <= 1 ? 1 : (s.a == 2 ? 2 : 4);
      return base * mult;
    }
    case QClass::none:
      break;
  }
  throw domain_error("solution_count_formula: unclassified q");
}

}  // namespace dqt
