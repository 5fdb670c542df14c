#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "dqt/arith.hpp"
#include "dqt/errors.hpp"
#include "dqt/goodprimes.hpp"

namespace dqt {

// Real Dirichlet character: either one of the fixed small tables or the
// Kronecker symbol of a discriminant d, evaluated as (d | a).
enum class CharKind { table_8_5, table_8_3, table_4_3, kronecker_d };

struct CharacterSpec {
  i64 modulus = 1;
  CharKind kind = CharKind::kronecker_d;
  i64 d = 0;         // only for kronecker_d
  bool odd = false;  // chi(-1) = -1

  int value(i64 a) const {
    switch (kind) {
      case CharKind::table_8_5: {
        static constexpr std::array<int, 8> v = {0, 1, 0, -1, 0, -1, 0, 1};
        return v[size_t(mod_pos(a, 8))];
      }
      case CharKind::table_8_3: {
        static constexpr std::array<int, 8> v = {0, 1, 0, 1, 0, -1, 0, -1};
        return v[size_t(mod_pos(a, 8))];
      }
      case CharKind::table_4_3: {
        static constexpr std::array<int, 4> v = {0, 1, 0, -1};
        return v[size_t(mod_pos(a, 4))];
      }
      case CharKind::kronecker_d:
        return kronecker(d, a);
    }
    return 0;
  }

  static CharacterSpec table_8_5() { return {8, CharKind::table_8_5, 8, false}; }
  static CharacterSpec table_8_3() { return {8, CharKind::table_8_3, -8, true}; }
  static CharacterSpec table_4_3() { return {4, CharKind::table_4_3, -4, true}; }

  // chi(a) = (d | a) of modulus |d|; d must be 0 or 1 mod 4.
  static CharacterSpec kronecker_char(i64 d) {
    if (d == 0 || mod_pos(d, 4) == 2 || mod_pos(d, 4) == 3)
      throw domain_error("kronecker_char: d must be a nonzero discriminant (0 or 1 mod 4)");
    return {d < 0 ? -d : d, CharKind::kronecker_d, d, d < 0};
  }
};

// The character whose L-value feeds q's slope constants.
inline CharacterSpec character_for_q(const QParam& qp) {
  require_admissible(qp, "character_for_q");
  switch (qp.cls) {
    case QClass::two: return CharacterSpec::table_8_5();
    case QClass::minus_two: return CharacterSpec::table_8_3();
    case QClass::minus_one: return CharacterSpec::table_4_3();
    case QClass::q3mod4: return CharacterSpec::kronecker_char(4 * qp.q);
    case QClass::q5mod8:
    case QClass::q1mod8: return CharacterSpec::kronecker_char(qp.q);
    case QClass::none: break;
  }
  throw domain_error("character_for_q: unclassified q");
}

inline double zeta2() {
  const double pi = std::numbers::pi_v<double>;
  return pi * pi / 6.0;
}

namespace detail {

inline void require_nonprincipal(const CharacterSpec& spec, const char* who) {
  i64 sum = 0;
  for (i64 a = 1; a <= spec.modulus; ++a) sum += spec.value(a);
  if (sum != 0) throw domain_error(std::string(who) + ": principal character has a pole at s = 1");
}

}  // namespace detail

// L(1, chi) by the finite closed-form sum over one period of a primitive
// real character: log-sine weights for even chi, linear weights for odd chi.
inline double dirichlet_l1(const CharacterSpec& spec) {
  detail::require_nonprincipal(spec, "dirichlet_l1");
  const double pi = std::numbers::pi_v<double>;
  const double m = double(spec.modulus);
  double sum = 0.0;
  if (spec.odd) {
    i128 weighted = 0;  // |sum| < m^2/2, beyond i64 for very large q
    for (i64 a = 1; a < spec.modulus; ++a) weighted += i128(a) * spec.value(a);
    sum = -pi * double(weighted) / (m * std::sqrt(m));
  } else {
    double acc = 0.0, comp = 0.0;
    for (i64 a = 1; a < spec.modulus; ++a) {
      int chi = spec.value(a);
      if (chi == 0) continue;
      double term = double(chi) * std::log(std::sin(pi * double(a) / m));
      double y = term - comp;
      double t = acc + y;
      comp = (t - acc) - y;
      acc = t;
    }
    sum = -acc / std::sqrt(m);
  }
  return sum;
}

// L(1, chi) by direct partial summation over `periods` full periods with a
// second-order tail correction. After K periods the tail is
//   -A1/m^2 * sum_{k>=K} 1/k^2 + E,   A1 = sum a*chi(a),  |E| <= 1/(6(K-1)^2),
// so the default K = 50000 bounds the error by about 1e-10. Works for any
// nonprincipal spec (no primitivity needed); serves as the independent
// cross-check of the closed forms.
inline double dirichlet_l1_series(const CharacterSpec& spec, i64 periods = 50'000) {
  detail::require_nonprincipal(spec, "dirichlet_l1_series");
  if (periods < 2) throw domain_error("dirichlet_l1_series: need at least 2 periods");
  const i64 m = spec.modulus;
  std::vector<int> chi(size_t(m), 0);
  for (i64 a = 0; a < m; ++a) chi[size_t(a)] = spec.value(a);
  double sum = 0.0, comp = 0.0;  // Kahan compensation
  for (i64 n = 1; n <= periods * m; ++n) {
    int c = chi[size_t(n % m)];
    if (c == 0) continue;
    double term = double(c) / double(n);
    double y = term - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  i64 a1 = 0;
  for (i64 a = 1; a < m; ++a) a1 += a * chi[size_t(a)];
  const double K = double(periods);
  const double psi1 = 1.0 / K + 1.0 / (2.0 * K * K) + 1.0 / (6.0 * K * K * K);
  return sum - double(a1) / (double(m) * double(m)) * psi1;
}

// Linear-growth coefficient of the exact pair count: D_2,q(N) ~ slope * N.
inline double pair_slope(const QParam& qp) {
  require_admissible(qp, "pair_slope");
  double L = dirichlet_l1(character_for_q(qp));
  double factor = 1.0;
  if (qp.cls == QClass::q5mod8) factor = 2.0;
  return factor * L / zeta2();
}

// Linear-growth coefficient of the good-weight prefix sums B_q(N).
inline double weight_slope(const QParam& qp) {
  require_admissible(qp, "weight_slope");
  double L = dirichlet_l1(character_for_q(qp));
  double aq = double(qp.abs_q());
  double factor = 0.0;
  switch (qp.cls) {
    case QClass::two:
    case QClass::minus_two:
    case QClass::minus_one:
      factor = 2.0 / 3.0;
      break;
    case QClass::q3mod4:
      factor = 2.0 * aq / (3.0 * (aq + 1.0));
      break;
    case QClass::q5mod8:
      factor = aq / (aq + 1.0);
      break;
    case QClass::q1mod8:
      factor = aq / (3.0 * (aq + 1.0));
      break;
    case QClass::none:
      throw domain_error("weight_slope: unclassified q");
  }
  return factor * L / zeta2();
}

// Triple count grows at exactly half the pair slope; computed through the
// identical floating-point path so the halving is exact.
inline double triple_slope(const QParam& qp) { return pair_slope(qp) / 2.0; }

// Slope constants with their L(1, chi) and zeta(2) ingredients.
struct SlopeReport {
  QParam qparam;
  double L1 = 0.0;
  double zeta2 = 0.0;
  double pair_slope = 0.0;
  double b_slope = 0.0;
  double triple_slope = 0.0;

  static SlopeReport for_q(const QParam& qp) {
    require_admissible(qp, "SlopeReport");
    SlopeReport r;
    r.qparam = qp;
    r.L1 = dirichlet_l1(character_for_q(qp));
    r.zeta2 = dqt::zeta2();
    r.pair_slope = dqt::pair_slope(qp);
    r.b_slope = dqt::weight_slope(qp);
    r.triple_slope = dqt::triple_slope(qp);
    return r;
  }
};

}  // namespace dqt
