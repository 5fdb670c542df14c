#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <tuple>
#include <vector>

#include "dqt/arith.hpp"
#include "dqt/errors.hpp"
#include "dqt/lfun.hpp"

namespace dqt {

// Indefinite binary quadratic form a x^2 + b xy + c y^2.
struct QuadForm {
  i64 a = 0, b = 0, c = 0;

  i64 disc() const { return b * b - 4 * a * c; }
  auto key() const { return std::tuple(a, b, c); }
  bool operator==(const QuadForm& o) const { return a == o.a && b == o.b && c == o.c; }
};

namespace detail {

inline void require_discriminant(i64 D, const char* who) {
  if (D <= 0) throw domain_error(std::string(who) + ": discriminant must be positive");
  if (mod_pos(D, 4) > 1) throw domain_error(std::string(who) + ": discriminant must be 0 or 1 mod 4");
  if (is_perfect_square(D)) throw domain_error(std::string(who) + ": discriminant must not be a square");
}

}  // namespace detail

// Reduced for indefinite D: 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b.
inline bool is_reduced(const QuadForm& f) {
  i64 D = f.disc();
  if (f.b <= 0 || f.a == 0 || f.c == 0) return false;
  i64 abs2a = 2 * (f.a < 0 ? -f.a : f.a);
  i128 lhs = i128(abs2a + f.b) * (abs2a + f.b);
  if (lhs <= D) return false;  // sqrt(D) - b < 2|a|
  if (i128(f.b) * f.b >= D) return false;  // b < sqrt(D)
  if (abs2a > f.b) {
    i128 rhs = i128(abs2a - f.b) * (abs2a - f.b);
    if (rhs >= D) return false;  // 2|a| < sqrt(D) + b
  }
  return true;
}

// One reduction step. On the reduced cycle this is the standard rho
// operator; off-cycle it contracts |a|, |c| toward reduced size.
inline QuadForm rho(const QuadForm& f) {
  i64 D = f.disc();
  detail::require_discriminant(D, "rho");
  if (f.c == 0) throw domain_error("rho: degenerate form (c = 0)");
  i64 isq = i64(isqrt(u64(D)));
  i64 ac = f.c < 0 ? -f.c : f.c;
  i64 two_c = 2 * ac;
  i64 r;
  if (ac > isq) {
    r = mod_pos(-f.b, two_c);
    if (r > ac) r -= two_c;
  } else {
    r = isq - i64(mod_pos(isq + f.b, two_c));
  }
  i64 c2 = i64((i128(r) * r - D) / (4 * f.c));
  return {f.c, r, c2};
}

// Reduce an arbitrary form of positive nonsquare discriminant; the step
// count is exposed for termination tests.
inline QuadForm reduce(QuadForm f, int* steps = nullptr) {
  detail::require_discriminant(f.disc(), "reduce");
  int n = 0;
  while (!is_reduced(f)) {
    f = rho(f);
    if (++n > 10'000) throw internal_error("reduce: reduction failed to terminate");
  }
  if (steps) *steps = n;
  return f;
}

// All reduced forms of discriminant D, canonically sorted.
inline std::vector<QuadForm> enumerate_reduced_forms(i64 D) {
  detail::require_discriminant(D, "enumerate_reduced_forms");
  std::vector<QuadForm> forms;
  i64 isq = i64(isqrt(u64(D)));
  for (i64 b = (D % 2 == 0) ? 2 : 1; b <= isq; b += 2) {
    i64 P = (D - b * b) / 4;  // = |a| * |c|, opposite signs
    if (P <= 0) continue;
    for (i64 a = 1; a * a <= P; ++a) {
      if (P % a != 0) continue;
      i64 c = P / a;
      for (i64 aa : {a, c}) {
        i64 cc = P / aa;
        QuadForm plus{aa, b, -cc};
        if (is_reduced(plus)) {
          forms.push_back(plus);
          forms.push_back({-aa, b, cc});
        }
        if (aa == cc) break;
      }
    }
  }
  std::sort(forms.begin(), forms.end(),
            [](const QuadForm& x, const QuadForm& y) { return x.key() < y.key(); });
  return forms;
}

// Fundamental solution of the +-4 Pell equation: u_D = (t + s sqrt(D)) / 2.
struct FundamentalUnit {
  i64 t = 0, s = 0;
  int norm = 1;  // (t^2 - D s^2) / 4
  double log_u = 0.0;
};

namespace detail {

// Fundamental solution of x^2 - d y^2 = +-1 via the continued fraction of
// sqrt(d); the first period-end convergent is fundamental, with norm (-1)^len.
inline std::pair<i64, i64> pell_pm1(i64 d) {
  i64 a0 = i64(isqrt(u64(d)));
  i64 P = 0, Q = 1, a = a0;
  i128 p_prev = 1, p_cur = a0, q_prev = 0, q_cur = 1;
  const i128 cap = i128(1) << 62;
  for (int it = 0; it < 100'000; ++it) {
    P = a * Q - P;
    Q = (d - P * P) / Q;
    if (Q == 1) {
      if (p_cur > cap || q_cur > cap)
        throw resource_error("fundamental_unit: Pell solution exceeds 2^62");
      return {i64(p_cur), i64(q_cur)};
    }
    a = (P + a0) / Q;
    i128 p_next = a * p_cur + p_prev;
    i128 q_next = a * q_cur + q_prev;
    if (p_next > cap || q_next > cap)
      throw resource_error("fundamental_unit: Pell convergents exceed 2^62");
    p_prev = std::exchange(p_cur, p_next);
    q_prev = std::exchange(q_cur, q_next);
  }
  throw internal_error("pell_pm1: period not found");
}

}  // namespace detail

// Minimal (t, s) with t^2 - D s^2 = +-4, t, s >= 1. For D = 0 mod 4 this is
// twice the +-1 Pell solution of D/4; for D = 5 mod 8 a strictly smaller
// half-integer unit may exist (its cube is the integer one) and is found by
// a bounded scan over odd s.
inline FundamentalUnit fundamental_unit(i64 D) {
  detail::require_discriminant(D, "fundamental_unit");
  FundamentalUnit u;
  if (D % 4 == 0) {
    auto [x, y] = detail::pell_pm1(D / 4);
    u.t = 2 * x;
    u.s = y;
  } else {
    auto [x, y] = detail::pell_pm1(D);
    u.t = 2 * x;
    u.s = 2 * y;
    if (mod_pos(D, 8) == 5) {
      long double epsilon = (long double)(x) + (long double)(y) * sqrtl((long double)D);
      i64 smax = i64(2.0L * cbrtl(epsilon) / sqrtl((long double)D)) + 2;
      for (i64 s = 1; s <= smax; s += 2) {
        i128 Ds2 = i128(D) * s * s;
        bool found = false;
        for (i64 delta : {-4, 4}) {
          i128 t2 = Ds2 + delta;
          if (t2 <= 0 || t2 > i128(i64(1) << 62)) continue;
          u64 r = isqrt(u64(t2));
          if (i128(r) * r == t2) {
            u.t = i64(r);
            u.s = s;
            found = true;
            break;
          }
        }
        if (found) break;
      }
    }
  }
  i128 norm4 = i128(u.t) * u.t - i128(D) * u.s * u.s;
  if (norm4 != 4 && norm4 != -4) throw internal_error("fundamental_unit: norm is not +-4");
  u.norm = int(norm4 / 4);
  u.log_u = double(logl(((long double)u.t + (long double)u.s * sqrtl((long double)D)) / 2.0L));
  return u;
}

// Wide class number: rho-cycles of reduced forms count classes in the
// narrow sense; when the fundamental unit has norm +1 the narrow count is
// twice the wide one.
inline i64 narrow_class_number(i64 D) {
  auto forms = enumerate_reduced_forms(D);
  std::map<std::tuple<i64, i64, i64>, bool> visited;
  for (const auto& f : forms) visited[f.key()] = false;
  i64 cycles = 0;
  for (const auto& f : forms) {
    if (visited[f.key()]) continue;
    ++cycles;
    QuadForm g = f;
    do {
      auto it = visited.find(g.key());
      if (it == visited.end()) throw internal_error("narrow_class_number: rho left the reduced set");
      if (it->second) break;
      it->second = true;
      g = rho(g);
    } while (!(g == f));
  }
  return cycles;
}

inline i64 class_number(i64 D) {
  detail::require_discriminant(D, "class_number");
  i64 narrow = narrow_class_number(D);
  if (fundamental_unit(D).norm == -1) return narrow;
  if (narrow % 2 != 0) throw internal_error("class_number: odd narrow count with norm +1 unit");
  return narrow / 2;
}

struct QuadOrderData {
  i64 discriminant = 0;
  i64 class_number = 0;
  double fundamental_unit_log = 0.0;
};

inline QuadOrderData quad_order_data(i64 D) {
  return {D, class_number(D), fundamental_unit(D).log_u};
}

// Dirichlet class number formula residual for q's character:
//   | L(1, chi_q) - 2 h(D) log(u_D) / sqrt(D) |
// with D = 8 for q = 2, D = 4q for positive q = 3 mod 4, D = q for positive
// q = 1 mod 4. Other q have no fundamental positive discriminant here.
inline double verify_class_number_formula(const QParam& qp) {
  require_admissible(qp, "verify_class_number_formula");
  i64 D = 0;
  if (qp.q == 2) {
    D = 8;
  } else if (qp.q > 0 && qp.cls == QClass::q3mod4) {
    D = 4 * qp.q;
  } else if (qp.q > 0 && (qp.cls == QClass::q5mod8 || qp.cls == QClass::q1mod8)) {
    D = qp.q;
  } else {
    throw unsupported_error("verify_class_number_formula: q = " + std::to_string(qp.q) +
                            " has no fundamental positive discriminant in this check");
  }
  double lhs = dirichlet_l1(character_for_q(qp));
  QuadOrderData od = quad_order_data(D);
  double rhs = 2.0 * double(od.class_number) * od.fundamental_unit_log / std::sqrt(double(D));
  return std::fabs(lhs - rhs);
}

}  // namespace dqt
