#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dqt/errors.hpp"

namespace dqt {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

// Least nonnegative residue of a mod m (m > 0).
constexpr i64 mod_pos(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

constexpr i64 mulmod(i64 a, i64 b, i64 m) { return i64(i128(a) * b % m); }

constexpr i64 powmod(i64 base, u64 exp, i64 m) {
  i64 r = 1 % m;
  i64 b = mod_pos(base, m);
  while (exp) {
    if (exp & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    exp >>= 1;
  }
  return r;
}

// Modular inverse for gcd(a, m) = 1.
constexpr i64 inverse_mod(i64 a, i64 m) {
  i64 t = 0, nt = 1, r = m, nr = mod_pos(a, m);
  while (nr != 0) {
    i64 qt = r / nr;
    t = std::exchange(nt, t - qt * nt);
    r = std::exchange(nr, r - qt * nr);
  }
  if (r != 1) throw domain_error("inverse_mod: arguments not coprime");
  return mod_pos(t, m);
}

// Floor of the square root, integer Newton iteration (no floating point).
constexpr u64 isqrt(u64 n) {
  if (n < 2) return n;
  u64 x = u64(1) << ((std::bit_width(n) + 1) / 2);
  while (true) {
    u64 y = (x + n / x) / 2;
    if (y >= x) return x;
    x = y;
  }
}

namespace detail {
constexpr std::array<bool, 64> square_residue_mask = [] {
  std::array<bool, 64> ok{};
  for (u64 i = 0; i < 64; ++i) ok[(i * i) & 63] = true;
  return ok;
}();
}  // namespace detail

// Exact square root of m when m is a nonnegative perfect square (0 counts).
constexpr std::optional<i64> is_perfect_square(i64 m) {
  if (m < 0) return std::nullopt;
  if (!detail::square_residue_mask[u64(m) & 63]) return std::nullopt;
  u64 r = isqrt(u64(m));
  if (r * r != u64(m)) return std::nullopt;
  return i64(r);
}

// Kronecker symbol (a | n), extended Jacobi symbol over all integer n.
inline int kronecker(i64 a, i64 n) {
  if (a == 0 && n == 0) throw domain_error("kronecker(0, 0) is undefined");
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int sign = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) sign = -sign;
  }
  if (n % 2 == 0) {
    if (a % 2 == 0) return 0;
    int tz = std::countr_zero(u64(n));
    n >>= tz;
    i64 am8 = mod_pos(a, 8);
    if ((tz & 1) && (am8 == 3 || am8 == 5)) sign = -sign;
  }
  // Jacobi symbol for odd n > 0.
  a = mod_pos(a, n);
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      i64 nm8 = n % 8;
      if (nm8 == 3 || nm8 == 5) sign = -sign;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) sign = -sign;
    a %= n;
  }
  return n == 1 ? sign : 0;
}

// Prime factorization with sorted prime/exponent pairs.
struct Factorization {
  i64 n = 1;
  std::vector<std::pair<i64, int>> factors;

  int omega() const { return int(factors.size()); }
};

// Smallest-prime-factor table for 2..limit; built once, then read-only.
class SpfSieve {
 public:
  static constexpr i64 kDefaultEntryCap = 100'000'000;

  explicit SpfSieve(i64 limit, i64 entry_cap = kDefaultEntryCap) : limit_(limit) {
    if (limit < 2) throw domain_error("SpfSieve: limit must be >= 2");
    if (limit > entry_cap || limit > i64(UINT32_MAX))
      throw resource_error("SpfSieve: limit " + std::to_string(limit) +
                           " exceeds entry budget of " + std::to_string(entry_cap));
    spf_.assign(size_t(limit) + 1, 0);
    for (i64 i = 2; i <= limit; ++i) {
      if (spf_[size_t(i)] != 0) continue;
      for (i64 j = i; j <= limit; j += i)
        if (spf_[size_t(j)] == 0) spf_[size_t(j)] = uint32_t(i);
    }
  }

  i64 limit() const { return limit_; }

  i64 spf(i64 k) const {
    if (k < 2 || k > limit_) throw precondition_error("SpfSieve::spf: k out of range");
    return spf_[size_t(k)];
  }

  bool is_prime(i64 k) const { return k >= 2 && k <= limit_ && spf_[size_t(k)] == u64(k); }

 private:
  i64 limit_;
  std::vector<uint32_t> spf_;
};

// Factor n >= 1; uses the sieve when n is inside its range, trial division
// otherwise. n = 1 yields an empty factor list.
inline Factorization factorize(i64 n, const SpfSieve* sieve = nullptr) {
  if (n < 1) throw domain_error("factorize: n must be >= 1");
  Factorization f;
  f.n = n;
  auto push = [&f](i64 p) {
    if (!f.factors.empty() && f.factors.back().first == p)
      ++f.factors.back().second;
    else
      f.factors.emplace_back(p, 1);
  };
  i64 m = n;
  i64 d = 2;
  while (m > 1) {
    if (sieve && m <= sieve->limit()) {
      while (m > 1) {
        i64 p = sieve->spf(m);
        push(p);
        m /= p;
      }
      break;
    }
    if (i128(d) * d > m) {
      push(m);
      break;
    }
    if (m % d == 0) {
      push(d);
      m /= d;
    } else {
      d += (d == 2) ? 1 : 2;
    }
  }
  return f;
}

// Root of x^2 = q (mod p) for odd prime p, via Tonelli-Shanks with a scanned
// non-residue, so results are deterministic. Returns the smaller of the two
// roots; 0 when p | q; nullopt when q is a non-residue.
inline std::optional<i64> sqrt_mod_prime(i64 q, i64 p, const SpfSieve* sieve = nullptr) {
  if (p < 3 || p % 2 == 0) throw precondition_error("sqrt_mod_prime: p must be an odd prime");
  if (sieve && p <= sieve->limit() && !sieve->is_prime(p))
    throw precondition_error("sqrt_mod_prime: p is not prime");
  i64 u = mod_pos(q, p);
  if (u == 0) return 0;
  if (kronecker(u, p) == -1) return std::nullopt;
  i64 r;
  if (p % 4 == 3) {
    r = powmod(u, u64(p + 1) / 4, p);
  } else {
    i64 Q = p - 1;
    int S = 0;
    while (Q % 2 == 0) {
      Q /= 2;
      ++S;
    }
    i64 z = 2;
    while (kronecker(z, p) != -1) ++z;
    i64 M = S;
    i64 c = powmod(z, u64(Q), p);
    i64 t = powmod(u, u64(Q), p);
    r = powmod(u, u64(Q + 1) / 2, p);
    while (t != 1) {
      i64 i = 0, tt = t;
      while (tt != 1) {
        tt = mulmod(tt, tt, p);
        ++i;
      }
      i64 b = powmod(c, u64(1) << (M - i - 1), p);
      M = i;
      c = mulmod(b, b, p);
      t = mulmod(t, c, p);
      r = mulmod(r, b, p);
    }
  }
  return std::min(r, p - r);
}

namespace detail {

// Lift a root of x^2 = u (mod p) to modulus p^k; p odd, gcd(u, p) = 1.
inline i64 lift_odd_prime_power(i64 u, i64 p, i64 root, int k) {
  i64 x = mod_pos(root, p);
  i64 pj = p;
  for (int j = 1; j < k; ++j) {
    i128 diff = i128(x) * x - u;
    i64 rem = mod_pos(i64((diff / pj) % p), p);
    i64 step = mulmod(mod_pos(-rem, p), inverse_mod(mod_pos(2 * x, p), p), p);
    x += step * pj;
    pj *= p;
  }
  return x;
}

// The distinguished root of x^2 = u (mod 2^j) with x in [1, 2^{j-1});
// requires u = 1 (mod 8) and j >= 3.
inline u64 lift_two_power_base(i64 u, int j) {
  u64 x = 1;
  for (int alpha = 3; alpha < j; ++alpha) {
    u128 mask = (u128(1) << (alpha + 1)) - 1;
    i128 diff = i128(x) * x - u;
    if ((u128(diff) & mask) != 0) x += u64(1) << (alpha - 1);
  }
  return x;
}

}  // namespace detail

// Hensel lift: root^2 = q (mod p) with gcd(p, 2q) = 1 lifts to modulus p^k.
inline i64 hensel_lift(i64 q, i64 p, i64 root, int k) {
  if (k < 1) throw precondition_error("hensel_lift: k must be >= 1");
  if (p < 3 || p % 2 == 0 || mod_pos(q, p) == 0)
    throw precondition_error("hensel_lift: gcd(p, 2q) must be 1");
  if (mod_pos(i64(mod_pos(root, p)) * mod_pos(root, p) - mod_pos(q, p), p) != 0)
    throw precondition_error("hensel_lift: root^2 != q (mod p)");
  i128 pk = 1;
  for (int i = 0; i < k; ++i) {
    pk *= p;
    if (pk > (i128(1) << 62)) throw resource_error("hensel_lift: p^k exceeds 2^62");
  }
  i64 u = mod_pos(q, i64(pk));
  return detail::lift_odd_prime_power(u, p, root, k);
}

// All four roots of x^2 = q (mod 2^k) for q = 1 (mod 8), k >= 3, sorted,
// each in [1, 2^k].
inline std::vector<i64> lift_mod_two_powers(i64 q, int k) {
  if (mod_pos(q, 8) != 1) throw precondition_error("lift_mod_two_powers: q must be 1 (mod 8)");
  if (k < 3) throw precondition_error("lift_mod_two_powers: k must be >= 3");
  if (k > 62) throw resource_error("lift_mod_two_powers: 2^k exceeds 2^62");
  u64 M = u64(1) << k;
  u64 half = M >> 1;
  u64 x = detail::lift_two_power_base(mod_pos(q, i64(M)), k);
  std::vector<i64> roots = {i64(x), i64(half - x), i64(half + x), i64(M - x)};
  std::sort(roots.begin(), roots.end());
  return roots;
}

// Exhaustive sorted roots of x^2 = q (mod n) with representatives in [1, n].
struct SolutionSet {
  i64 modulus = 1;
  i64 q = 0;
  std::vector<i64> roots;
};

// Solves x^2 = q (mod n) by per-prime-power analysis plus CRT composition.
// One instance per (q, sieve); prime square roots are memoized, so reuse
// across many moduli is cheap. Pure and deterministic; not thread-safe,
// give each thread its own instance.
class CongruenceSolver {
 public:
  explicit CongruenceSolver(i64 q, const SpfSieve* sieve = nullptr) : q_(q), sieve_(sieve) {}

  i64 q() const { return q_; }

  SolutionSet solve(i64 n) {
    SolutionSet s;
    s.modulus = n;
    s.q = q_;
    solve_into(n, s.roots);
    return s;
  }

  u64 count(i64 n) {
    solve_into(n, scratch_count_);
    return scratch_count_.size();
  }

  void solve_into(i64 n, std::vector<i64>& roots) {
    if (n < 1) throw domain_error("solve_congruence: modulus must be >= 1");
    roots.clear();
    if (n == 1) {
      roots.push_back(1);
      return;
    }
    Factorization f = factorize(n, sieve_);
    acc_ = {0};
    i64 merged = 1;
    for (const auto& [p, k] : f.factors) {
      i64 pk = 1;
      for (int i = 0; i < k; ++i) pk *= p;
      roots_mod_prime_power(p, k, pk, ppow_);
      if (ppow_.empty()) return;
      next_.clear();
      next_.reserve(acc_.size() * ppow_.size());
      i64 inv = inverse_mod(merged % pk, pk);
      for (i64 r : acc_)
        for (i64 s : ppow_) {
          i64 delta = mulmod(mod_pos(s - r, pk), inv, pk);
          next_.push_back(r + merged * delta);
        }
      acc_.swap(next_);
      merged *= pk;
    }
    roots.reserve(acc_.size());
    for (i64 r : acc_) roots.push_back(r == 0 ? n : r);
    std::sort(roots.begin(), roots.end());
  }

 private:
  // Roots of x^2 = q (mod p^k) as residues in [0, p^k).
  void roots_mod_prime_power(i64 p, int k, i64 pk, std::vector<i64>& out) {
    out.clear();
    i64 qr = mod_pos(q_, pk);
    if (qr == 0) {
      // x must vanish to order ceil(k/2).
      i64 step = 1;
      for (int i = 0; i < (k + 1) / 2; ++i) step *= p;
      for (i64 x = 0; x < pk; x += step) out.push_back(x);
      return;
    }
    int v = 0;
    i64 u = qr;
    while (u % p == 0) {
      u /= p;
      ++v;
    }
    if (v & 1) return;  // odd valuation: no solutions
    int m = v / 2, j = k - v;
    i64 pj = pk;
    i64 pm = 1;
    for (int i = 0; i < v; ++i) pj /= p;
    for (int i = 0; i < m; ++i) pm *= p;
    base_.clear();
    if (p == 2) {
      i64 um = mod_pos(u, pj < 8 ? pj : 8);
      if (j == 1) {
        base_.push_back(1);
      } else if (j == 2) {
        if (um % 4 != 1) return;
        base_.push_back(1);
        base_.push_back(3);
      } else {
        if (um != 1) return;
        u64 x = detail::lift_two_power_base(mod_pos(u, pj), j);
        u64 half = u64(pj) >> 1;
        base_.push_back(i64(x));
        base_.push_back(i64(half - x));
        base_.push_back(i64(half + x));
        base_.push_back(i64(u64(pj) - x));
      }
    } else {
      i64 r0 = prime_sqrt_cached(u, p);
      if (r0 < 0) return;
      i64 y = (j == 1) ? r0 : detail::lift_odd_prime_power(mod_pos(u, pj), p, r0, j);
      base_.push_back(y);
      base_.push_back(pj - y);
    }
    for (i64 y : base_)
      for (i64 t = 0; t < pm; ++t) out.push_back(pm * (y + t * pj));
  }

  // Cached Tonelli-Shanks for the fixed q_; -1 marks a non-residue. The key
  // is just p: u here is determined by p and the p-valuation of q_.
  i64 prime_sqrt_cached(i64 u, i64 p) {
    auto it = sqrt_cache_.find(p);
    if (it != sqrt_cache_.end()) return it->second;
    auto r = sqrt_mod_prime(u, p);
    i64 val = r.has_value() ? *r : -1;
    sqrt_cache_.emplace(p, val);
    return val;
  }

  i64 q_;
  const SpfSieve* sieve_;
  std::unordered_map<i64, i64> sqrt_cache_;
  std::vector<i64> acc_, next_, ppow_, base_, scratch_count_;
};

inline SolutionSet solve_congruence(i64 q, i64 n, const SpfSieve* sieve = nullptr) {
  CongruenceSolver solver(q, sieve);
  return solver.solve(n);
}

// Oracle-scale direct scan of x in [1, n] with n | x^2 - q.
inline u64 count_solutions_bruteforce(i64 q, i64 n) {
  if (n < 1) throw domain_error("count_solutions_bruteforce: n must be >= 1");
  if (n > 1'000'000)
    throw resource_error("count_solutions_bruteforce: n exceeds the 10^6 oracle cap");
  u64 count = 0;
  i64 v = mod_pos(1 - q, n);  // (x^2 - q) mod n at x = 1
  for (i64 x = 1; x <= n; ++x) {
    if (v == 0) ++count;
    v += (2 * x + 1) % n;
    if (v >= n) v -= n;
  }
  return count;
}

}  // namespace dqt
