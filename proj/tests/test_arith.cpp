#include "dqt/arith.hpp"

#include <catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace dqt;

TEST_CASE("isqrt is exact") {
  CHECK(isqrt(0) == 0);
  CHECK(isqrt(1) == 1);
  CHECK(isqrt(2) == 1);
  CHECK(isqrt(3) == 1);
  CHECK(isqrt(4) == 2);
  for (u64 n = 0; n <= 200'000; ++n) {
    u64 r = isqrt(n);
    REQUIRE(r * r <= n);
    REQUIRE((r + 1) * (r + 1) > n);
  }
  CHECK(isqrt(u64(-1)) == 4294967295u);
  CHECK(isqrt(u64(4294967295u) * 4294967295u) == 4294967295u);
}

TEST_CASE("is_perfect_square") {
  CHECK(is_perfect_square(16) == 4);
  CHECK_FALSE(is_perfect_square(2).has_value());
  CHECK(is_perfect_square(0) == 0);
  CHECK_FALSE(is_perfect_square(-4).has_value());
  for (i64 n = 1; n <= 100'000; ++n) {
    CHECK(is_perfect_square(n * n) == n);
    if (n > 1) CHECK_FALSE(is_perfect_square(n * n - 1).has_value());
    CHECK_FALSE(is_perfect_square(n * n + 1).has_value());
  }
  i64 big = i64(3037000499);  // floor(sqrt(2^63 - 1))
  CHECK(is_perfect_square(big * big) == big);
  CHECK_FALSE(is_perfect_square(big * big + 2).has_value());
}

TEST_CASE("kronecker known values") {
  CHECK(kronecker(2, 7) == 1);
  CHECK(kronecker(2, 2) == 0);
  CHECK(kronecker(-1, 5) == 1);
  CHECK(kronecker(0, 1) == 1);
  CHECK(kronecker(0, -1) == 1);
  CHECK(kronecker(0, 5) == 0);
  CHECK(kronecker(5, 0) == 0);
  CHECK(kronecker(-1, 0) == 1);
  CHECK_THROWS_AS(kronecker(0, 0), domain_error);
}

TEST_CASE("kronecker matches the factored definition and is multiplicative") {
  for (i64 a = -200; a <= 200; ++a)
    for (i64 n = -200; n <= 200; ++n) {
      if (a == 0 && n == 0) continue;
      REQUIRE(kronecker(a, n) == oracles::kronecker(a, n));
    }
  // complete multiplicativity in both arguments (zero factors paired with
  // negative cofactors fall outside the convention), and period 4n in a
  for (i64 a = -40; a <= 40; ++a)
    for (i64 b = -40; b <= 40; ++b) {
      if (a == 0 || b == 0) continue;
      for (i64 n : {-15, -8, -3, -1, 1, 2, 3, 4, 5, 7, 9, 12}) {
        CHECK(kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n));
        CHECK(kronecker(a, b * n) == kronecker(a, b) * kronecker(a, n));
      }
    }
  for (i64 n = 1; n <= 200; ++n)
    for (i64 a = -200; a <= 200; ++a) CHECK(kronecker(a, n) == kronecker(a + 4 * n, n));
}

TEST_CASE("SpfSieve") {
  SpfSieve s10(10);
  CHECK(s10.spf(4) == 2);
  CHECK(s10.spf(9) == 3);
  CHECK(s10.spf(7) == 7);
  SpfSieve s2(2);
  CHECK(s2.spf(2) == 2);
  SpfSieve s30(30);
  CHECK(s30.spf(15) == 3);
  CHECK(s30.spf(25) == 5);
  for (i64 k = 2; k <= 30; ++k) {
    i64 p = s30.spf(k);
    CHECK(k % p == 0);
    CHECK(s30.is_prime(p));
    for (i64 d = 2; d < p; ++d) CHECK(k % d != 0);
  }
  CHECK_THROWS_AS(SpfSieve(1), domain_error);
  CHECK_THROWS_AS(SpfSieve(2'000'000, 1'000'000), resource_error);
}

TEST_CASE("factorize") {
  SpfSieve sieve(10'000);
  CHECK(factorize(1).factors.empty());
  CHECK(factorize(1).omega() == 0);
  auto f12 = factorize(12, &sieve);
  REQUIRE(f12.factors.size() == 2);
  CHECK(f12.factors[0] == std::pair<i64, int>{2, 2});
  CHECK(f12.factors[1] == std::pair<i64, int>{3, 1});
  auto f = factorize(9991, &sieve);
  REQUIRE(f.factors.size() == 2);
  CHECK(f.factors[0] == std::pair<i64, int>{97, 1});
  CHECK(f.factors[1] == std::pair<i64, int>{103, 1});
  CHECK_THROWS_AS(factorize(0), domain_error);

  // product and ordering invariants, with and without the sieve
  for (i64 n = 1; n <= 3000; ++n) {
    for (const Factorization& g : {factorize(n), factorize(n, &sieve)}) {
      i64 prod = 1;
      i64 last = 1;
      for (auto [p, k] : g.factors) {
        CHECK(p > last);
        CHECK(sieve.is_prime(p));
        CHECK(k >= 1);
        last = p;
        for (int i = 0; i < k; ++i) prod *= p;
      }
      CHECK(prod == n);
    }
  }
}

TEST_CASE("sqrt_mod_prime") {
  auto r = sqrt_mod_prime(2, 7);
  REQUIRE(r.has_value());
  CHECK((*r == 3 || *r == 4));
  CHECK_FALSE(sqrt_mod_prime(3, 5).has_value());
  CHECK(sqrt_mod_prime(0, 11) == 0);
  CHECK_THROWS_AS(sqrt_mod_prime(2, 2), precondition_error);
  SpfSieve sieve(100);
  CHECK_THROWS_AS(sqrt_mod_prime(2, 9, &sieve), precondition_error);

  // exhaustive against a residue scan
  for (i64 p : {3, 5, 7, 11, 13, 17, 97, 101, 257, 641}) {
    for (i64 q = -p; q <= p; ++q) {
      bool exists = false;
      for (i64 x = 0; x < p && !exists; ++x) exists = mod_pos(x * x - q, p) == 0;
      auto root = sqrt_mod_prime(q, p);
      REQUIRE(root.has_value() == exists);
      if (root) CHECK(mod_pos(*root * *root - q, p) == 0);
    }
  }
}

TEST_CASE("hensel_lift") {
  CHECK(hensel_lift(2, 7, 3, 2) == 10);
  CHECK(hensel_lift(2, 7, 3, 1) == 3);
  CHECK(hensel_lift(-1, 5, 2, 3) == 57);
  CHECK_THROWS_AS(hensel_lift(7, 7, 0, 2), precondition_error);  // p | q
  CHECK_THROWS_AS(hensel_lift(2, 7, 5, 2), precondition_error);  // 5^2 != 2 (mod 7)
  CHECK_THROWS_AS(hensel_lift(2, 4, 1, 2), precondition_error);  // even p
}

TEST_CASE("hensel_lift output reduces to the input root") {
  for (i64 p : {3, 5, 7, 11, 13}) {
    for (i64 q = -20; q <= 20; ++q) {
      if (mod_pos(q, p) == 0) continue;
      auto r0 = sqrt_mod_prime(q, p);
      if (!r0 || *r0 == 0) continue;
      for (int k = 1; k <= 5; ++k) {
        i64 x = hensel_lift(q, p, *r0, k);
        i64 pk = 1;
        for (int i = 0; i < k; ++i) pk *= p;
        CHECK(mod_pos(i64(i128(x) * x - q) % pk, pk) == 0);
        CHECK(mod_pos(x, p) == *r0);
      }
    }
  }
}

TEST_CASE("lift_mod_two_powers") {
  CHECK(lift_mod_two_powers(17, 3) == std::vector<i64>{1, 3, 5, 7});
  CHECK(lift_mod_two_powers(17, 5) == std::vector<i64>{7, 9, 23, 25});
  CHECK(lift_mod_two_powers(1, 4) == std::vector<i64>{1, 7, 9, 15});
  CHECK_THROWS_AS(lift_mod_two_powers(3, 4), precondition_error);
  CHECK_THROWS_AS(lift_mod_two_powers(17, 2), precondition_error);
  for (i64 q : {1, 9, 17, 25, 33, -7, -15}) {
    for (int k = 3; k <= 20; ++k) {
      auto roots = lift_mod_two_powers(q, k);
      REQUIRE(roots.size() == 4);
      i64 M = i64(1) << k;
      for (size_t i = 0; i < roots.size(); ++i) {
        i64 x = roots[i];
        CHECK(x >= 1);
        CHECK(x <= M);
        CHECK(mod_pos(i64((i128(x) * x - q) % M), M) == 0);
        if (i > 0) CHECK(roots[i - 1] < x);
      }
    }
  }
}

TEST_CASE("solve_congruence worked examples") {
  CHECK(solve_congruence(2, 7).roots == std::vector<i64>{3, 4});
  CHECK(solve_congruence(2, 4).roots.empty());
  CHECK(solve_congruence(3, 11).roots == std::vector<i64>{5, 6});
  CHECK(solve_congruence(5, 1).roots == std::vector<i64>{1});
  CHECK(solve_congruence(2, 2).roots == std::vector<i64>{2});
  CHECK_THROWS_AS(solve_congruence(2, 0), domain_error);
}

TEST_CASE("count_solutions_bruteforce") {
  CHECK(count_solutions_bruteforce(2, 7) == 2);
  CHECK(count_solutions_bruteforce(1, 24) == 8);
  CHECK(count_solutions_bruteforce(5, 2) == 1);
  CHECK_THROWS_AS(count_solutions_bruteforce(2, 2'000'000), resource_error);
}

TEST_CASE("solver equals brute force for every q in [-13,13], n <= 2000") {
  SpfSieve sieve(2000);
  for (i64 q = -13; q <= 13; ++q) {
    if (q == 0) continue;
    CongruenceSolver solver(q, &sieve);
    std::vector<i64> roots;
    for (i64 n = 1; n <= 2000; ++n) {
      solver.solve_into(n, roots);
      REQUIRE(roots.size() == count_solutions_bruteforce(q, n));
      i64 prev = 0;
      for (i64 x : roots) {
        REQUIRE(x > prev);
        REQUIRE(x <= n);
        REQUIRE(mod_pos(i64((i128(x) * x - q) % n), n) == 0);
        prev = x;
      }
    }
  }
}
