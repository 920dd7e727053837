#include <doctest.h>

#include <random>

#include "fintest/errors.hpp"
#include "fintest/numtheory.hpp"
#include "oracles.hpp"

using namespace fintest;
using W = std::vector<std::uint64_t>;

TEST_CASE("gcd and lcm") {
  CHECK(gcd_many(W{6, 10}) == 2);
  CHECK(lcm_many(W{6, 10}) == 30);
  CHECK(gcd_many(W{9}) == 9);
  CHECK(lcm_many(W{9}) == 9);
  CHECK(gcd_many(W{1, 77}) == 1);
  CHECK_THROWS_AS(gcd_many(W{}), InputError);
  CHECK_THROWS_AS(lcm_many(W{1ULL << 40, (1ULL << 40) - 1}), ResourceError);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    W ws;
    for (int k = 0; k < 1 + i % 4; ++k) ws.push_back(1 + rng() % 60);
    auto g = gcd_many(ws), l = lcm_many(ws);
    for (auto w : ws) {
      CHECK(w % g == 0);
      CHECK(l % w == 0);
    }
  }
}

TEST_CASE("crt examples") {
  auto a = crt_solve(std::vector<Congruence>{{2, 3}, {3, 5}});
  REQUIRE(a.has_value());
  CHECK(*a == Congruence{8, 15});
  CHECK_FALSE(crt_solve(std::vector<Congruence>{{0, 2}, {1, 2}}).has_value());
  CHECK(*crt_solve(std::vector<Congruence>{{4, 7}}) == Congruence{4, 7});
}

TEST_CASE("crt agrees with a scan") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Congruence> cs;
    for (int k = 0; k < 1 + trial % 3; ++k) {
      std::uint64_t m = 1 + rng() % 30;
      cs.push_back({rng() % m, m});
    }
    W mods;
    for (auto& c : cs) mods.push_back(c.modulus);
    std::uint64_t l = lcm_many(mods);
    std::optional<std::uint64_t> first;
    for (std::uint64_t x = 0; x < l && !first; ++x) {
      bool ok = true;
      for (auto& c : cs) ok &= x % c.modulus == c.residue;
      if (ok) first = x;
    }
    auto got = crt_solve(cs);
    CHECK(got.has_value() == first.has_value());
    if (got && first) {
      CHECK(got->modulus == l);
      CHECK(got->residue == *first);
    }
  }
}

TEST_CASE("frobenius examples") {
  CHECK(frobenius_multiple(W{3, 5}) == 7);
  CHECK(frobenius_multiple(W{6, 10}) == 14);
  CHECK(frobenius_multiple(W{1, 4}) == -1);
  CHECK(frobenius_multiple(W{2, 4}) == -2);
  CHECK_THROWS_AS(frobenius_multiple(W{2000003, 2000004}), ResourceError);
}

TEST_CASE("frobenius agrees with marking on subsets of 2..9") {
  for (std::uint64_t mask = 1; mask < (1u << 8); ++mask) {
    if (__builtin_popcountll(mask) > 3) continue;
    W ws;
    for (std::uint64_t k = 0; k < 8; ++k) {
      if (mask >> k & 1) ws.push_back(k + 2);
    }
    std::uint64_t g = gcd_many(ws);
    W reduced;
    for (auto w : ws) reduced.push_back(w / g);
    long long f = oracle::marking_frobenius(reduced);
    long long expect = f < 0 ? -static_cast<long long>(g) : f * static_cast<long long>(g);
    CHECK(frobenius_multiple(ws) == expect);
    if (ws.size() == 2 && g == 1) {
      CHECK(expect == static_cast<long long>(ws[0] * ws[1] - ws[0] - ws[1]));
    }
  }
}

TEST_CASE("decompose examples") {
  auto zero = conical_decompose(0, W{3, 5});
  REQUIRE(zero.has_value());
  CHECK(*zero == W{0, 0});
  CHECK_FALSE(conical_decompose(7, W{3, 5}).has_value());
  CHECK(*conical_decompose(11, W{3, 5}) == W{2, 1});
  CHECK_THROWS_AS(conical_decompose(997000, W{999, 1000}, 1000), ResourceError);
}

TEST_CASE("decompose around the frobenius value") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    W ws;
    for (int k = 0; k < 2 + trial % 2; ++k) ws.push_back(2 + rng() % 20);
    auto f = frobenius_multiple(ws);
    auto g = static_cast<long long>(gcd_many(ws));
    if (f >= 0) CHECK_FALSE(conical_decompose(static_cast<std::uint64_t>(f), ws).has_value());
    for (long long i = 1; i <= 20; ++i) {
      auto t = static_cast<std::uint64_t>(std::max<long long>(f, -g) + i * g);
      auto b = conical_decompose(t, ws);
      REQUIRE(b.has_value());
      std::uint64_t sum = 0;
      for (std::size_t k = 0; k < ws.size(); ++k) sum += (*b)[k] * ws[k];
      CHECK(sum == t);
    }
  }
  // Large targets go through the bulk peel.
  auto big = conical_decompose(1'000'000'007ULL, W{3, 5});
  REQUIRE(big.has_value());
  CHECK((*big)[0] * 3 + (*big)[1] * 5 == 1'000'000'007ULL);
}
