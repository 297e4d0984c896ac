#include "doctest.h"

#include <cmath>
#include <random>

#include "pslab/arith.hpp"
#include "pslab/error.hpp"

using namespace pslab;

namespace {

bool naive_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("primes_up_to examples and classical counts") {
  const auto ten = primes_up_to(10);
  REQUIRE(ten.primes().size() == 4);
  CHECK(ten.primes()[0] == 2);
  CHECK(ten.primes()[3] == 7);
  CHECK(primes_up_to(1).primes().empty());
  CHECK(primes_up_to(0).primes().empty());
  CHECK(primes_up_to(1'000'000).primes().size() == 78498);
  CHECK(primes_up_to(10'000'000).primes().size() == 664579);
  CHECK_THROWS_AS(primes_up_to(1'000'000'001), GuardError);
}

TEST_CASE("segmented sieve matches trial division across segment borders") {
  const std::uint64_t limit = 3 * kSieveSegmentBytes * 2 + 17;
  const auto cache = primes_up_to(limit);
  std::size_t i = 0;
  for (std::uint64_t n = 0; n <= limit; ++n) {
    if (!naive_prime(n)) continue;
    REQUIRE(i < cache.primes().size());
    REQUIRE(cache.primes()[i] == n);
    ++i;
  }
  CHECK(i == cache.primes().size());
}

TEST_CASE("smallest-prime-factor table") {
  const auto cache = primes_up_to(100000);
  REQUIRE(cache.has_spf());
  for (std::uint64_t m = 2; m <= 100000; ++m) {
    const std::uint32_t p = cache.spf(m);
    REQUIRE(m % p == 0);
    REQUIRE(naive_prime(p));
    for (std::uint64_t d = 2; d < p; ++d) REQUIRE(m % d != 0);
  }
  CHECK(cache.contains(99991));
  CHECK_FALSE(cache.contains(99993));
  CHECK_FALSE(primes_up_to(kSpfLimit + 1).has_spf());
}

TEST_CASE("is_prime against trial division and known primes") {
  for (std::uint64_t n = 0; n < 20000; ++n) REQUIRE(is_prime(n) == naive_prime(n));
  CHECK(is_prime(999999999989ULL));
  CHECK(is_prime(18446744073709551557ULL));  // largest 64-bit prime
  CHECK_FALSE(is_prime(3215031751ULL));       // strong pseudoprime to 2, 3, 5, 7
  CHECK_FALSE(is_prime(3825123056546413051ULL));
  CHECK_FALSE(is_prime(561));
}

TEST_CASE("factorize examples") {
  const auto f12 = factorize(12);
  REQUIRE(f12.size() == 2);
  CHECK(f12.entries()[0] == FactorMap::Entry{2, 2});
  CHECK(f12.entries()[1] == FactorMap::Entry{3, 1});
  const auto f561 = factorize(561);
  REQUIRE(f561.size() == 3);
  CHECK(f561.entries()[0].first == 3);
  CHECK(f561.entries()[1].first == 11);
  CHECK(f561.entries()[2].first == 17);
  CHECK(factorize(1).empty());
  CHECK_THROWS_AS(factorize(0), ValidationError);
  CHECK_THROWS_AS(factorize(kFactorGuard + 1), GuardError);
  CHECK_THROWS_AS(factorize(BigInt("1000000000000000000000", 10)), GuardError);
  // Semiprime of two ~10^7 primes exercises rho.
  const auto big = factorize(9999991ULL * 9999973ULL);
  REQUIRE(big.size() == 2);
  CHECK(big.entries()[0].first == 9999973);
  CHECK(big.entries()[1].first == 9999991);
}

TEST_CASE("factorize recomposes and lists primes, per decade up to the guard") {
  std::mt19937_64 rng(2024);
  for (int decade = 1; decade <= 14; ++decade) {
    const auto lo = static_cast<std::uint64_t>(std::pow(10.0, decade - 1));
    const auto hi = static_cast<std::uint64_t>(std::pow(10.0, decade));
    const int reps = decade <= 12 ? 10000 : 2000;
    for (int i = 0; i < reps; ++i) {
      const std::uint64_t m = lo + rng() % (hi - lo + 1);
      const auto f = factorize(m);
      REQUIRE(f.value() == BigInt(std::to_string(m)));
      std::uint64_t prev = 0;
      for (const auto& [p, e] : f.entries()) {
        REQUIRE(p > prev);
        REQUIRE(e >= 1);
        REQUIRE(is_prime(p));
        prev = p;
      }
    }
  }
}

TEST_CASE("factorize with a cache agrees with the plain path") {
  const auto cache = primes_up_to(200000);
  for (std::uint64_t m = 1; m <= 200000; m += 3) REQUIRE(factorize(m, cache) == factorize(m));
}

TEST_CASE("largest_prime_factor") {
  CHECK(largest_prime_factor(8) == 2);
  CHECK(largest_prime_factor(561) == 17);
  CHECK(largest_prime_factor(999999999989ULL) == 999999999989ULL);
  CHECK_THROWS_AS(largest_prime_factor(1), ValidationError);
  std::mt19937_64 rng(5);
  const auto cache = primes_up_to(100000);
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t m = 2 + rng() % 100000000;
    const std::uint64_t p = cache.primes()[rng() % cache.primes().size()];
    REQUIRE(largest_prime_factor(m * p) == std::max(largest_prime_factor(m), p));
  }
}

TEST_CASE("is_squarefree") {
  CHECK(is_squarefree(10));
  CHECK_FALSE(is_squarefree(8));
  CHECK(is_squarefree(999999999989ULL));
  CHECK(is_squarefree(1));
  CHECK_FALSE(is_squarefree(BigInt(18)));
}

TEST_CASE("mobius") {
  const auto mu = mobius_up_to(10000);
  CHECK(mu[1] == 1);
  CHECK(mu[2] == -1);
  CHECK(mu[4] == 0);
  CHECK(mu[30] == -1);
  double s = 0;
  for (std::uint64_t d = 1; d <= 10000; ++d) s += mu[d] / (static_cast<double>(d) * d);
  CHECK(s == doctest::Approx(0.60793).epsilon(1e-4));
  std::uint64_t abs_sum = 0, squarefree = 0;
  for (std::uint64_t d = 1; d <= 10000; ++d) {
    abs_sum += mu[d] != 0;
    squarefree += is_squarefree(d);
  }
  CHECK(abs_sum == squarefree);
  CHECK_THROWS_AS(mobius_up_to(100'000'001), GuardError);
}

TEST_CASE("euler_phi") {
  CHECK(euler_phi(1) == 1);
  CHECK(euler_phi(3) == 2);
  CHECK(euler_phi(4) == 2);
  CHECK(euler_phi(7) == 6);
  CHECK(euler_phi(12) == 4);
  CHECK(euler_phi(97) == 96);
}
