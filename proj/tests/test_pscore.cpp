#include "doctest.h"

#include <cmath>
#include <random>

#include "pslab/error.hpp"
#include "pslab/pscore.hpp"

using namespace pslab;

namespace {

// Independent oracle: GMP's own root.
BigInt gmp_root(const BigInt& m, unsigned long q) {
  BigInt r;
  mpz_root(r.get_mpz_t(), m.get_mpz_t(), q);
  return r;
}

BigInt gmp_floor_pow(std::uint64_t n, const ExponentC& c) {
  BigInt np;
  mpz_ui_pow_ui(np.get_mpz_t(), n, c.p());
  return gmp_root(np, c.q());
}

const std::vector<ExponentC>& exponent_corpus() {
  static const std::vector<ExponentC> cs = {
      {3, 2}, {11, 10}, {6, 5}, {17, 10}, {21, 20}, {1001, 1000}, {5, 3}, {7, 4}, {243, 205}, {149, 87}, {5, 2}};
  return cs;
}

}  // namespace

TEST_CASE("ExponentC validation and parsing") {
  const ExponentC c = ExponentC::parse("3/2");
  CHECK(c.p() == 3);
  CHECK(c.q() == 2);
  CHECK(c.str() == "3/2");
  CHECK(c.gamma() == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(ExponentC(4, 2), ValidationError);   // not reduced
  CHECK_THROWS_AS(ExponentC(3, 1), ValidationError);   // integer
  CHECK_THROWS_AS(ExponentC(2, 3), ValidationError);   // c < 1
  CHECK_THROWS_AS(ExponentC::parse("1.5"), ValidationError);
  CHECK_THROWS_AS(ExponentC::parse("abc"), ValidationError);
  CHECK_THROWS_AS(ExponentC::parse("3/0"), ValidationError);
  try {
    (void)ExponentC::parse("1.5");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("p/q") != std::string::npos);
  }
}

TEST_CASE("integer_root examples") {
  CHECK(integer_root(BigInt(1000), 2) == 31);
  CHECK(integer_root(BigInt(0), 5) == 0);
  BigInt two64;
  mpz_ui_pow_ui(two64.get_mpz_t(), 2, 64);
  CHECK(integer_root(two64, 4) == 65536);
  CHECK(integer_root(std::uint64_t{1000}, 2) == 31);
  CHECK(integer_root(std::uint64_t{0}, 3) == 0);
  CHECK(integer_root(~std::uint64_t{0}, 2) == 4294967295ULL);
}

TEST_CASE("integer_root matches mpz_root on random and boundary inputs") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const unsigned q = 1 + static_cast<unsigned>(rng() % 9);
    BigInt m;
    const unsigned bits = 1 + static_cast<unsigned>(rng() % 400);
    m = 0;
    for (unsigned b = 0; b < bits; b += 64) {
      m <<= 64;
      m += BigInt(std::to_string(rng()));
    }
    REQUIRE(integer_root(m, q) == gmp_root(m, q));
    // Perfect powers and their neighbours.
    BigInt r = BigInt(std::to_string(rng() % 1000000 + 2)), rq;
    mpz_pow_ui(rq.get_mpz_t(), r.get_mpz_t(), q);
    REQUIRE(integer_root(rq, q) == r);
    REQUIRE(integer_root(BigInt(rq - 1), q) == r - 1);
    if (q > 1) REQUIRE(integer_root(BigInt(rq + 1), q) == r);
  }
}

TEST_CASE("floor_pow examples") {
  const ExponentC c(3, 2);
  CHECK(floor_pow(std::uint64_t{2}, c) == 2);
  CHECK(floor_pow(std::uint64_t{10}, c) == 31);
  for (const auto& e : exponent_corpus()) CHECK(floor_pow(std::uint64_t{1}, e) == 1);
  CHECK(floor_pow(BigInt(10), c) == 31);
  // Far beyond 64 bits.
  BigInt n("1000000000000000000000000", 10);
  BigInt expect("1000000000000000000000000000000000000", 10);
  CHECK(floor_pow(n, c) == expect);
}

TEST_CASE("floor_pow agrees with mpz_root across the corpus and is monotone") {
  for (const auto& c : exponent_corpus()) {
    std::uint64_t prev = 0;
    const std::uint64_t top = c.value() > 2 ? 20000 : 100000;
    for (std::uint64_t n = 1; n <= top; n += (n < 5000 ? 1 : 7)) {
      const std::uint64_t v = floor_pow(n, c);
      REQUIRE(BigInt(std::to_string(v)) == gmp_floor_pow(n, c));
      REQUIRE(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("floor_pow agrees with long double away from integers") {
  for (const auto& c : exponent_corpus()) {
    for (std::uint64_t n = 1; n <= 20000; ++n) {
      const long double f = std::pow(static_cast<long double>(n), c.value());
      const long double frac = f - std::floor(f);
      if (frac < 1e-6L || frac > 1 - 1e-6L || f > 1e15L) continue;
      REQUIRE(floor_pow(n, c) == static_cast<std::uint64_t>(std::floor(f)));
    }
  }
}

TEST_CASE("machine-word floor_pow guards overflow") {
  CHECK_THROWS_AS(floor_pow(std::uint64_t{1} << 42, ExponentC(3, 2)), GuardError);
}

TEST_CASE("is_ps_value examples") {
  const ExponentC c(3, 2);
  auto w = is_ps_value(BigInt(5), c);
  REQUIRE(w.is_value());
  CHECK(*w.n == 3);
  CHECK_FALSE(is_ps_value(BigInt(3), c).is_value());
  for (const auto& e : exponent_corpus()) {
    auto one = is_ps_value(BigInt(1), e);
    REQUIRE(one.is_value());
    CHECK(*one.n == 1);
  }
  CHECK(ps_preimage(5, c) == std::optional<std::uint64_t>(3));
  CHECK_FALSE(ps_preimage(3, c).has_value());
}

TEST_CASE("is_ps_value witness satisfies the exact bracket") {
  for (const auto& c : exponent_corpus()) {
    for (std::uint64_t k = 1; k <= 3000; ++k) {
      const auto w = is_ps_value(BigInt(std::to_string(k)), c);
      if (!w.is_value()) continue;
      BigInt kq, np, k1q;
      mpz_ui_pow_ui(kq.get_mpz_t(), k, c.q());
      mpz_ui_pow_ui(k1q.get_mpz_t(), k + 1, c.q());
      mpz_pow_ui(np.get_mpz_t(), w.n->get_mpz_t(), c.p());
      REQUIRE(kq <= np);
      REQUIRE(np < k1q);
    }
  }
}

TEST_CASE("round trip n -> floor_pow -> is_ps_value") {
  for (const auto& c : exponent_corpus()) {
    const std::uint64_t top = c.value() > 2 ? 10000 : 100000;
    for (std::uint64_t n = 1; n <= top; ++n) {
      const std::uint64_t v = floor_pow(n, c);
      const auto pre = ps_preimage(v, c);
      REQUIRE(pre.has_value());
      REQUIRE(*pre == n);
    }
  }
}

TEST_CASE("ps_values_in examples") {
  const ExponentC c(3, 2);
  const auto vals = ps_values_in(BigInt(1), BigInt(12), c);
  REQUIRE(vals.size() == 5);
  const long ks[] = {1, 2, 5, 8, 11};
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(vals[i].k == ks[i]);
    CHECK(*vals[i].n == static_cast<long>(i + 1));
  }
  CHECK(ps_values_in(BigInt(3), BigInt(4), c).empty());
  for (long k = 1; k <= 200; ++k) {
    const auto single = ps_values_in(BigInt(k), BigInt(k), c);
    CHECK(single.size() == (is_ps_value(BigInt(k), c).is_value() ? 1u : 0u));
  }
}

TEST_CASE("ps_values_in equals filtering is_ps_value") {
  const ExponentC c(6, 5);
  const auto vals = ps_values_in(BigInt(100), BigInt(5000), c);
  std::size_t i = 0;
  for (long k = 100; k <= 5000; ++k) {
    const auto w = is_ps_value(BigInt(k), c);
    if (!w.is_value()) continue;
    REQUIRE(i < vals.size());
    CHECK(vals[i].k == k);
    CHECK(*vals[i].n == *w.n);
    ++i;
  }
  CHECK(i == vals.size());
}

TEST_CASE("count identity: n <= x against PS values up to floor(x^c)") {
  for (const auto& c : exponent_corpus()) {
    for (std::uint64_t x : {1ULL, 10ULL, 777ULL, 5000ULL}) {
      const std::uint64_t top = floor_pow(x, c);
      CHECK(ps_preimage_range(1, top, c).size() == x);
    }
  }
}

TEST_CASE("lemma2 decomposition") {
  const ExponentC c(3, 2);
  const Weight one = [](std::uint64_t) { return 1.0; };
  const Weight zero = [](std::uint64_t) { return 0.0; };
  const auto t = lemma2_decomposition(10000, c, one);
  CHECK(std::abs(t.exact - t.main - t.correction) <= 2.0);
  const auto z = lemma2_decomposition(1000, c, zero);
  CHECK(z.exact == 0.0);
  CHECK(z.main == 0.0);
  CHECK(z.correction == 0.0);
  CHECK(lemma2_decomposition(10, c, one).exact == 4.0);
  CHECK_THROWS_AS(lemma2_decomposition(0, c, one), ValidationError);
  CHECK_THROWS_AS(lemma2_decomposition(200'000'000, c, one), GuardError);
}

TEST_CASE("lemma2 is deterministic under thread count") {
  const ExponentC c(11, 10);
  const Weight w = [](std::uint64_t k) { return std::sin(static_cast<double>(k)); };
  const auto a = lemma2_decomposition(300000, c, w, Executor(1));
  const auto b = lemma2_decomposition(300000, c, w, Executor(4));
  CHECK(a.main == b.main);
  CHECK(a.correction == b.correction);
  CHECK(a.exact == b.exact);
}
