#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "pslab/error.hpp"
#include "pslab/sawtooth.hpp"

using namespace pslab;

namespace {

constexpr double kSlack = 1e-12;

// Worst value of |psi - approx| - majorant over a uniform grid plus probes
// within 1e-9 of the integers.
double worst_gap(const VaalerKernel& v, std::uint64_t grid) {
  double worst = -1.0;
  auto probe = [&](double t) {
    worst = std::max(worst, std::abs(psi(t) - v.approx(t)) - v.majorant(t));
  };
  for (std::uint64_t i = 0; i < grid; ++i) probe(static_cast<double>(i) / static_cast<double>(grid));
  for (double t : {1e-9, 1.0 - 1e-9, -1e-9, 1e-12, 0.5 - 1e-9, 0.5 + 1e-9}) probe(t);
  return worst;
}

}  // namespace

TEST_CASE("psi examples") {
  CHECK(psi(0.25) == -0.25);
  CHECK(psi(0.0) == -0.5);
  CHECK(psi(1.75) == 0.25);
  CHECK(psi(-0.25) == 0.25);
  for (double t : {0.125, 0.375, 2.5, -7.125, 1234.0625}) CHECK(psi(t + 1.0) == psi(t));
}

TEST_CASE("Vaaler coefficients obey their size bounds") {
  for (std::uint64_t H : {1ULL, 2ULL, 10ULL, 100ULL, 1000ULL}) {
    const VaalerKernel v(H);
    for (std::int64_t h = 1; h <= static_cast<std::int64_t>(H); ++h) {
      CHECK(std::abs(v.c(h)) <= 1.0 / (std::numbers::pi * h) + kSlack);
      CHECK(std::abs(v.c(-h)) <= 1.0 / (std::numbers::pi * h) + kSlack);
      CHECK(v.c(-h) == -v.c(h));
    }
    for (std::int64_t h = -static_cast<std::int64_t>(H); h <= static_cast<std::int64_t>(H); ++h) {
      CHECK(v.d(h) >= 0.0);
      CHECK(v.d(h) <= 1.0 / (H + 1) + kSlack);
    }
  }
  CHECK_THROWS_AS(VaalerKernel(0), GuardError);
  CHECK_THROWS_AS(VaalerKernel(kVaalerMaxH + 1), GuardError);
}

TEST_CASE("approx equals the complex coefficient sum") {
  const VaalerKernel v(7);
  for (double t : {0.0, 0.1, 0.37, 0.5, 0.91}) {
    std::complex<double> s = 0;
    for (std::int64_t h = 1; h <= 7; ++h) {
      s += v.c(h) * unit_phase(t * h) + v.c(-h) * unit_phase(-t * h);
    }
    CHECK(std::abs(s.imag()) < 1e-12);
    CHECK(s.real() == doctest::Approx(v.approx(t)).epsilon(1e-12));
  }
}

TEST_CASE("Vaaler inequality holds on a 10^5-point grid") {
  for (std::uint64_t H : {1ULL, 10ULL, 100ULL}) {
    CAPTURE(H);
    CHECK(worst_gap(VaalerKernel(H), 100000) <= kSlack);
  }
}

TEST_CASE("majorant is nonnegative and dominates at the jump") {
  for (std::uint64_t H : {1ULL, 5ULL, 50ULL}) {
    const VaalerKernel v(H);
    for (int i = 0; i < 10000; ++i) CHECK(v.majorant(i / 10000.0) >= -kSlack);
    double total = 0;
    for (std::int64_t h = -static_cast<std::int64_t>(H); h <= static_cast<std::int64_t>(H); ++h) total += v.d(h);
    CHECK(total + kSlack >= std::abs(psi(0.0) - v.approx(0.0)));
  }
}

TEST_CASE("discrepancy_lhs examples") {
  const std::vector<double> zeros(10, 0.0);
  CHECK(discrepancy_lhs(zeros, 0.5) == 5.0);
  const std::size_t K = 97;
  std::vector<double> grid(K);
  for (std::size_t j = 0; j < K; ++j) grid[j] = static_cast<double>(j) / K;
  for (std::size_t m = 1; m < K; ++m) CHECK(std::abs(discrepancy_lhs(grid, static_cast<double>(m) / K)) <= 1.0 + 1e-9);
  std::vector<double> r2(10000);
  for (std::size_t k = 1; k <= r2.size(); ++k) {
    const long double v = k * std::sqrt(2.0L);
    r2[k - 1] = static_cast<double>(v - std::floor(v));
  }
  CHECK(std::abs(discrepancy_lhs(r2, 0.3)) < 50.0);
  CHECK_THROWS_AS(discrepancy_lhs(zeros, 0.0), ValidationError);
  CHECK_THROWS_AS(discrepancy_lhs(zeros, 1.0), ValidationError);
  CHECK_THROWS_AS(discrepancy_lhs(std::vector<double>{}, 0.5), ValidationError);
}

TEST_CASE("erdos_turan_rhs examples") {
  const std::vector<double> zeros(20, 0.0);
  CHECK(erdos_turan_rhs(zeros, 5) >= 20.0);
  const std::vector<double> single{0.123};
  for (std::uint64_t H : {1ULL, 4ULL, 30ULL}) {
    double harmonic = 0;
    for (std::uint64_t h = 1; h <= H; ++h) harmonic += 1.0 / h;
    CHECK(erdos_turan_rhs(single, H) == doctest::Approx(1.0 / (H + 1) + 3 * harmonic));
  }
}

TEST_CASE("explicit Erdos-Turan holds for {k sqrt 2} and a random sequence") {
  std::vector<double> r2(10000);
  for (std::size_t k = 1; k <= r2.size(); ++k) {
    const long double v = k * std::sqrt(2.0L);
    r2[k - 1] = static_cast<double>(v - std::floor(v));
  }
  std::vector<double> lcg(3000);
  std::uint64_t s = 12345;
  for (auto& t : lcg) {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    t = static_cast<double>(s >> 11) / 9007199254740992.0;
  }
  for (const auto* pts : {&r2, &lcg}) {
    for (std::uint64_t H : {10ULL, 100ULL}) {
      const double rhs = erdos_turan_rhs(*pts, H);
      for (int i = 1; i <= 100; ++i) {
        const double beta = i / 101.0;
        CHECK(std::abs(discrepancy_lhs(*pts, beta)) <= rhs);
      }
    }
  }
}
