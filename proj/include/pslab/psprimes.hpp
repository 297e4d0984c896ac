#pragma once

// Piatetski-Shapiro primes in arithmetic progressions.

#include <cstdint>
#include <vector>

#include "pslab/arith.hpp"
#include "pslab/parallel.hpp"
#include "pslab/pscore.hpp"

namespace pslab {

inline constexpr std::uint64_t kPrimeCountGuard = 1'000'000'000;

/// Primes p <= x with p = a (mod d), filtered by membership in floor(n^c).
struct ApQuery {
  std::uint64_t x;
  std::uint64_t d;
  std::int64_t a;
  ExponentC c;

  /// Throws ValidationError unless x >= 2, d >= 1, gcd(a, d) = 1;
  /// GuardError above x = 10^9.
  void validate() const;
  /// a reduced into [0, d).
  std::uint64_t residue() const;
};

std::uint64_t pi_ap(std::uint64_t x, std::uint64_t d, std::int64_t a, const SieveCache& primes);
std::uint64_t pi_ap(std::uint64_t x, std::uint64_t d, std::int64_t a);
double theta_ap(std::uint64_t x, std::uint64_t d, std::int64_t a, const SieveCache& primes);
double theta_ap(std::uint64_t x, std::uint64_t d, std::int64_t a);

/// The PS primes of the query, ascending.
std::vector<std::uint64_t> ps_primes_ap(const ApQuery& q, const Executor& exec = Executor::serial());
std::uint64_t pi_c_ap(const ApQuery& q, const Executor& exec = Executor::serial());
double vartheta_c_ap(const ApQuery& q, const Executor& exec = Executor::serial());

/// The main term evaluated two ways.
struct MainTermRoutes {
  /// gamma x^{gamma-1} pi(x) + gamma (1-gamma) int_2^x u^{gamma-2} pi(u) du,
  /// with the integral taken exactly over the steps of pi(u; d, a).
  long double step_integral;
  /// gamma * sum_{p <= x, p = a (d)} p^{gamma-1}.
  long double closed_form;
};

inline constexpr long double kRouteTolerance = 1e-9L;

MainTermRoutes thm9_main_term_routes(const ApQuery& q, const SieveCache& primes);
/// Returns the closed form after checking both routes agree to 1e-9
/// relative; throws RouteDisagreement otherwise.
double thm9_main_term(const ApQuery& q, const SieveCache& primes);
double thm9_main_term(const ApQuery& q);

/// pi_c(x; d, a) phi(d) log x / x^gamma: the empirical Brun-Titchmarsh constant.
double brun_titchmarsh_report(const ApQuery& q, const Executor& exec = Executor::serial());

}  // namespace pslab
