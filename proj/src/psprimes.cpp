#include "pslab/psprimes.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "pslab/error.hpp"

namespace pslab {

namespace {

bool in_class(std::uint64_t p, std::uint64_t d, std::uint64_t r) { return p % d == r; }

std::uint64_t reduce(std::int64_t a, std::uint64_t d) {
  const auto sd = static_cast<std::int64_t>(d);
  return static_cast<std::uint64_t>(((a % sd) + sd) % sd);
}

void check_progression(std::uint64_t x, std::uint64_t d, std::int64_t a) {
  if (d < 1) throw ValidationError("modulus d must be >= 1");
  if (std::gcd(static_cast<std::uint64_t>(a < 0 ? -a : a), d) != 1) {
    throw ValidationError("residue a must be coprime to d");
  }
  if (x > kPrimeCountGuard) throw GuardError("prime counts are guarded at x <= 10^9");
}

const SieveCache& require_cover(const SieveCache& primes, std::uint64_t x) {
  if (primes.limit() < x) throw ValidationError("sieve cache does not reach x");
  return primes;
}

}  // namespace

void ApQuery::validate() const {
  if (x < 2) throw ValidationError("x must be >= 2");
  check_progression(x, d, a);
}

std::uint64_t ApQuery::residue() const { return reduce(a, d); }

std::uint64_t pi_ap(std::uint64_t x, std::uint64_t d, std::int64_t a, const SieveCache& primes) {
  check_progression(x, d, a);
  const std::uint64_t r = reduce(a, d);
  std::uint64_t count = 0;
  for (std::uint32_t p : require_cover(primes, x).primes()) {
    if (p > x) break;
    if (in_class(p, d, r)) ++count;
  }
  return count;
}

std::uint64_t pi_ap(std::uint64_t x, std::uint64_t d, std::int64_t a) {
  check_progression(x, d, a);
  return pi_ap(x, d, a, primes_up_to(x));
}

double theta_ap(std::uint64_t x, std::uint64_t d, std::int64_t a, const SieveCache& primes) {
  check_progression(x, d, a);
  const std::uint64_t r = reduce(a, d);
  CompensatedSum<long double> s;
  for (std::uint32_t p : require_cover(primes, x).primes()) {
    if (p > x) break;
    if (in_class(p, d, r)) s.add(std::log(static_cast<long double>(p)));
  }
  return static_cast<double>(s.value());
}

double theta_ap(std::uint64_t x, std::uint64_t d, std::int64_t a) {
  check_progression(x, d, a);
  return theta_ap(x, d, a, primes_up_to(x));
}

std::vector<std::uint64_t> ps_primes_ap(const ApQuery& q, const Executor& exec) {
  q.validate();
  const std::uint64_t r = q.residue();
  const PreimageRange pre = ps_preimage_range(1, q.x, q.c);
  auto parts = exec.map_chunks(pre.first, pre.last + 1, [&](std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint64_t> found;
    for (std::uint64_t n = lo; n < hi; ++n) {
      const std::uint64_t k = floor_pow(n, q.c);
      if (in_class(k, q.d, r) && is_prime(k)) found.push_back(k);
    }
    return found;
  });
  std::vector<std::uint64_t> out;
  for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  return out;
}

std::uint64_t pi_c_ap(const ApQuery& q, const Executor& exec) { return ps_primes_ap(q, exec).size(); }

double vartheta_c_ap(const ApQuery& q, const Executor& exec) {
  CompensatedSum<long double> s;
  for (std::uint64_t p : ps_primes_ap(q, exec)) s.add(std::log(static_cast<long double>(p)));
  return static_cast<double>(s.value());
}

MainTermRoutes thm9_main_term_routes(const ApQuery& q, const SieveCache& primes) {
  q.validate();
  const std::uint64_t r = q.residue();
  const long double gamma = q.c.gamma();
  const long double e = gamma - 1.0L;

  std::vector<std::uint64_t> ps;
  for (std::uint32_t p : require_cover(primes, q.x).primes()) {
    if (p > q.x) break;
    if (in_class(p, q.d, r)) ps.push_back(p);
  }
  if (ps.empty()) return {0.0L, 0.0L};

  // Route A: pi(u) = i on [p_i, p_{i+1}), so
  // gamma (1-gamma) int u^{gamma-2} pi(u) du = -gamma sum_i i (p_{i+1}^{e} - p_i^{e}).
  CompensatedSum<long double> integral;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const long double left = std::pow(static_cast<long double>(ps[i]), e);
    const long double right = std::pow(static_cast<long double>(i + 1 < ps.size() ? ps[i + 1] : q.x), e);
    integral.add(static_cast<long double>(i + 1) * (right - left));
  }
  const long double boundary =
      gamma * std::pow(static_cast<long double>(q.x), e) * static_cast<long double>(ps.size());
  const long double route_a = boundary - gamma * integral.value();

  // Route B: the telescoped closed form.
  CompensatedSum<long double> closed;
  for (std::uint64_t p : ps) closed.add(std::pow(static_cast<long double>(p), e));
  return {route_a, gamma * closed.value()};
}

double thm9_main_term(const ApQuery& q, const SieveCache& primes) {
  const MainTermRoutes routes = thm9_main_term_routes(q, primes);
  const long double scale = std::max(std::abs(routes.closed_form), std::abs(routes.step_integral));
  if (std::abs(routes.step_integral - routes.closed_form) > kRouteTolerance * scale) {
    std::ostringstream os;
    os.precision(20);
    os << "main-term routes disagree: step integral " << routes.step_integral << " vs closed form "
       << routes.closed_form;
    throw RouteDisagreement(os.str());
  }
  return static_cast<double>(routes.closed_form);
}

double thm9_main_term(const ApQuery& q) {
  q.validate();
  return thm9_main_term(q, primes_up_to(q.x));
}

double brun_titchmarsh_report(const ApQuery& q, const Executor& exec) {
  const auto count = static_cast<double>(pi_c_ap(q, exec));
  const auto x = static_cast<double>(q.x);
  return count * static_cast<double>(euler_phi(q.d)) * std::log(x) /
         std::pow(x, static_cast<double>(q.c.gamma()));
}

}  // namespace pslab
