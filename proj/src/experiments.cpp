#include "pslab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "pslab/error.hpp"
#include "pslab/exppairs.hpp"

namespace pslab {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ms(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

bool c_below(const ExponentC& c, long num, long den) {
  // p/q < num/den, exactly.
  return static_cast<unsigned __int128>(c.p()) * static_cast<unsigned long>(den) <
         static_cast<unsigned __int128>(c.q()) * static_cast<unsigned long>(num);
}

void guard_x(std::uint64_t x, std::uint64_t limit, const char* what) {
  if (x < 1) throw ValidationError(std::string(what) + ": x must be >= 1");
  if (x > limit) throw GuardError(std::string(what) + ": x exceeds " + std::to_string(limit));
}

ExperimentReport make_report(std::string name, std::uint64_t x, const ExponentC& c) {
  ExperimentReport r;
  r.experiment = std::move(name);
  r.params["x"] = x;
  r.params["c"] = c.str();
  return r;
}

// Per-chunk statistics gathered from one factorization of each floor(n^c).
struct FactorStats {
  std::uint64_t squarefree = 0;
  CompensatedSum<long double> log_radical;
  std::uint64_t smooth = 0;
  std::uint64_t exceed = 0;
  std::vector<double> exponents;  // log P / log n for n >= 2

  void merge(FactorStats& other) {
    squarefree += other.squarefree;
    log_radical.add(other.log_radical);
    smooth += other.smooth;
    exceed += other.exceed;
    exponents.insert(exponents.end(), other.exponents.begin(), other.exponents.end());
  }
};

struct FactorRequest {
  bool squarefree = false;
  bool chebyshev = false;
  bool smooth = false;
  double smooth_eps = 0.0;
  bool exceed = false;
  double exceed_exponent = 0.0;  // theta - eps
  bool deciles = false;
};

FactorStats factor_pass(std::uint64_t x, const ExponentC& c, const FactorRequest& req,
                        const Executor& exec) {
  return exec.map_reduce(
      1, x + 1, FactorStats{},
      [&](std::uint64_t lo, std::uint64_t hi) {
        FactorStats s;
        for (std::uint64_t n = lo; n < hi; ++n) {
          const std::uint64_t m = floor_pow(n, c);
          const FactorMap f = factorize(m);
          if (req.squarefree && f.squarefree()) ++s.squarefree;
          if (req.chebyshev) {
            for (const auto& [p, e] : f.entries()) s.log_radical.add(std::log(static_cast<long double>(p)));
          }
          if (n < 2) continue;
          const long double log_n = std::log(static_cast<long double>(n));
          const long double log_p = std::log(static_cast<long double>(f.largest()));
          if (req.smooth && log_p <= req.smooth_eps * log_n) ++s.smooth;
          if (req.exceed && log_p > req.exceed_exponent * log_n) ++s.exceed;
          if (req.deciles) s.exponents.push_back(static_cast<double>(log_p / log_n));
        }
        return s;
      },
      [](FactorStats& acc, FactorStats& part) { acc.merge(part); });
}

nlohmann::ordered_json deciles_of(std::vector<double> v) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  if (v.empty()) return out;
  std::sort(v.begin(), v.end());
  for (int k = 1; k <= 9; ++k) {
    const auto rank = static_cast<std::size_t>(std::ceil(k * static_cast<double>(v.size()) / 10.0));
    out.push_back(v[std::max<std::size_t>(rank, 1) - 1]);
  }
  return out;
}

void check_eps(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw ValidationError("smooth_count: eps must lie in (0, 1]");
}

ExperimentReport squarefree_report(std::uint64_t x, const ExponentC& c, const FactorStats& s) {
  ExperimentReport r = make_report("squarefree", x, c);
  r.observed = static_cast<double>(s.squarefree);
  r.reference = 6.0 / (std::numbers::pi * std::numbers::pi) * static_cast<double>(x);
  if (!c_below(c, 149, 87)) r.warnings.push_back("c lies outside (1, 149/87)");
  r.set_ratio();
  return r;
}

ExperimentReport chebyshev_report(std::uint64_t x, const ExponentC& c, const FactorStats& s) {
  ExperimentReport r = make_report("chebyshev", x, c);
  r.observed = static_cast<double>(s.log_radical.value());
  const auto xd = static_cast<double>(x);
  r.reference = static_cast<double>(c.value()) * xd * (std::log(xd) - 1.0);
  r.extra["reference_form"] = "c*x*(log x - 1)";
  if (!c_below(c, 149, 87)) r.warnings.push_back("c lies outside (1, 149/87)");
  r.set_ratio();
  return r;
}

ExperimentReport smooth_report(std::uint64_t x, const ExponentC& c, double eps, const FactorStats& s) {
  ExperimentReport r = make_report("smooth", x, c);
  r.params["eps"] = eps;
  r.observed = static_cast<double>(s.smooth);
  r.reference = std::pow(static_cast<double>(x), 1.0 - eps);
  if (!c_below(c, 24979, 20803)) r.warnings.push_back("c lies outside (1, 24979/20803)");
  r.set_ratio();
  return r;
}

ExperimentReport exceed_report(std::uint64_t x, const ExponentC& c, double theta, double eps,
                               FactorStats& s) {
  ExperimentReport r = make_report("large-pf", x, c);
  r.params["theta"] = theta;
  r.params["eps"] = eps;
  r.observed = static_cast<double>(s.exceed);
  r.reference = static_cast<double>(x);
  r.extra["deciles"] = deciles_of(std::move(s.exponents));
  r.set_ratio();
  return r;
}

}  // namespace

ExperimentReport squarefree_density(std::uint64_t x, const ExponentC& c, const Executor& exec) {
  guard_x(x, kSquarefreeGuard, "squarefree_density");
  const auto start = Clock::now();
  FactorRequest req;
  req.squarefree = true;
  ExperimentReport r = squarefree_report(x, c, factor_pass(x, c, req, exec));
  r.runtime_ms = elapsed_ms(start);
  return r;
}

ExperimentReport chebyshev_sum(std::uint64_t x, const ExponentC& c, const Executor& exec) {
  guard_x(x, kFactorStatsGuard, "chebyshev_sum");
  const auto start = Clock::now();
  FactorRequest req;
  req.chebyshev = true;
  ExperimentReport r = chebyshev_report(x, c, factor_pass(x, c, req, exec));
  r.runtime_ms = elapsed_ms(start);
  return r;
}

ExperimentReport smooth_count(std::uint64_t x, const ExponentC& c, double eps, const Executor& exec) {
  guard_x(x, kFactorStatsGuard, "smooth_count");
  check_eps(eps);
  const auto start = Clock::now();
  FactorRequest req;
  req.smooth = true;
  req.smooth_eps = eps;
  ExperimentReport r = smooth_report(x, c, eps, factor_pass(x, c, req, exec));
  r.runtime_ms = elapsed_ms(start);
  return r;
}

ExperimentReport large_pf_exceed(std::uint64_t x, const ExponentC& c, double theta, double eps,
                                 const Executor& exec) {
  guard_x(x, kFactorStatsGuard, "large_pf_exceed");
  const auto start = Clock::now();
  FactorRequest req;
  req.exceed = true;
  req.exceed_exponent = theta - eps;
  req.deciles = true;
  FactorStats s = factor_pass(x, c, req, exec);
  ExperimentReport r = exceed_report(x, c, theta, eps, s);
  r.runtime_ms = elapsed_ms(start);
  return r;
}

std::vector<ExperimentReport> factor_suite(std::uint64_t x, const ExponentC& c, double smooth_eps,
                                           double theta, double theta_eps, const Executor& exec) {
  guard_x(x, kFactorStatsGuard, "factor_suite");
  check_eps(smooth_eps);
  const auto start = Clock::now();
  FactorRequest req{true, true, true, smooth_eps, true, theta - theta_eps, true};
  FactorStats s = factor_pass(x, c, req, exec);
  std::vector<ExperimentReport> out = {squarefree_report(x, c, s), chebyshev_report(x, c, s),
                                       smooth_report(x, c, smooth_eps, s),
                                       exceed_report(x, c, theta, theta_eps, s)};
  const std::int64_t ms = elapsed_ms(start);
  for (auto& r : out) r.runtime_ms = ms;
  return out;
}

std::uint64_t square_divisor_count(std::uint64_t x, const ExponentC& c, std::uint64_t d) {
  if (d < 1) throw ValidationError("square_divisor_count: d must be >= 1");
  const std::uint64_t d2 = d * d;
  const std::uint64_t top = floor_pow(x, c);
  std::uint64_t count = 0;
  if (top / d2 < x) {
    // Walk the multiples of d^2 up to floor(x^c); PS values there have preimages <= x.
    for (std::uint64_t k = d2; k <= top; k += d2) {
      if (ps_preimage(k, c)) ++count;
    }
  } else {
    for (std::uint64_t n = 1; n <= x; ++n) {
      if (floor_pow(n, c) % d2 == 0) ++count;
    }
  }
  return count;
}

SquareDivisorSums square_divisor_sum(std::uint64_t x, const ExponentC& c, std::uint64_t D,
                                     const Weight& z, const Executor& exec) {
  guard_x(x, kFactorStatsGuard, "square_divisor_sum");
  if (D < 1) throw ValidationError("square_divisor_sum: D must be >= 1");
  if (static_cast<long double>(D) > std::pow(static_cast<long double>(x), c.value() / 2)) {
    throw GuardError("square_divisor_sum: D exceeds x^(c/2)");
  }
  struct Partial {
    CompensatedSum<long double> lhs;
    CompensatedSum<long double> rhs;
  };
  const Partial p = exec.map_reduce(
      D + 1, 2 * D + 1, Partial{},
      [&](std::uint64_t lo, std::uint64_t hi) {
        Partial part;
        for (std::uint64_t d = lo; d < hi; ++d) {
          const double zd = z(d);
          if (std::abs(zd) > 2.0 * std::log(static_cast<double>(d)) + 1e-12) {
            throw ValidationError("square_divisor_sum: |z_d| must not exceed 2 log d");
          }
          if (zd == 0.0) continue;
          const auto dd = static_cast<long double>(d);
          part.lhs.add(zd * static_cast<long double>(square_divisor_count(x, c, d)));
          part.rhs.add(zd / (dd * dd));
        }
        return part;
      },
      [](Partial& acc, const Partial& part) {
        acc.lhs.add(part.lhs);
        acc.rhs.add(part.rhs);
      });
  return {static_cast<double>(p.lhs.value()),
          static_cast<double>(static_cast<long double>(x) * p.rhs.value())};
}

std::vector<std::uint64_t> residue_histogram(std::uint64_t N, const ExponentC& c, std::uint64_t q,
                                             const Executor& exec) {
  if (N < 1 || q < 1) throw ValidationError("residue_histogram: need N >= 1 and q >= 1");
  return exec.map_reduce(
      N + 1, 2 * N + 1, std::vector<std::uint64_t>(q, 0),
      [&](std::uint64_t lo, std::uint64_t hi) {
        std::vector<std::uint64_t> h(q, 0);
        for (std::uint64_t n = lo; n < hi; ++n) ++h[floor_pow(n, c) % q];
        return h;
      },
      [](std::vector<std::uint64_t>& acc, const std::vector<std::uint64_t>& h) {
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += h[i];
      });
}

namespace {

void check_residue_range(std::uint64_t N, const ExponentC& c, std::uint64_t q) {
  if (N < 1 || q < 1) throw ValidationError("residue_equidistribution: need N >= 1 and q >= 1");
  const long double range = std::pow(static_cast<long double>(N), (3.0L - c.value()) / 6.0L);
  if (static_cast<long double>(q) > range) {
    throw GuardError("residue_equidistribution: q exceeds N^((3-c)/6)");
  }
}

ExperimentReport residue_report(std::uint64_t N, const ExponentC& c, std::uint64_t q, std::uint64_t a,
                                const std::vector<std::uint64_t>& hist) {
  ExperimentReport r;
  r.experiment = "residue";
  r.params["N"] = N;
  r.params["c"] = c.str();
  r.params["q"] = q;
  r.params["a"] = a % q;
  r.observed = static_cast<double>(hist[a % q]);
  r.reference = static_cast<double>(N) / static_cast<double>(q);
  if (!(!c_below(c, 3, 2) && c_below(c, 2, 1)) || c.p() * 2 == c.q() * 3) {
    r.warnings.push_back("c lies outside (3/2, 2)");
  }
  r.set_ratio();
  return r;
}

}  // namespace

ExperimentReport residue_equidistribution(std::uint64_t N, const ExponentC& c, std::uint64_t q,
                                          std::uint64_t a, const Executor& exec) {
  check_residue_range(N, c, q);
  const auto start = Clock::now();
  const auto hist = residue_histogram(N, c, q, exec);
  ExperimentReport r = residue_report(N, c, q, a, hist);
  r.extra["histogram"] = hist;
  r.runtime_ms = elapsed_ms(start);
  return r;
}

std::vector<ExperimentReport> residue_equidistribution_all(std::uint64_t N, const ExponentC& c,
                                                           std::uint64_t q, const Executor& exec) {
  check_residue_range(N, c, q);
  const auto start = Clock::now();
  const auto hist = residue_histogram(N, c, q, exec);
  std::vector<ExperimentReport> out;
  for (std::uint64_t a = 0; a < q; ++a) out.push_back(residue_report(N, c, q, a, hist));
  const std::int64_t ms = elapsed_ms(start);
  for (auto& r : out) r.runtime_ms = ms;
  return out;
}

ConvolutionBox convolution_box(std::uint64_t x, const ExponentC& c) {
  const auto xd = static_cast<double>(x);
  const double e = kConvolutionEpsilon;
  return {std::pow(xd, static_cast<double>(c.value()) - 1.0 + 6.0 * e), std::pow(xd, 1.0 - 6.0 * e) / 5.0};
}

double convolution_count(std::uint64_t x, const ExponentC& c, const Weight& a, const Executor& exec) {
  guard_x(x, kConvolutionGuard, "convolution_count");
  const ConvolutionBox box = convolution_box(x, c);
  const auto k_lo = static_cast<std::uint64_t>(std::floor(box.K)) + 1;
  const auto k_hi = static_cast<std::uint64_t>(std::floor(2 * box.K));
  const auto l_lo = static_cast<std::uint64_t>(std::floor(box.L)) + 1;
  const auto l_hi = static_cast<std::uint64_t>(std::floor(2 * box.L));
  if (k_hi < k_lo || l_hi < l_lo) return 0.0;
  const long double pairs = static_cast<long double>(k_hi - k_lo + 1) * static_cast<long double>(l_hi - l_lo + 1);
  if (pairs > static_cast<long double>(kConvolutionPairGuard)) {
    throw GuardError("convolution_count: more than 10^8 (k, l) pairs");
  }
  std::vector<double> al(l_hi - l_lo + 1);
  for (std::uint64_t l = l_lo; l <= l_hi; ++l) al[l - l_lo] = a(l);
  const auto total = exec.map_reduce(
      k_lo, k_hi + 1, CompensatedSum<long double>{},
      [&](std::uint64_t lo, std::uint64_t hi) {
        CompensatedSum<long double> s;
        for (std::uint64_t k = lo; k < hi; ++k) {
          const double ak = a(k);
          if (ak == 0.0) continue;
          for (std::uint64_t l = l_lo; l <= l_hi; ++l) {
            const double w = al[l - l_lo];
            if (w == 0.0) continue;
            const std::uint64_t kl = k * l;
            // kl <= 4KL <= (4/5) x^c, so any preimage is <= x.
            if (ps_preimage(kl, c)) s.add(static_cast<long double>(ak) * w);
          }
        }
        return s;
      },
      [](CompensatedSum<long double>& acc, const CompensatedSum<long double>& s) { acc.add(s); });
  return static_cast<double>(total.value());
}

}  // namespace pslab
