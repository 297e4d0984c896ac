#pragma once

// Empirical harnesses over n <= x for arithmetic statistics of floor(n^c).

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "pslab/arith.hpp"
#include "pslab/parallel.hpp"
#include "pslab/pscore.hpp"

namespace pslab {

/// One row of experimental output.
struct ExperimentReport {
  std::string experiment;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  double observed = 0.0;
  double reference = 0.0;
  double ratio = 0.0;  ///< observed / reference, 0 when reference == 0
  std::int64_t runtime_ms = 0;
  std::vector<std::string> warnings;
  /// Experiment-specific extras (e.g. deciles).
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();

  void set_ratio() { ratio = reference != 0.0 ? observed / reference : 0.0; }
};

inline constexpr std::uint64_t kSquarefreeGuard = 10'000'000;
inline constexpr std::uint64_t kFactorStatsGuard = 1'000'000;
inline constexpr std::uint64_t kConvolutionGuard = 100'000;
inline constexpr std::uint64_t kConvolutionPairGuard = 100'000'000;
inline constexpr double kConvolutionEpsilon = 0.01;

/// #{n <= x : floor(n^c) squarefree} against (6/pi^2) x.
ExperimentReport squarefree_density(std::uint64_t x, const ExponentC& c,
                                    const Executor& exec = Executor::serial());

/// sum_{n<=x} sum_{p | floor(n^c)} log p against c x (log x - 1).
ExperimentReport chebyshev_sum(std::uint64_t x, const ExponentC& c,
                               const Executor& exec = Executor::serial());

/// #{2 <= n <= x : P(floor(n^c)) <= n^eps} against x^(1-eps).
ExperimentReport smooth_count(std::uint64_t x, const ExponentC& c, double eps,
                              const Executor& exec = Executor::serial());

/// #{2 <= n <= x : P(floor(n^c)) > n^(theta-eps)} against x; extra["deciles"]
/// holds the 10%..90% nearest-rank deciles of log P(floor(n^c)) / log n.
ExperimentReport large_pf_exceed(std::uint64_t x, const ExponentC& c, double theta, double eps,
                                 const Executor& exec = Executor::serial());

/// Runs squarefree, chebyshev, smooth and large-prime-factor statistics in a
/// single factorization pass over n <= x (same results as the individual calls).
std::vector<ExperimentReport> factor_suite(std::uint64_t x, const ExponentC& c, double smooth_eps,
                                           double theta, double theta_eps,
                                           const Executor& exec = Executor::serial());

struct SquareDivisorSums {
  double lhs;  ///< sum_{d~D} z_d #{n <= x : d^2 | floor(n^c)}
  double rhs;  ///< x sum_{d~D} z_d / d^2
};

/// Direct count for d in (D, 2D].
SquareDivisorSums square_divisor_sum(std::uint64_t x, const ExponentC& c, std::uint64_t D,
                                     const Weight& z, const Executor& exec = Executor::serial());

/// #{n <= x : d^2 | floor(n^c)} for a single d.
std::uint64_t square_divisor_count(std::uint64_t x, const ExponentC& c, std::uint64_t d);

/// Counts of floor(n^c) mod q over n in (N, 2N], one entry per residue.
std::vector<std::uint64_t> residue_histogram(std::uint64_t N, const ExponentC& c, std::uint64_t q,
                                             const Executor& exec = Executor::serial());

/// #{n ~ N : floor(n^c) = a (mod q)} against N/q.
ExperimentReport residue_equidistribution(std::uint64_t N, const ExponentC& c, std::uint64_t q,
                                          std::uint64_t a, const Executor& exec = Executor::serial());

/// One report per residue a = 0..q-1 from a single pass.
std::vector<ExperimentReport> residue_equidistribution_all(std::uint64_t N, const ExponentC& c,
                                                           std::uint64_t q,
                                                           const Executor& exec = Executor::serial());

/// The dyadic box sizes K = x^(c-1+6 eps), L = x^(1-6 eps)/5 with eps = 0.01.
struct ConvolutionBox {
  double K;
  double L;
};
ConvolutionBox convolution_box(std::uint64_t x, const ExponentC& c);

/// sum_{n <= x} R(n), R(n) = sum_{(k,l) ~ (K,L), kl = floor(n^c)} a_k a_l.
double convolution_count(std::uint64_t x, const ExponentC& c, const Weight& a,
                         const Executor& exec = Executor::serial());

}  // namespace pslab
