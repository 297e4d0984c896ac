#pragma once

// Direct evaluation of multilinear exponential sums with monomial phases,
// and calculators for the classical and trilinear bound formulas.
//
// Bound calculators carry no implied constants. Comparisons against direct
// sums are ratio studies with fixed envelope constants.

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "pslab/parallel.hpp"

namespace pslab {

inline constexpr std::uint64_t kSumLatticeGuard = 100'000'000;

/// A * prod_i m_i^{e_i} + shift * prod_i m_i.
struct MonomialPhase {
  double A = 1.0;
  std::vector<std::pair<std::size_t, double>> exponents;  ///< (variable index, exponent)
  double shift = 0.0;
};

/// m ~ M (M < m <= 2M) when dyadic, otherwise 1 <= m <= M.
struct SumRange {
  double M = 1.0;
  bool dyadic = false;

  std::uint64_t first() const;
  std::uint64_t last() const;
  std::uint64_t count() const { return last() >= first() ? last() - first() + 1 : 0; }
};

using Coefficient = std::function<std::complex<double>(std::uint64_t)>;
using JointCoefficient = std::function<std::complex<double>(std::span<const std::uint64_t>)>;

struct SumInstance {
  MonomialPhase phase;
  std::vector<SumRange> ranges;
  /// Optional per-variable weights (empty vector or empty function = 1).
  std::vector<Coefficient> coefficients;
  /// Optional weight on the whole tuple.
  JointCoefficient joint;
  /// When set, per-variable unit-modulus weights are derived from it.
  std::optional<std::uint64_t> seed;

  std::uint64_t lattice_size() const;
  /// Fractional part of the phase at a lattice point.
  double phase_mod1(std::span<const std::uint64_t> m) const;
};

/// Deterministic unit-modulus weight e(u(seed, var, m)).
Coefficient seeded_unit_coefficient(std::uint64_t seed, std::size_t var);

nlohmann::json to_json(const SumInstance& s);
SumInstance sum_instance_from_json(const nlohmann::json& j);

/// Direct compensated summation of the instance.
std::complex<double> eval_sum(const SumInstance& instance, const Executor& exec = Executor::serial());

struct BoundReport {
  double observed = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  std::string meta;
};

BoundReport make_bound_report(double observed, double bound, std::string meta);

/// N lambda^{1/2} + lambda^{-1/2}.
double bound_vdc2(double N, double lambda);
/// N lambda^{1/6} + N^{3/4} + N^{1/4} lambda^{-1/4}.
double bound_vdc3(double N, double lambda);
/// cot(pi lambda / 2) for 0 < lambda <= 1/2. N is accepted for symmetry with
/// the other calculators; the bound does not depend on it.
double bound_kusmin_landau(double N, double lambda);

/// The nine individual terms of the trilinear bound, N = M1 M2.
std::array<double, 9> theorem3_terms(double M, double N, double F);
double bound_theorem3(double M, double N, double F);

struct PowerTerm {
  double coefficient;  ///< C_j or D_k
  double exponent;     ///< c_j or d_k
};

struct BalanceResult {
  double bound;
  double witness;        ///< Q_1
  double value_at_witness;  ///< L(Q_1)
};

/// L(Q) = sum C_j Q^{c_j} + sum D_k Q^{-d_k}.
double balance_objective(std::span<const PowerTerm> C, std::span<const PowerTerm> D, double Q);

/// The balanced bound
///   sum_{j,k} (C_j^{d_k} D_k^{c_j})^{1/(c_j+d_k)} + sum C_j Q_lo^{c_j} + sum D_k Q_hi^{-d_k}
/// (middle sum dropped without Q_lo), and the minimizer of L over
/// [Q_lo, Q_hi] (resp. (0, Q_hi]) as witness.
BalanceResult optimize_lemma4(std::span<const PowerTerm> C, std::span<const PowerTerm> D,
                             std::optional<double> Q_lo, double Q_hi);

// ---- ratio studies -------------------------------------------------------

/// f(n) = A n^2 on n ~ N, lambda = 2|A|.
std::vector<BoundReport> ratio_study_vdc2(std::span<const double> As, std::span<const double> Ns,
                                          const Executor& exec = Executor::serial());
/// f(n) = A n^3 on n ~ N, lambda = 6|A|.
std::vector<BoundReport> ratio_study_vdc3(std::span<const double> As, std::span<const double> Ns,
                                          const Executor& exec = Executor::serial());
/// Random f(n) = a n + b n^2 on n ~ N with f' kept off the integers.
std::vector<BoundReport> ratio_study_kusmin_landau(std::uint64_t seed, std::size_t count,
                                                   const Executor& exec = Executor::serial());
/// Random trilinear instances with M * M1 * M2 <= 10^6; ratio is
/// |S| / ((MN)^0.05 * bound_theorem3).
std::vector<BoundReport> ratio_study_theorem3(std::uint64_t seed, std::size_t count,
                                              const Executor& exec = Executor::serial());

struct BalanceCase {
  std::vector<PowerTerm> C;
  std::vector<PowerTerm> D;
  std::optional<double> Q_lo;
  double Q_hi;
};

std::vector<BalanceCase> balance_corpus(std::uint64_t seed, std::size_t count);

inline constexpr double kTrilinearEpsilon = 0.05;

}  // namespace pslab
