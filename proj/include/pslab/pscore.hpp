#pragma once

// Exact arithmetic for the Piatetski-Shapiro map n -> floor(n^c), c = p/q.
//
// Every floor is decided by exact integer comparison of p-th and q-th
// powers; floating point is only ever used to seed a guess that is then
// bracket-checked.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "pslab/parallel.hpp"

namespace pslab {

using BigInt = mpz_class;

/// Real-valued weight sequence k -> z_k, evaluated on demand.
using Weight = std::function<double(std::uint64_t)>;

/// The exponent c = p/q > 1, non-integer, in lowest terms.
class ExponentC {
 public:
  /// Throws ValidationError unless gcd(p, q) = 1, q >= 2 and p > q.
  ExponentC(std::uint64_t p, std::uint64_t q);

  /// Parses "p/q". Decimal input is rejected with a hint to use a fraction.
  static ExponentC parse(std::string_view text);

  std::uint64_t p() const { return p_; }
  std::uint64_t q() const { return q_; }
  long double value() const { return static_cast<long double>(p_) / q_; }
  /// gamma = 1/c = q/p.
  long double gamma() const { return static_cast<long double>(q_) / p_; }
  std::string str() const;

  friend bool operator==(const ExponentC&, const ExponentC&) = default;

 private:
  std::uint64_t p_;
  std::uint64_t q_;
};

/// A candidate PS value k together with its preimage n, if one exists.
struct PsWitness {
  BigInt k;
  std::optional<BigInt> n;

  bool is_value() const { return n.has_value(); }
};

/// Sign of a^e - b^f, computed exactly.
int compare_powers(std::uint64_t a, std::uint64_t e, std::uint64_t b, std::uint64_t f);

/// Largest r with r^q <= m (Newton iteration from a floating seed, with a
/// final exact bracket check).
BigInt integer_root(const BigInt& m, std::uint64_t q);
std::uint64_t integer_root(std::uint64_t m, std::uint64_t q);

/// Smallest r with r^q >= m.
BigInt ceil_root(const BigInt& m, std::uint64_t q);

/// floor(n^c) for n >= 1, exactly.
BigInt floor_pow(const BigInt& n, const ExponentC& c);
/// Machine-word variant; throws GuardError when the result would not fit.
std::uint64_t floor_pow(std::uint64_t n, const ExponentC& c);

/// Smallest n with n^c >= k, i.e. ceil(k^(1/c)).
std::uint64_t ceil_gamma_root(std::uint64_t k, const ExponentC& c);

/// Decides whether k = floor(n^c) for some n and returns that n.
PsWitness is_ps_value(const BigInt& k, const ExponentC& c);
std::optional<std::uint64_t> ps_preimage(std::uint64_t k, const ExponentC& c);

/// The preimages n whose values floor(n^c) lie in [lo, hi]. Empty when
/// first > last.
struct PreimageRange {
  std::uint64_t first;
  std::uint64_t last;

  bool empty() const { return first > last; }
  std::uint64_t size() const { return empty() ? 0 : last - first + 1; }
};

PreimageRange ps_preimage_range(std::uint64_t lo, std::uint64_t hi, const ExponentC& c);

/// Calls visit(k, n) for every PS value k in [lo, hi], in increasing order.
template <typename Visit>
void for_each_ps_value(std::uint64_t lo, std::uint64_t hi, const ExponentC& c, Visit&& visit) {
  const PreimageRange r = ps_preimage_range(lo, hi, c);
  for (std::uint64_t n = r.first; n <= r.last && !r.empty(); ++n) {
    visit(floor_pow(n, c), n);
  }
}

/// All PS values in [lo, hi] with their preimages, ascending.
std::vector<PsWitness> ps_values_in(const BigInt& lo, const BigInt& hi, const ExponentC& c);

struct DecompositionTerms {
  double main;        ///< gamma * sum z_k k^(gamma-1)
  double correction;  ///< sum z_k (psi(-(k+1)^gamma) - psi(-k^gamma))
  double exact;       ///< sum of z_k over PS values k <= K
};

/// Evaluates the three sides of the PS-value counting decomposition for
/// k <= K. Floating terms use long double (64-bit mantissa) internally.
DecompositionTerms lemma2_decomposition(std::uint64_t K, const ExponentC& c, const Weight& z,
                                 const Executor& exec = Executor::serial());

}  // namespace pslab
