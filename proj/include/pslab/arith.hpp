#pragma once

// Primes, factorization and multiplicative predicates for integers up to
// about 10^14.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pslab/pscore.hpp"

namespace pslab {

inline constexpr std::uint64_t kSieveLimitGuard = 1'000'000'000;
inline constexpr std::uint64_t kFactorGuard = 100'000'000'000'000;  // 10^14
inline constexpr std::uint64_t kMobiusGuard = 100'000'000;
/// Segment length of the sieve, in bytes (one byte per odd candidate).
inline constexpr std::uint64_t kSieveSegmentBytes = 256 * 1024;
/// Smallest-prime-factor tables are built only up to this limit.
inline constexpr std::uint64_t kSpfLimit = 10'000'000;

/// Immutable table of the primes up to `limit`, with an optional
/// smallest-prime-factor table for small limits.
class SieveCache {
 public:
  SieveCache() = default;
  SieveCache(std::uint64_t limit, std::vector<std::uint32_t> primes, std::vector<std::uint32_t> spf)
      : limit_(limit), primes_(std::move(primes)), spf_(std::move(spf)) {}

  std::uint64_t limit() const { return limit_; }
  std::span<const std::uint32_t> primes() const { return primes_; }
  bool has_spf() const { return !spf_.empty(); }
  /// Least prime factor of 2 <= m <= limit (requires has_spf()).
  std::uint32_t spf(std::uint64_t m) const { return spf_[m]; }
  /// Binary-search primality for m <= limit.
  bool contains(std::uint64_t m) const;

 private:
  std::uint64_t limit_ = 0;
  std::vector<std::uint32_t> primes_;
  std::vector<std::uint32_t> spf_;
};

/// Ascending (prime, exponent) pairs.
class FactorMap {
 public:
  using Entry = std::pair<std::uint64_t, unsigned>;

  FactorMap() = default;
  explicit FactorMap(std::vector<Entry> entries) : entries_(std::move(entries)) {}

  std::span<const Entry> entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  /// Product of prime^exponent, exactly.
  BigInt value() const;
  /// Largest prime; 0 for the empty map (m = 1).
  std::uint64_t largest() const { return entries_.empty() ? 0 : entries_.back().first; }
  bool squarefree() const;

  friend bool operator==(const FactorMap&, const FactorMap&) = default;

 private:
  std::vector<Entry> entries_;
};

/// Segmented sieve of Eratosthenes over [0, limit].
SieveCache primes_up_to(std::uint64_t limit);

/// Deterministic Miller-Rabin with the first 13 prime bases (complete below 3.3e24).
bool is_prime(std::uint64_t n);

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// Complete factorization of 1 <= m <= 10^14.
FactorMap factorize(std::uint64_t m);
FactorMap factorize(const BigInt& m);
/// Uses the cache's smallest-prime-factor table when m is in range.
FactorMap factorize(std::uint64_t m, const SieveCache& cache);

std::uint64_t largest_prime_factor(std::uint64_t m);
std::uint64_t largest_prime_factor(const BigInt& m);

bool is_squarefree(std::uint64_t m);
bool is_squarefree(const BigInt& m);

/// mu(d) for 0 <= d <= limit by a linear sieve (entry 0 unused).
std::vector<std::int8_t> mobius_up_to(std::uint64_t limit);

/// Euler's phi via factorization.
std::uint64_t euler_phi(std::uint64_t d);

}  // namespace pslab
