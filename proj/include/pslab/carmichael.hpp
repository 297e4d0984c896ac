#pragma once

// Korselt's criterion and a sieve-driven search for Carmichael numbers whose
// prime factors are all Piatetski-Shapiro values.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pslab/arith.hpp"
#include "pslab/parallel.hpp"
#include "pslab/pscore.hpp"

namespace pslab {

inline constexpr std::uint64_t kCarmichaelSearchGuard = 1'000'000'000;

struct CarmichaelRecord {
  BigInt N;
  FactorMap factors;
  /// One entry per prime factor, ascending: is that prime a PS value for c?
  std::vector<bool> ps_status;
  /// The preimage n with floor(n^c) = p, or 0 when p is not a PS value.
  std::vector<std::uint64_t> witnesses;

  bool all_ps() const;
};

/// N composite, squarefree and p - 1 | N - 1 for every prime p | N.
bool korselt(const BigInt& N);
bool korselt(std::uint64_t N);

/// a^N = a (mod N) for every base in `bases`.
bool fermat_check(std::uint64_t N, const std::vector<std::uint64_t>& bases = {2, 3, 5, 7});

/// Builds the record for a Korselt number N; nullopt when korselt(N) fails.
std::optional<CarmichaelRecord> carmichael_record(const BigInt& N, const ExponentC& c);

/// Accepts iff korselt(N) and every prime factor of N is a PS value.
std::optional<CarmichaelRecord> is_ps_carmichael(const BigInt& N, const ExponentC& c);

/// All Carmichael numbers <= limit, ascending, by a segmented factor sieve
/// over odd m.
std::vector<std::uint64_t> carmichael_numbers_up_to(std::uint64_t limit,
                                                    const Executor& exec = Executor::serial());

/// Carmichael numbers <= limit as records; with ps_filter only those made
/// entirely of PS primes are kept.
std::vector<CarmichaelRecord> search_ps_carmichael(std::uint64_t limit, const ExponentC& c,
                                                   bool ps_filter = true,
                                                   const Executor& exec = Executor::serial());

/// {"N":..,"factors":[..],"ps":[..],"c":"p/q"} on one line.
std::string to_json_line(const CarmichaelRecord& r, const ExponentC& c);

}  // namespace pslab
