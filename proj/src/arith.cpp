#include "pslab/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pslab/error.hpp"

namespace pslab {

namespace {

constexpr std::uint32_t kTrialBound = 1024;

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> table = [] {
    std::vector<std::uint32_t> out;
    std::vector<bool> composite(kTrialBound, false);
    for (std::uint32_t i = 2; i < kTrialBound; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint32_t j = i * i; j < kTrialBound; j += i) composite[j] = true;
    }
    return out;
  }();
  return table;
}

std::uint64_t isqrt(std::uint64_t n) { return integer_root(n, 2); }

// Brent's cycle finding on x -> x^2 + 1; restarts move the starting point.
std::uint64_t rho_split(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  for (std::uint64_t start = 2; start < 2 + 64; ++start) {
    auto f = [n](std::uint64_t x) { return (mul_mod(x, x, n) + 1) % n; };
    std::uint64_t y = start, x = start, ys = start, g = 1, q = 1;
    constexpr std::uint64_t kBatch = 128;
    for (std::uint64_t r = 1; g == 1; r <<= 1) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      for (std::uint64_t k = 0; k < r && g == 1; k += kBatch) {
        ys = y;
        const std::uint64_t lim = std::min(kBatch, r - k);
        for (std::uint64_t i = 0; i < lim; ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
  // Unreachable in practice below the guard; plain trial division as a floor.
  for (std::uint64_t d = kTrialBound + 1; d * d <= n; d += 2) {
    if (n % d == 0) return d;
  }
  return n;
}

void split_into(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (n < std::uint64_t{kTrialBound} * kTrialBound || is_prime(n)) {
    out.push_back(n);
    return;
  }
  const std::uint64_t d = rho_split(n);
  split_into(d, out);
  split_into(n / d, out);
}

FactorMap collect(std::vector<std::uint64_t> primes) {
  std::sort(primes.begin(), primes.end());
  std::vector<FactorMap::Entry> entries;
  for (std::uint64_t p : primes) {
    if (!entries.empty() && entries.back().first == p) {
      ++entries.back().second;
    } else {
      entries.emplace_back(p, 1);
    }
  }
  return FactorMap(std::move(entries));
}

std::uint64_t checked_u64(const BigInt& m) {
  if (m < 1) throw ValidationError("factorize: m must be >= 1");
  if (mpz_sizeinbase(m.get_mpz_t(), 2) > 64 || m > BigInt(std::to_string(kFactorGuard))) {
    throw GuardError("factorize: m exceeds the 10^14 guard");
  }
  std::uint64_t v = 0;
  mpz_export(&v, nullptr, -1, sizeof v, 0, 0, m.get_mpz_t());
  return v;
}

}  // namespace

bool SieveCache::contains(std::uint64_t m) const {
  return std::binary_search(primes_.begin(), primes_.end(), m);
}

BigInt FactorMap::value() const {
  BigInt v = 1;
  for (const auto& [p, e] : entries_) {
    BigInt pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), p, e);
    v *= pe;
  }
  return v;
}

bool FactorMap::squarefree() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Entry& e) { return e.second == 1; });
}

SieveCache primes_up_to(std::uint64_t limit) {
  if (limit > kSieveLimitGuard) {
    throw GuardError("primes_up_to: limit " + std::to_string(limit) + " exceeds 10^9");
  }
  std::vector<std::uint32_t> primes;
  if (limit >= 2) {
    primes.reserve(static_cast<std::size_t>(1.3 * limit / std::max(1.0, std::log(double(limit)))) + 16);
    primes.push_back(2);
    const std::uint64_t root = isqrt(limit);
    std::vector<char> base_composite(root + 1, 0);
    std::vector<std::uint64_t> base;
    for (std::uint64_t i = 3; i <= root; i += 2) {
      if (base_composite[i]) continue;
      base.push_back(i);
      for (std::uint64_t j = i * i; j <= root; j += 2 * i) base_composite[j] = 1;
    }
    // Segment s covers the odd numbers low, low+2, ..., one byte each.
    std::vector<char> seg(kSieveSegmentBytes);
    for (std::uint64_t low = 3; low <= limit; low += 2 * kSieveSegmentBytes) {
      const std::uint64_t high = std::min(limit, low + 2 * kSieveSegmentBytes - 1);
      const std::uint64_t count = (high - low) / 2 + 1;
      std::fill_n(seg.begin(), count, 1);
      for (std::uint64_t p : base) {
        if (p * p > high) break;
        std::uint64_t start = std::max(p * p, (low + p - 1) / p * p);
        if (start % 2 == 0) start += p;
        for (std::uint64_t j = start; j <= high; j += 2 * p) seg[(j - low) / 2] = 0;
      }
      for (std::uint64_t i = 0; i < count; ++i) {
        if (seg[i]) primes.push_back(static_cast<std::uint32_t>(low + 2 * i));
      }
    }
  }
  std::vector<std::uint32_t> spf;
  if (limit <= kSpfLimit && limit >= 2) {
    spf.assign(limit + 1, 0);
    for (std::uint32_t p : primes) {
      if (std::uint64_t{p} * p > limit) {
        if (spf[p] == 0) spf[p] = p;
        continue;
      }
      for (std::uint64_t j = p; j <= limit; j += p) {
        if (spf[j] == 0) spf[j] = p;
      }
    }
  }
  return SieveCache(limit, std::move(primes), std::move(spf));
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::uint64_t kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
  for (std::uint64_t b : kBases) {
    if (n % b == 0) return n == b;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : kBases) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

FactorMap factorize(std::uint64_t m) {
  if (m < 1) throw ValidationError("factorize: m must be >= 1");
  if (m > kFactorGuard) throw GuardError("factorize: m exceeds the 10^14 guard");
  std::vector<std::uint64_t> found;
  for (std::uint32_t p : small_primes()) {
    if (std::uint64_t{p} * p > m) break;
    while (m % p == 0) {
      found.push_back(p);
      m /= p;
    }
  }
  split_into(m, found);
  return collect(std::move(found));
}

FactorMap factorize(const BigInt& m) { return factorize(checked_u64(m)); }

FactorMap factorize(std::uint64_t m, const SieveCache& cache) {
  if (m < 1) throw ValidationError("factorize: m must be >= 1");
  if (!cache.has_spf() || m > cache.limit()) return factorize(m);
  std::vector<std::uint64_t> found;
  while (m > 1) {
    const std::uint32_t p = cache.spf(m);
    found.push_back(p);
    m /= p;
  }
  return collect(std::move(found));
}

std::uint64_t largest_prime_factor(std::uint64_t m) {
  if (m < 2) throw ValidationError("largest_prime_factor: m must be >= 2");
  return factorize(m).largest();
}

std::uint64_t largest_prime_factor(const BigInt& m) {
  if (m < 2) throw ValidationError("largest_prime_factor: m must be >= 2");
  return factorize(m).largest();
}

bool is_squarefree(std::uint64_t m) { return factorize(m).squarefree(); }
bool is_squarefree(const BigInt& m) { return factorize(m).squarefree(); }

std::vector<std::int8_t> mobius_up_to(std::uint64_t limit) {
  if (limit > kMobiusGuard) throw GuardError("mobius_up_to: limit exceeds 10^8");
  std::vector<std::int8_t> mu(limit + 1, 0);
  if (limit >= 1) mu[1] = 1;
  std::vector<std::uint32_t> primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (!composite[i]) {
      primes.push_back(static_cast<std::uint32_t>(i));
      mu[i] = -1;
    }
    for (std::uint32_t p : primes) {
      const std::uint64_t ip = i * p;
      if (ip > limit) break;
      composite[ip] = true;
      if (i % p == 0) {
        mu[ip] = 0;
        break;
      }
      mu[ip] = static_cast<std::int8_t>(-mu[i]);
    }
  }
  return mu;
}

std::uint64_t euler_phi(std::uint64_t d) {
  if (d < 1) throw ValidationError("euler_phi: d must be >= 1");
  std::uint64_t phi = d;
  const FactorMap f = factorize(d);
  for (const auto& [p, e] : f.entries()) phi = phi / p * (p - 1);
  return phi;
}

}  // namespace pslab
