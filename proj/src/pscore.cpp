#include "pslab/pscore.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <numeric>

#include "pslab/error.hpp"


namespace pslab {

namespace {

using u128 = unsigned __int128;

// Exact value of base^exp, kept in 128 bits when it fits.
class PowerValue {
 public:
  PowerValue(std::uint64_t base, std::uint64_t exp) {
    if (fits_u128(base, exp)) {
      small_ = true;
      v_ = pow_u128(base, exp);
    } else {
      mpz_ui_pow_ui(big_.get_mpz_t(), base, exp);
    }
  }

  /// Sign of (this - base^exp).
  int compare(std::uint64_t base, std::uint64_t exp) const {
    if (small_) {
      if (fits_u128(base, exp)) {
        const u128 other = pow_u128(base, exp);
        return v_ < other ? -1 : (v_ > other ? 1 : 0);
      }
      // base^exp >= 2^((bw-1)*exp) >= 2^127 > v_.
      if (base >= 2 && (static_cast<std::uint64_t>(std::bit_width(base)) - 1) * exp >= 127) {
        return -1;
      }
    }
    mpz_class other;
    mpz_ui_pow_ui(other.get_mpz_t(), base, exp);
    if (small_) {
      return -sgn(other - to_mpz(v_));
    }
    return sgn(big_ - other);
  }

 private:
  static bool fits_u128(std::uint64_t base, std::uint64_t exp) {
    if (base <= 1 || exp == 0) return true;
    return static_cast<std::uint64_t>(std::bit_width(base)) * exp <= 127;
  }
  static u128 pow_u128(std::uint64_t base, std::uint64_t exp) {
    u128 result = 1;
    u128 b = base;
    while (exp > 0) {
      if (exp & 1) result *= b;
      exp >>= 1;
      if (exp > 0) b *= b;
    }
    return result;
  }
  static mpz_class to_mpz(u128 v) {
    mpz_class hi = static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64));
    mpz_class lo = static_cast<unsigned long>(static_cast<std::uint64_t>(v));
    return (hi << 64) + lo;
  }

  bool small_ = false;
  u128 v_ = 0;
  mpz_class big_;
};

BigInt big_pow(const BigInt& base, std::uint64_t exp) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

BigInt from_u64(std::uint64_t v) {
  BigInt r;
  mpz_import(r.get_mpz_t(), 1, -1, sizeof v, 0, 0, &v);
  return r;
}

// Smallest n with n^p >= k^q, plus whether equality holds there.
std::uint64_t ceil_gamma_root_exact(std::uint64_t k, const ExponentC& c, bool* exact) {
  const PowerValue kq(k, c.q());
  auto n = static_cast<std::uint64_t>(
      std::ceil(std::pow(static_cast<long double>(k), c.gamma())));
  if (n == 0) n = 1;
  while (n > 1 && kq.compare(n - 1, c.p()) <= 0) --n;
  int cmp;
  while ((cmp = kq.compare(n, c.p())) > 0) ++n;
  if (exact != nullptr) *exact = (cmp == 0);
  return n;
}

}  // namespace

ExponentC::ExponentC(std::uint64_t p, std::uint64_t q) : p_(p), q_(q) {
  if (q < 2) throw ValidationError("exponent c = p/q needs q >= 2 (c must not be an integer)");
  if (p <= q) throw ValidationError("exponent c = p/q needs p > q (c > 1)");
  if (std::gcd(p, q) != 1) {
    throw ValidationError("exponent c = " + std::to_string(p) + "/" + std::to_string(q) +
                          " is not in lowest terms");
  }
}

ExponentC ExponentC::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (text.find('.') != std::string_view::npos) {
      throw ValidationError("decimal exponent '" + std::string(text) +
                            "' rejected; write c as a fraction p/q (e.g. 3/2)");
    }
    throw ValidationError("exponent '" + std::string(text) + "' must be written as p/q");
  }
  auto parse_part = [&](std::string_view s) {
    std::uint64_t v = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end || s.empty()) {
      throw ValidationError("malformed exponent '" + std::string(text) + "'");
    }
    return v;
  };
  return ExponentC(parse_part(text.substr(0, slash)), parse_part(text.substr(slash + 1)));
}

std::string ExponentC::str() const { return std::to_string(p_) + "/" + std::to_string(q_); }

int compare_powers(std::uint64_t a, std::uint64_t e, std::uint64_t b, std::uint64_t f) {
  return PowerValue(a, e).compare(b, f);
}

BigInt integer_root(const BigInt& m, std::uint64_t q) {
  if (q == 0) throw ValidationError("integer_root: q must be >= 1");
  if (sgn(m) < 0) throw ValidationError("integer_root: m must be nonnegative");
  if (m < 2 || q == 1) return m;

  // Seed slightly above the true root from a floating log2 estimate.
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, m.get_mpz_t());
  const long double log2_root = (std::log2(static_cast<long double>(mant)) + exp2) / q;
  BigInt x;
  if (log2_root < 60) {
    x = from_u64(static_cast<std::uint64_t>(std::ceil(std::exp2(log2_root))) + 1);
  } else {
    const auto shift = static_cast<unsigned long>(std::floor(log2_root)) - 52;
    x = from_u64(static_cast<std::uint64_t>(std::ceil(std::exp2(log2_root - shift))) + 2);
    x <<= shift;
  }
  while (big_pow(x, q) <= m) x *= 2;

  // Integer Newton from above decreases monotonically to the floor root.
  for (;;) {
    BigInt y = ((q - 1) * x + m / big_pow(x, q - 1)) / q;
    if (y >= x) break;
    x = std::move(y);
  }
  if (!(big_pow(x, q) <= m && m < big_pow(x + 1, q))) {
    throw RouteDisagreement("integer_root bracket check failed for q = " + std::to_string(q));
  }
  return x;
}

std::uint64_t integer_root(std::uint64_t m, std::uint64_t q) {
  if (q == 0) throw ValidationError("integer_root: q must be >= 1");
  if (m < 2 || q == 1) return m;
  auto r = static_cast<std::uint64_t>(
      std::floor(std::pow(static_cast<long double>(m), 1.0L / static_cast<long double>(q))));
  while (r > 0 && compare_powers(r, q, m, 1) > 0) --r;
  while (compare_powers(r + 1, q, m, 1) <= 0) ++r;
  return r;
}

BigInt ceil_root(const BigInt& m, std::uint64_t q) {
  BigInt r = integer_root(m, q);
  if (big_pow(r, q) != m) r += 1;
  return r;
}

BigInt floor_pow(const BigInt& n, const ExponentC& c) {
  if (n < 1) throw ValidationError("floor_pow: n must be >= 1");
  return integer_root(big_pow(n, c.p()), c.q());
}

std::uint64_t floor_pow(std::uint64_t n, const ExponentC& c) {
  if (n < 1) throw ValidationError("floor_pow: n must be >= 1");
  if (n == 1) return 1;
  if (c.value() * std::log2(static_cast<long double>(n)) >= 63.0L) {
    throw GuardError("floor_pow: n^c exceeds 2^63 for n = " + std::to_string(n));
  }
  const PowerValue np(n, c.p());
  auto r = static_cast<std::uint64_t>(std::floor(std::pow(static_cast<long double>(n), c.value())));
  if (r == 0) r = 1;
  while (r > 1 && np.compare(r, c.q()) < 0) --r;
  while (np.compare(r + 1, c.q()) >= 0) ++r;
  return r;
}

std::uint64_t ceil_gamma_root(std::uint64_t k, const ExponentC& c) {
  return ceil_gamma_root_exact(k, c, nullptr);
}

PsWitness is_ps_value(const BigInt& k, const ExponentC& c) {
  if (k < 1) throw ValidationError("is_ps_value: k must be >= 1");
  const BigInt kq = big_pow(k, c.q());
  BigInt n = integer_root(kq, c.p());
  if (big_pow(n, c.p()) != kq) n += 1;
  PsWitness w{k, std::nullopt};
  if (big_pow(n, c.p()) < big_pow(k + 1, c.q())) w.n = std::move(n);
  return w;
}

std::optional<std::uint64_t> ps_preimage(std::uint64_t k, const ExponentC& c) {
  if (k < 1) throw ValidationError("ps_preimage: k must be >= 1");
  const std::uint64_t n = ceil_gamma_root(k, c);
  if (compare_powers(k + 1, c.q(), n, c.p()) > 0) return n;
  return std::nullopt;
}

PreimageRange ps_preimage_range(std::uint64_t lo, std::uint64_t hi, const ExponentC& c) {
  if (lo < 1 || hi < lo) throw ValidationError("ps_values_in: need 1 <= lo <= hi");
  return {ceil_gamma_root(lo, c), ceil_gamma_root(hi + 1, c) - 1};
}

std::vector<PsWitness> ps_values_in(const BigInt& lo, const BigInt& hi, const ExponentC& c) {
  if (lo < 1 || hi < lo) throw ValidationError("ps_values_in: need 1 <= lo <= hi");
  const BigInt first = ceil_root(big_pow(lo, c.q()), c.p());
  const BigInt last = ceil_root(big_pow(hi + 1, c.q()), c.p()) - 1;
  std::vector<PsWitness> out;
  for (BigInt n = first; n <= last; ++n) out.push_back({floor_pow(n, c), n});
  return out;
}

DecompositionTerms lemma2_decomposition(std::uint64_t K, const ExponentC& c, const Weight& z,
                                 const Executor& exec) {
  if (K == 0) throw ValidationError("lemma2_decomposition: K must be >= 1");
  if (K > 100'000'000) throw GuardError("lemma2_decomposition: K exceeds 10^8");
  const long double gamma = c.gamma();

  // psi(-k^gamma) = (ceil(k^gamma) - k^gamma) - 1/2, with the ceiling exact.
  auto psi_neg_root = [&](std::uint64_t k) -> long double {
    bool exact = false;
    const std::uint64_t ceil_y = ceil_gamma_root_exact(k, c, &exact);
    if (exact) return -0.5L;
    long double frac = static_cast<long double>(ceil_y) - std::pow(static_cast<long double>(k), gamma);
    frac = std::clamp(frac, 0.0L, std::nextafter(1.0L, 0.0L));
    return frac - 0.5L;
  };

  struct Partial {
    CompensatedSum<long double> main;
    CompensatedSum<long double> corr;
  };
  const Partial floating = exec.map_reduce(
      1, K + 1, Partial{},
      [&](std::uint64_t lo, std::uint64_t hi) {
        Partial part;
        long double psi_k = psi_neg_root(lo);
        for (std::uint64_t k = lo; k < hi; ++k) {
          const long double psi_next = psi_neg_root(k + 1);
          const long double zk = z(k);
          if (zk != 0) {
            part.main.add(zk * std::pow(static_cast<long double>(k), gamma - 1));
            part.corr.add(zk * (psi_next - psi_k));
          }
          psi_k = psi_next;
        }
        return part;
      },
      [](Partial& acc, const Partial& p) {
        acc.main.add(p.main);
        acc.corr.add(p.corr);
      });

  const PreimageRange pre = ps_preimage_range(1, K, c);
  const auto exact = exec.map_reduce(
      pre.first, pre.last + 1, CompensatedSum<long double>{},
      [&](std::uint64_t lo, std::uint64_t hi) {
        CompensatedSum<long double> s;
        for (std::uint64_t n = lo; n < hi; ++n) s.add(z(floor_pow(n, c)));
        return s;
      },
      [](CompensatedSum<long double>& acc, const CompensatedSum<long double>& p) { acc.add(p); });

  return {static_cast<double>(gamma * floating.main.value()),
          static_cast<double>(floating.corr.value()), static_cast<double>(exact.value())};
}

}  // namespace pslab
