#include "pslab/carmichael.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "pslab/error.hpp"

namespace pslab {

bool CarmichaelRecord::all_ps() const {
  return std::all_of(ps_status.begin(), ps_status.end(), [](bool b) { return b; });
}

namespace {

bool korselt_factors(const BigInt& N, const FactorMap& f) {
  if (f.size() < 2 || !f.squarefree()) return false;
  const BigInt n1 = N - 1;
  for (const auto& [p, e] : f.entries()) {
    if (n1 % BigInt(std::to_string(p - 1)) != 0) return false;
  }
  return true;
}

BigInt to_big(std::uint64_t v) { return BigInt(std::to_string(v)); }

}  // namespace

bool korselt(const BigInt& N) {
  if (N < 2) throw ValidationError("korselt: N must be >= 2");
  return korselt_factors(N, factorize(N));
}

bool korselt(std::uint64_t N) { return korselt(to_big(N)); }

bool fermat_check(std::uint64_t N, const std::vector<std::uint64_t>& bases) {
  if (N < 2) return false;
  for (const std::uint64_t a : bases) {
    if (pow_mod(a % N, N, N) != a % N) return false;
  }
  return true;
}

std::optional<CarmichaelRecord> carmichael_record(const BigInt& N, const ExponentC& c) {
  if (N < 2) throw ValidationError("is_ps_carmichael: N must be >= 2");
  FactorMap f = factorize(N);
  if (!korselt_factors(N, f)) return std::nullopt;
  CarmichaelRecord r{N, std::move(f), {}, {}};
  for (const auto& [p, e] : r.factors.entries()) {
    const PsWitness w = is_ps_value(to_big(p), c);
    r.ps_status.push_back(w.is_value());
    r.witnesses.push_back(w.is_value() ? w.n->get_ui() : 0);
  }
  return r;
}

std::optional<CarmichaelRecord> is_ps_carmichael(const BigInt& N, const ExponentC& c) {
  auto r = carmichael_record(N, c);
  if (r && !r->all_ps()) return std::nullopt;
  return r;
}

std::vector<std::uint64_t> carmichael_numbers_up_to(std::uint64_t limit, const Executor& exec) {
  if (limit > kCarmichaelSearchGuard) {
    throw GuardError("carmichael search: limit exceeds 10^9");
  }
  if (limit < 3) return {};
  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
  const SieveCache small = primes_up_to(root);

  // Odd m = 2i + 1 for i in [1, (limit - 1) / 2].
  const auto blocks = exec.map_chunks(1, (limit - 1) / 2 + 1, [&](std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t m0 = 2 * lo + 1;
    const std::uint64_t len = hi - lo;
    std::vector<std::uint64_t> rest(len);
    std::vector<std::uint8_t> ok(len, 1);
    std::vector<std::uint8_t> count(len, 0);
    for (std::uint64_t j = 0; j < len; ++j) rest[j] = m0 + 2 * j;
    const std::uint64_t m_last = m0 + 2 * (len - 1);
    for (const std::uint32_t p : small.primes()) {
      if (p == 2) continue;
      if (static_cast<std::uint64_t>(p) * p > m_last) break;
      // First odd multiple of p that is >= m0.
      std::uint64_t first = (m0 + p - 1) / p * p;
      if (first % 2 == 0) first += p;
      for (std::uint64_t m = first; m <= m_last; m += 2 * p) {
        const std::uint64_t j = (m - m0) / 2;
        if (!ok[j]) continue;
        std::uint64_t r = rest[j] / p;
        if (r % p == 0 || (m - 1) % (p - 1) != 0) {
          ok[j] = 0;
          continue;
        }
        rest[j] = r;
        ++count[j];
      }
    }
    std::vector<std::uint64_t> found;
    for (std::uint64_t j = 0; j < len; ++j) {
      if (!ok[j]) continue;
      const std::uint64_t m = m0 + 2 * j;
      unsigned k = count[j];
      if (rest[j] > 1) {
        if (rest[j] == m || (m - 1) % (rest[j] - 1) != 0) continue;
        ++k;
      }
      if (k >= 3) found.push_back(m);
    }
    return found;
  });
  std::vector<std::uint64_t> out;
  for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::vector<CarmichaelRecord> search_ps_carmichael(std::uint64_t limit, const ExponentC& c,
                                                   bool ps_filter, const Executor& exec) {
  std::vector<CarmichaelRecord> out;
  for (const std::uint64_t N : carmichael_numbers_up_to(limit, exec)) {
    auto r = carmichael_record(to_big(N), c);
    if (!r) throw std::logic_error("carmichael search: sieve hit fails Korselt");
    if (ps_filter && !r->all_ps()) continue;
    out.push_back(std::move(*r));
  }
  return out;
}

std::string to_json_line(const CarmichaelRecord& r, const ExponentC& c) {
  nlohmann::ordered_json j;
  if (r.N.fits_ulong_p()) {
    j["N"] = r.N.get_ui();
  } else {
    j["N"] = r.N.get_str();
  }
  nlohmann::ordered_json f = nlohmann::ordered_json::array();
  for (const auto& [p, e] : r.factors.entries()) f.push_back(p);
  j["factors"] = f;
  nlohmann::ordered_json ps = nlohmann::ordered_json::array();
  for (const bool b : r.ps_status) ps.push_back(b);
  j["ps"] = ps;
  j["c"] = c.str();
  return j.dump();
}

}  // namespace pslab
