#include "pslab/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "pslab/error.hpp"
#include "pslab/sawtooth.hpp"

namespace pslab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::complex<double> checked(std::complex<double> w) {
  if (std::abs(w) > 1.0 + 1e-12) throw ValidationError("sum coefficient exceeds 1 in modulus");
  return w;
}

std::string describe(const char* kind, double A, double N, double lambda) {
  std::ostringstream os;
  os.precision(6);
  os << kind << " A=" << A << " N=" << N << " lambda=" << lambda;
  return os.str();
}

SumInstance single_variable(double A, double exponent, double N) {
  SumInstance s;
  s.phase.A = A;
  s.phase.exponents = {{0, exponent}};
  s.ranges = {{N, true}};
  return s;
}

}  // namespace

std::uint64_t SumRange::first() const {
  if (!(M >= 1.0)) throw ValidationError("sum range endpoint must be >= 1");
  return dyadic ? static_cast<std::uint64_t>(std::floor(M)) + 1 : 1;
}

std::uint64_t SumRange::last() const {
  if (!(M >= 1.0)) throw ValidationError("sum range endpoint must be >= 1");
  return static_cast<std::uint64_t>(std::floor(dyadic ? 2.0 * M : M));
}

std::uint64_t SumInstance::lattice_size() const {
  long double total = 1;
  for (const auto& r : ranges) total *= static_cast<long double>(r.count());
  if (total > static_cast<long double>(kSumLatticeGuard)) {
    throw GuardError("sum lattice exceeds 10^8 points");
  }
  return static_cast<std::uint64_t>(total);
}

double SumInstance::phase_mod1(std::span<const std::uint64_t> m) const {
  long double value = phase.A;
  for (const auto& [var, e] : phase.exponents) {
    value *= std::pow(static_cast<long double>(m[var]), static_cast<long double>(e));
  }
  if (phase.shift != 0.0) {
    long double prod = phase.shift;
    for (std::uint64_t v : m) prod *= static_cast<long double>(v);
    value += prod;
  }
  return static_cast<double>(value - std::floor(value));
}

Coefficient seeded_unit_coefficient(std::uint64_t seed, std::size_t var) {
  return [seed, var](std::uint64_t m) {
    const std::uint64_t h = splitmix64(splitmix64(seed ^ (0x51ed270b27a1c4d3ULL * (var + 1))) + m);
    return unit_phase(static_cast<double>(h >> 11) * 0x1.0p-53);
  };
}

nlohmann::json to_json(const SumInstance& s) {
  nlohmann::json exps = nlohmann::json::array();
  for (const auto& [var, e] : s.phase.exponents) exps.push_back({var, e});
  nlohmann::json ranges = nlohmann::json::array();
  for (const auto& r : s.ranges) ranges.push_back({r.M, r.dyadic});
  nlohmann::json j = {{"phase", {{"A", s.phase.A}, {"exponents", exps}}}, {"ranges", ranges}};
  if (s.phase.shift != 0.0) j["phase"]["shift"] = s.phase.shift;
  j["seed"] = s.seed ? nlohmann::json(*s.seed) : nlohmann::json(nullptr);
  return j;
}

SumInstance sum_instance_from_json(const nlohmann::json& j) {
  try {
    SumInstance s;
    const auto& phase = j.at("phase");
    s.phase.A = phase.at("A").get<double>();
    if (s.phase.A == 0.0) throw ValidationError("phase coefficient A must be nonzero");
    for (const auto& e : phase.at("exponents")) {
      s.phase.exponents.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<double>());
    }
    s.phase.shift = phase.value("shift", 0.0);
    for (const auto& r : j.at("ranges")) s.ranges.push_back({r.at(0).get<double>(), r.at(1).get<bool>()});
    for (const auto& [var, e] : s.phase.exponents) {
      if (var >= s.ranges.size()) throw ValidationError("exponent refers to a missing variable");
      if (!std::isfinite(e)) throw ValidationError("exponents must be finite");
    }
    if (j.contains("seed") && !j["seed"].is_null()) {
      s.seed = j["seed"].get<std::uint64_t>();
      for (std::size_t v = 0; v < s.ranges.size(); ++v) {
        s.coefficients.push_back(seeded_unit_coefficient(*s.seed, v));
      }
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed sum instance: ") + e.what());
  }
}

std::complex<double> eval_sum(const SumInstance& instance, const Executor& exec) {
  if (instance.phase.A == 0.0) throw ValidationError("phase coefficient A must be nonzero");
  if (instance.ranges.empty()) throw ValidationError("sum needs at least one variable");
  const std::uint64_t total = instance.lattice_size();
  const std::size_t dims = instance.ranges.size();
  std::vector<std::uint64_t> firsts, counts;
  for (const auto& r : instance.ranges) {
    firsts.push_back(r.first());
    counts.push_back(r.count());
  }

  auto result = exec.map_reduce(
      0, total, CompensatedComplexSum<double>{},
      [&](std::uint64_t lo, std::uint64_t hi) {
        // Decode lo into a multi-index; the last variable runs fastest.
        std::vector<std::uint64_t> idx(dims), m(dims);
        std::uint64_t rest = lo;
        for (std::size_t v = dims; v-- > 0;) {
          idx[v] = rest % counts[v];
          rest /= counts[v];
        }
        CompensatedComplexSum<double> part;
        for (std::uint64_t flat = lo; flat < hi; ++flat) {
          for (std::size_t v = 0; v < dims; ++v) m[v] = firsts[v] + idx[v];
          std::complex<double> w = unit_phase(instance.phase_mod1(m));
          for (std::size_t v = 0; v < instance.coefficients.size() && v < dims; ++v) {
            if (instance.coefficients[v]) w *= checked(instance.coefficients[v](m[v]));
          }
          if (instance.joint) w *= checked(instance.joint(m));
          part.add(w);
          for (std::size_t v = dims; v-- > 0;) {
            if (++idx[v] < counts[v]) break;
            idx[v] = 0;
          }
        }
        return part;
      },
      [](CompensatedComplexSum<double>& acc, const CompensatedComplexSum<double>& p) { acc.add(p); });
  return result.value();
}

BoundReport make_bound_report(double observed, double bound, std::string meta) {
  return {observed, bound, bound > 0 ? observed / bound : 0.0, std::move(meta)};
}

double bound_vdc2(double N, double lambda) {
  if (!(lambda > 0)) throw ValidationError("bound_vdc2: lambda must be positive");
  return N * std::sqrt(lambda) + 1.0 / std::sqrt(lambda);
}

double bound_vdc3(double N, double lambda) {
  if (!(lambda > 0)) throw ValidationError("bound_vdc3: lambda must be positive");
  return N * std::pow(lambda, 1.0 / 6.0) + std::pow(N, 0.75) + std::pow(N, 0.25) * std::pow(lambda, -0.25);
}

double bound_kusmin_landau(double /*N*/, double lambda) {
  if (!(lambda > 0.0 && lambda <= 0.5)) {
    throw ValidationError("bound_kusmin_landau: lambda must lie in (0, 1/2]");
  }
  return 1.0 / std::tan(std::numbers::pi * lambda / 2.0);
}

std::array<double, 9> theorem3_terms(double M, double N, double F) {
  if (!(M >= 1 && N >= 1 && F > 0)) throw ValidationError("bound_theorem3: need M, N >= 1 and F > 0");
  auto t = [&](double a, double b, double c) { return std::pow(M, a) * std::pow(N, b) * std::pow(F, c); };
  return {t(5.0 / 8, 7.0 / 8, 1.0 / 8),       t(1, 7.0 / 8, 0),
          t(37.0 / 49, 46.0 / 49, 3.0 / 49),  t(23.0 / 29, 27.0 / 29, 3.0 / 58),
          t(43.0 / 58, 27.0 / 29, 2.0 / 29),  t(115.0 / 152, 7.0 / 8, 25.0 / 304),
          t(41.0 / 54, 25.0 / 27, 7.0 / 108), t(5.0 / 6, 1, 0),
          t(11.0 / 10, 1, -1.0 / 4)};
}

double bound_theorem3(double M, double N, double F) {
  CompensatedSum<double> s;
  for (double term : theorem3_terms(M, N, F)) s.add(term);
  return s.value();
}

double balance_objective(std::span<const PowerTerm> C, std::span<const PowerTerm> D, double Q) {
  CompensatedSum<double> s;
  for (const auto& c : C) s.add(c.coefficient * std::pow(Q, c.exponent));
  for (const auto& d : D) s.add(d.coefficient * std::pow(Q, -d.exponent));
  return s.value();
}

BalanceResult optimize_lemma4(std::span<const PowerTerm> C, std::span<const PowerTerm> D,
                             std::optional<double> Q_lo, double Q_hi) {
  if (C.empty() || D.empty()) throw ValidationError("optimize_lemma4: term lists must be nonempty");
  auto positive = [](const PowerTerm& t) { return t.coefficient > 0 && t.exponent > 0; };
  if (!std::all_of(C.begin(), C.end(), positive) || !std::all_of(D.begin(), D.end(), positive)) {
    throw ValidationError("optimize_lemma4: all coefficients and exponents must be positive");
  }
  if (!(Q_hi > 0) || (Q_lo && !(*Q_lo > 0 && *Q_lo <= Q_hi))) {
    throw ValidationError("optimize_lemma4: need 0 < Q_lo <= Q_hi");
  }

  CompensatedSum<double> bound;
  for (const auto& c : C) {
    for (const auto& d : D) {
      const double e = 1.0 / (c.exponent + d.exponent);
      bound.add(std::pow(c.coefficient, d.exponent * e) * std::pow(d.coefficient, c.exponent * e));
    }
  }
  if (Q_lo) {
    for (const auto& c : C) bound.add(c.coefficient * std::pow(*Q_lo, c.exponent));
  }
  for (const auto& d : D) bound.add(d.coefficient * std::pow(Q_hi, -d.exponent));

  // L(e^s) is convex in s: grid for a bracket, then golden-section refinement.
  auto L = [&](double s) { return balance_objective(C, D, std::exp(s)); };
  auto slope = [&](double s) {
    double g = 0;
    const double Q = std::exp(s);
    for (const auto& c : C) g += c.exponent * c.coefficient * std::pow(Q, c.exponent);
    for (const auto& d : D) g -= d.exponent * d.coefficient * std::pow(Q, -d.exponent);
    return g;
  };
  const double s_hi = std::log(Q_hi);
  double s_lo;
  if (Q_lo) {
    s_lo = std::log(*Q_lo);
  } else {
    s_lo = s_hi - 1.0;
    while (slope(s_lo) > 0 && s_lo > s_hi - 2000.0) s_lo = s_hi - 2.0 * (s_hi - s_lo);
  }
  constexpr int kGrid = 256;
  int best = 0;
  double best_val = L(s_lo);
  for (int i = 1; i <= kGrid; ++i) {
    const double v = L(s_lo + (s_hi - s_lo) * i / kGrid);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  double a = s_lo + (s_hi - s_lo) * std::max(0, best - 1) / kGrid;
  double b = s_lo + (s_hi - s_lo) * std::min(kGrid, best + 1) / kGrid;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = L(x1), f2 = L(x2);
  for (int it = 0; it < 200 && b - a > 1e-14 * std::max(1.0, std::abs(a)); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = L(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = L(x2);
    }
  }
  double s_best = f1 <= f2 ? x1 : x2;
  double v_best = std::min(f1, f2);
  if (best_val < v_best) {
    s_best = s_lo + (s_hi - s_lo) * best / kGrid;
    v_best = best_val;
  }
  const double witness = std::clamp(std::exp(s_best), Q_lo.value_or(0.0), Q_hi);
  return {bound.value(), witness, balance_objective(C, D, witness)};
}

std::vector<BoundReport> ratio_study_vdc2(std::span<const double> As, std::span<const double> Ns,
                                          const Executor& exec) {
  std::vector<BoundReport> out;
  for (double A : As) {
    for (double N : Ns) {
      const double lambda = 2.0 * std::abs(A);
      const double observed = std::abs(eval_sum(single_variable(A, 2.0, N), exec));
      out.push_back(make_bound_report(observed, bound_vdc2(N, lambda), describe("vdc2", A, N, lambda)));
    }
  }
  return out;
}

std::vector<BoundReport> ratio_study_vdc3(std::span<const double> As, std::span<const double> Ns,
                                          const Executor& exec) {
  std::vector<BoundReport> out;
  for (double A : As) {
    for (double N : Ns) {
      const double lambda = 6.0 * std::abs(A);
      const double observed = std::abs(eval_sum(single_variable(A, 3.0, N), exec));
      out.push_back(make_bound_report(observed, bound_vdc3(N, lambda), describe("vdc3", A, N, lambda)));
    }
  }
  return out;
}

std::vector<BoundReport> ratio_study_kusmin_landau(std::uint64_t seed, std::size_t count,
                                                   const Executor& exec) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<BoundReport> out;
  while (out.size() < count) {
    const double N = std::floor(std::pow(10.0, 1.0 + 3.0 * unit(rng)));
    const double a = unit(rng);
    const double b = (unit(rng) - 0.5) * 0.4 / (4.0 * N);
    // f'(t) = a + 2bt on [N+1, 2N] is monotone; keep it between two integers.
    const double d1 = a + 2.0 * b * (N + 1), d2 = a + 2.0 * b * (2.0 * N);
    const double lo = std::min(d1, d2), hi = std::max(d1, d2);
    if (std::floor(lo) != std::floor(hi)) continue;
    const double lambda = std::min(lo - std::floor(lo), std::floor(lo) + 1.0 - hi);
    if (!(lambda > 1e-3)) continue;
    SumInstance s;
    s.phase.A = b;
    s.phase.exponents = {{0, 2.0}};
    s.phase.shift = a;
    s.ranges = {{N, true}};
    const double observed = std::abs(eval_sum(s, exec));
    std::ostringstream meta;
    meta.precision(6);
    meta << "kusmin-landau a=" << a << " b=" << b << " N=" << N << " lambda=" << lambda;
    out.push_back(make_bound_report(observed, bound_kusmin_landau(N, lambda), meta.str()));
  }
  return out;
}

std::vector<BoundReport> ratio_study_theorem3(std::uint64_t seed, std::size_t count,
                                              const Executor& exec) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<BoundReport> out;
  while (out.size() < count) {
    // Total size log-uniform in [10^2, 10^6], split randomly among M, M1, M2.
    const double log_total = std::log(1e2) + unit(rng) * (std::log(1e6) - std::log(1e2));
    double w[3] = {unit(rng) + 0.05, unit(rng) + 0.05, unit(rng) + 0.05};
    const double wsum = w[0] + w[1] + w[2];
    double sizes[3];
    for (int i = 0; i < 3; ++i) sizes[i] = std::max(1.0, std::floor(std::exp(log_total * w[i] / wsum)));
    if (sizes[0] * sizes[1] * sizes[2] > 1e6) continue;
    const double alpha = 0.3 + 2.4 * unit(rng);
    if (std::abs(alpha - 1.0) < 0.05 || std::abs(alpha - 2.0) < 0.05) continue;
    auto signed_exp = [&] {
      const double v = 0.2 + 1.3 * unit(rng);
      return unit(rng) < 0.5 ? -v : v;
    };
    const double beta = signed_exp(), gam = signed_exp();
    const double A = std::pow(10.0, 2.0 * unit(rng)) * (unit(rng) < 0.5 ? -1.0 : 1.0);
    const std::uint64_t coeff_seed = rng();

    SumInstance s;
    s.phase.A = A;
    s.phase.exponents = {{0, alpha}, {1, beta}, {2, gam}};
    s.ranges = {{sizes[0], true}, {sizes[1], true}, {sizes[2], true}};
    s.seed = coeff_seed;
    // a(m) on the first variable, b(m1, m2) as a product of unit weights.
    s.coefficients = {seeded_unit_coefficient(coeff_seed, 0), seeded_unit_coefficient(coeff_seed, 1),
                      seeded_unit_coefficient(coeff_seed, 2)};

    const double M = sizes[0], N = sizes[1] * sizes[2];
    const double F = std::abs(A) * std::pow(M, alpha) * std::pow(sizes[1], beta) * std::pow(sizes[2], gam);
    const double normalizer = std::pow(M * N, kTrilinearEpsilon) * bound_theorem3(M, N, F);
    const double observed = std::abs(eval_sum(s, exec));
    std::ostringstream meta;
    meta.precision(6);
    meta << "theorem3 M=" << M << " M1=" << sizes[1] << " M2=" << sizes[2] << " alpha=" << alpha
         << " beta=" << beta << " gamma=" << gam << " A=" << A << " F=" << F;
    out.push_back(make_bound_report(observed, normalizer, meta.str()));
  }
  return out;
}

std::vector<BalanceCase> balance_corpus(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, 4);
  auto terms = [&] {
    std::vector<PowerTerm> out(static_cast<std::size_t>(size(rng)));
    for (auto& t : out) t = {std::pow(10.0, -3.0 + 6.0 * unit(rng)), 0.1 + 2.9 * unit(rng)};
    return out;
  };
  std::vector<BalanceCase> out;
  for (std::size_t i = 0; i < count; ++i) {
    BalanceCase c;
    c.C = terms();
    c.D = terms();
    c.Q_hi = std::pow(10.0, 6.0 * unit(rng));
    if (unit(rng) < 0.5) c.Q_lo = c.Q_hi * std::pow(10.0, -6.0 * unit(rng));
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace pslab
