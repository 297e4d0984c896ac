#include "pslab/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "pslab/arith.hpp"
#include "pslab/carmichael.hpp"
#include "pslab/error.hpp"
#include "pslab/experiments.hpp"
#include "pslab/exppairs.hpp"
#include "pslab/expsum.hpp"
#include "pslab/psprimes.hpp"
#include "pslab/pscore.hpp"
#include "pslab/report.hpp"
#include "pslab/sawtooth.hpp"

namespace pslab::cli {

namespace {

struct Globals {
  unsigned threads = 1;
  std::string format = "csv";
  std::string output;
  std::uint64_t seed = 1;
  bool timing = false;
};

unsigned default_threads() {
  if (const char* env = std::getenv("PSLAB_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

BigInt parse_big(const std::string& s, const char* what) {
  BigInt v;
  if (s.empty() || v.set_str(s, 10) != 0) throw ValidationError(std::string(what) + ": not an integer: " + s);
  return v;
}

Weight named_weight(const std::string& name) {
  if (name == "one") return [](std::uint64_t) { return 1.0; };
  if (name == "zero") return [](std::uint64_t) { return 0.0; };
  if (name == "prime") return [](std::uint64_t m) { return is_prime(m) ? 1.0 : 0.0; };
  if (name == "log") return [](std::uint64_t m) { return m > 1 ? std::log(static_cast<double>(m)) : 0.0; };
  throw ValidationError("unknown weight '" + name + "' (one, zero, prime, log)");
}

// Writes to the --output file when given, else to `out`.
class Sink {
 public:
  Sink(const Globals& g, std::ostream& out) : out_(&out) {
    if (!g.output.empty()) {
      file_ = std::make_unique<std::ofstream>(g.output, std::ios::binary);
      if (!*file_) throw std::runtime_error("cannot open output file " + g.output);
      out_ = file_.get();
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ostream* out_;
  std::unique_ptr<std::ofstream> file_;
};

using SeriesFn = std::function<PlotSeries(const std::vector<ExperimentReport>&)>;

void emit_reports(std::vector<ExperimentReport>& rows, const Globals& g, std::ostream& out,
                  const SeriesFn& series) {
  if (!g.timing) {
    for (auto& r : rows) r.runtime_ms = 0;
  }
  Sink sink(g, out);
  if (g.format == "csv") {
    write_csv(rows, sink.stream());
  } else if (g.format == "json") {
    write_json(rows, sink.stream());
  } else {
    emit_plot_data(series(rows), sink.stream());
  }
}

SeriesFn by_param(const std::string& key) {
  return [key](const std::vector<ExperimentReport>& rows) { return ratio_series(rows, key); };
}

std::vector<ExponentC> parse_cs(const std::vector<std::string>& cs) {
  std::vector<ExponentC> out;
  for (const auto& s : cs) out.push_back(ExponentC::parse(s));
  return out;
}

ExpPair parse_pair(const std::string& kappa, const std::string& lambda) {
  return {Rational::parse(kappa), Rational::parse(lambda)};
}

struct Context {
  Globals& g;
  std::ostream& out;
  std::function<void()> action;
  Executor exec() const { return Executor(g.threads); }
};

// ---- ps ----------------------------------------------------------------

void add_ps(CLI::App& app, Context& ctx) {
  auto* ps = app.add_subcommand("ps", "Exact arithmetic of the sequence floor(n^c)");
  ps->require_subcommand(1);

  auto n = std::make_shared<std::string>();
  auto c = std::make_shared<std::string>();
  auto* floor = ps->add_subcommand("floor", "floor(n^c) by exact integer roots");
  floor->add_option("--n", *n, "n >= 1 (arbitrary size)")->required();
  floor->add_option("--c", *c, "exponent p/q")->required();
  floor->callback([&ctx, n, c] {
    ctx.action = [&ctx, n, c] {
      const BigInt v = parse_big(*n, "--n");
      if (v < 1) throw ValidationError("--n must be >= 1");
      ctx.out << floor_pow(v, ExponentC::parse(*c)).get_str() << '\n';
    };
  });

  auto k = std::make_shared<std::string>();
  auto* isv = ps->add_subcommand("is-value", "Decide whether k = floor(n^c) for some n; prints the witness n");
  isv->add_option("--k", *k, "k >= 1")->required();
  isv->add_option("--c", *c, "exponent p/q")->required();
  isv->callback([&ctx, k, c] {
    ctx.action = [&ctx, k, c] {
      const BigInt v = parse_big(*k, "--k");
      if (v < 1) throw ValidationError("--k must be >= 1");
      const PsWitness w = is_ps_value(v, ExponentC::parse(*c));
      if (w.is_value()) {
        ctx.out << "yes " << w.n->get_str() << '\n';
      } else {
        ctx.out << "no\n";
      }
    };
  });

  auto lo = std::make_shared<std::string>();
  auto hi = std::make_shared<std::string>();
  auto* values = ps->add_subcommand("values", "All values floor(n^c) in [lo, hi] as 'k n' lines");
  values->add_option("--lo", *lo, "lower end >= 1")->required();
  values->add_option("--hi", *hi, "upper end")->required();
  values->add_option("--c", *c, "exponent p/q")->required();
  values->callback([&ctx, lo, hi, c] {
    ctx.action = [&ctx, lo, hi, c] {
      const BigInt a = parse_big(*lo, "--lo"), b = parse_big(*hi, "--hi");
      if (b - a > 10'000'000) throw GuardError("ps values: range wider than 10^7");
      for (const auto& w : ps_values_in(a, b, ExponentC::parse(*c))) {
        ctx.out << w.k.get_str() << ' ' << w.n->get_str() << '\n';
      }
    };
  });

  auto K = std::make_shared<std::uint64_t>(0);
  auto weight = std::make_shared<std::string>("one");
  auto* l2 = ps->add_subcommand(
      "decompose", "Counting PS values k <= K through the sawtooth: main term, correction, exact sum");
  l2->add_option("--K", *K, "upper end K")->required();
  l2->add_option("--c", *c, "exponent p/q")->required();
  l2->add_option("--weight", *weight, "z_k: one, zero, prime or log");
  l2->callback([&ctx, K, c, weight] {
    ctx.action = [&ctx, K, c, weight] {
      const DecompositionTerms t = lemma2_decomposition(*K, ExponentC::parse(*c), named_weight(*weight), ctx.exec());
      ctx.out << "main " << format_double(t.main) << "\ncorrection " << format_double(t.correction)
              << "\nexact " << format_double(t.exact) << '\n';
    };
  });
}

// ---- pairs ---------------------------------------------------------------

void add_pairs(CLI::App& app, Context& ctx) {
  auto* pairs = app.add_subcommand("pairs", "Exact exponent-pair calculus and the largest-prime-factor exponent table");
  pairs->require_subcommand(1);
  auto kappa = std::make_shared<std::string>();
  auto lambda = std::make_shared<std::string>();
  auto ops = std::make_shared<std::string>();
  auto c = std::make_shared<std::string>();

  auto* chain = pairs->add_subcommand("chain", "Apply a word of A and B processes (right to left) to a pair");
  chain->add_option("--ops", *ops, "word over {A, B}, e.g. BAAAA")->required();
  chain->add_option("--kappa", *kappa, "kappa as p/q")->required();
  chain->add_option("--lambda", *lambda, "lambda as p/q")->required();
  chain->callback([&ctx, ops, kappa, lambda] {
    ctx.action = [&ctx, ops, kappa, lambda] {
      ctx.out << apply_processes(*ops, parse_pair(*kappa, *lambda)).str() << '\n';
    };
  });

  const auto unary = [&](const char* name, const char* help, std::function<Rational(const Rational&)> f) {
    auto* sub = pairs->add_subcommand(name, help);
    sub->add_option("--c", *c, "c as p/q")->required();
    sub->callback([&ctx, c, f] { ctx.action = [&ctx, c, f] { ctx.out << f(Rational::parse(*c)).render() << '\n'; }; });
  };
  unary("theta", "Exponent theta(c) with P(floor(n^c)) > n^(theta - eps) infinitely often, c in [243/205, 2)",
        [](const Rational& v) { return theta(v); });
  unary("theta1", "Minimum of the nine linear forms used on [112/87, 160/117]",
        [](const Rational& v) { return theta1(v); });
  unary("theta2", "Minimum of the eight linear forms used on [160/117, 5/3)",
        [](const Rational& v) { return theta2(v); });

  auto beta = std::make_shared<std::string>("0");
  auto* t3 = pairs->add_subcommand("theta3", "Largest-prime-factor exponent for c >= 5/3: (3 - c)/6 or beta/c^2");
  t3->add_option("--c", *c, "c as p/q")->required();
  t3->add_option("--beta", *beta, "beta for c > 2 (rational)");
  t3->callback([&ctx, c, beta] {
    ctx.action = [&ctx, c, beta] { ctx.out << theta3(Rational::parse(*c), Rational::parse(*beta)).render() << '\n'; };
  });

  auto* sv = pairs->add_subcommand("threshold-sv",
                                   "Smooth-values range c < 1 + (1 - lambda)/(2 + kappa) from an exponent pair");
  sv->add_option("--kappa", *kappa, "kappa as p/q")->required();
  sv->add_option("--lambda", *lambda, "lambda as p/q")->required();
  sv->callback([&ctx, kappa, lambda] {
    ctx.action = [&ctx, kappa, lambda] {
      ctx.out << derive_c_threshold_sv(parse_pair(*kappa, *lambda)).render() << '\n';
    };
  });

  auto* p41 = pairs->add_subcommand("prop41", "Range of c for the square-divisor sum asymptotic (minimum of seven candidates)");
  p41->callback([&ctx] {
    ctx.action = [&ctx] {
      for (const auto& r : prop41_candidates()) ctx.out << "candidate " << r.render() << '\n';
      ctx.out << "threshold " << prop41_threshold().render() << '\n';
    };
  });

  auto E = std::make_shared<std::string>("7039/10000");
  auto* carm = pairs->add_subcommand(
      "carmichael", "Largest c for which Carmichael numbers built from PS primes are produced, given E in (0, 1]");
  carm->add_option("--E", *E, "E as p/q or a finite decimal");
  carm->callback([&ctx, E] {
    ctx.action = [&ctx, E] {
      const Rational t = carmichael_threshold(Rational::parse(*E));
      ctx.out << t.render() << '\n';
      ctx.out << "exceeds 147/145: " << (t > Rational(147, 145) ? "yes" : "no") << '\n';
    };
  });

  auto samples = std::make_shared<std::uint64_t>(100);
  auto* table = pairs->add_subcommand("table", "Sample theta(c) on an even rational grid over [243/205, 2); TSV plot data");
  table->add_option("--samples", *samples, "number of sample points");
  table->callback([&ctx, samples] {
    ctx.action = [&ctx, samples] {
      if (*samples < 1 || *samples > 1'000'000) throw ValidationError("--samples must lie in [1, 10^6]");
      const Rational lo(243, 205), hi(2);
      const Rational step = (hi - lo) / Rational(static_cast<long>(*samples));
      PlotSeries s{"theta(c) sampled on [243/205, 2)", {"c", "theta"}, {}};
      for (std::uint64_t i = 0; i < *samples; ++i) {
        const Rational x = lo + step * Rational(static_cast<long>(i));
        s.rows.push_back({x.to_double(), theta(x).to_double()});
      }
      Sink sink(ctx.g, ctx.out);
      emit_plot_data(s, sink.stream());
    };
  });
}

// ---- experiment ------------------------------------------------------------

struct ExperimentArgs {
  std::vector<std::uint64_t> x;
  std::vector<std::string> c;
};

void add_x_c(CLI::App* sub, ExperimentArgs& a, const char* xname = "--x") {
  sub->add_option(xname, a.x, "range end(s); several values give a series")->required();
  sub->add_option("--c", a.c, "exponent(s) p/q")->required();
}

template <typename F>
std::vector<ExperimentReport> over_grid(const ExperimentArgs& a, F&& f) {
  std::vector<ExperimentReport> rows;
  for (const auto& c : parse_cs(a.c)) {
    for (const std::uint64_t x : a.x) f(rows, x, c);
  }
  return rows;
}

PlotSeries deciles_series(const std::vector<ExperimentReport>& rows) {
  PlotSeries s{"largest prime factor exponent deciles", {"c"}, {}};
  for (int k = 1; k <= 9; ++k) s.columns.push_back("d" + std::to_string(10 * k));
  for (const auto& r : rows) {
    std::vector<double> row = {static_cast<double>(ExponentC::parse(r.params.at("c").get<std::string>()).value())};
    for (const auto& v : r.extra.at("deciles")) row.push_back(v.get<double>());
    row.resize(10, 0.0);
    s.rows.push_back(row);
  }
  return s;
}

double default_theta(const ExponentC& c) {
  const Rational rc(static_cast<long>(c.p()), static_cast<long>(c.q()));
  if (rc < Rational(243, 205)) return 2.0 - rc.to_double();
  if (rc < Rational(2)) return theta(rc).to_double();
  return theta3(rc, Rational(0)).to_double();
}

void add_experiment(CLI::App& app, Context& ctx) {
  auto* ex = app.add_subcommand("experiment", "Empirical statistics of floor(n^c) over n <= x");
  ex->require_subcommand(1);

  auto a = std::make_shared<ExperimentArgs>();
  auto eps = std::make_shared<double>(0.5);
  auto theta_opt = std::make_shared<std::optional<double>>();
  auto theta_eps = std::make_shared<double>(0.05);

  auto* sf = ex->add_subcommand("squarefree", "Density of squarefree values against 6/pi^2 (valid for c < 149/87)");
  add_x_c(sf, *a);
  sf->callback([&ctx, a] {
    ctx.action = [&ctx, a] {
      auto rows = over_grid(*a, [&](auto& out, std::uint64_t x, const ExponentC& c) {
        out.push_back(squarefree_density(x, c, ctx.exec()));
      });
      emit_reports(rows, ctx.g, ctx.out, by_param("x"));
    };
  });

  auto* ch = ex->add_subcommand("chebyshev", "Sum of log p over primes dividing floor(n^c), against c x (log x - 1)");
  add_x_c(ch, *a);
  ch->callback([&ctx, a] {
    ctx.action = [&ctx, a] {
      auto rows = over_grid(*a, [&](auto& out, std::uint64_t x, const ExponentC& c) {
        out.push_back(chebyshev_sum(x, c, ctx.exec()));
      });
      emit_reports(rows, ctx.g, ctx.out, by_param("x"));
    };
  });

  auto* sm = ex->add_subcommand("smooth", "Count of n with P(floor(n^c)) <= n^eps, against x^(1 - eps)");
  add_x_c(sm, *a);
  sm->add_option("--eps", *eps, "eps in (0, 1]");
  sm->callback([&ctx, a, eps] {
    ctx.action = [&ctx, a, eps] {
      auto rows = over_grid(*a, [&](auto& out, std::uint64_t x, const ExponentC& c) {
        out.push_back(smooth_count(x, c, *eps, ctx.exec()));
      });
      emit_reports(rows, ctx.g, ctx.out, by_param("x"));
    };
  });

  auto* lp = ex->add_subcommand(
      "large-pf", "Count of n with P(floor(n^c)) > n^(theta - eps); TSV output gives exponent deciles against c");
  add_x_c(lp, *a);
  lp->add_option("--theta", *theta_opt, "theta (default: the tabulated theta(c))");
  lp->add_option("--eps", *theta_eps, "eps");
  lp->callback([&ctx, a, theta_opt, theta_eps] {
    ctx.action = [&ctx, a, theta_opt, theta_eps] {
      auto rows = over_grid(*a, [&](auto& out, std::uint64_t x, const ExponentC& c) {
        out.push_back(large_pf_exceed(x, c, theta_opt->value_or(default_theta(c)), *theta_eps, ctx.exec()));
      });
      emit_reports(rows, ctx.g, ctx.out, deciles_series);
    };
  });

  auto smooth_eps = std::make_shared<double>(0.5);
  auto* fs = ex->add_subcommand("factor-suite",
                                "Squarefree, Chebyshev, smooth and large-prime-factor statistics in one factorization pass");
  add_x_c(fs, *a);
  fs->add_option("--smooth-eps", *smooth_eps, "eps for the smooth count");
  fs->add_option("--theta", *theta_opt, "theta (default: the tabulated theta(c))");
  fs->add_option("--eps", *theta_eps, "eps for the large-prime-factor count");
  fs->callback([&ctx, a, smooth_eps, theta_opt, theta_eps] {
    ctx.action = [&ctx, a, smooth_eps, theta_opt, theta_eps] {
      auto rows = over_grid(*a, [&](auto& out, std::uint64_t x, const ExponentC& c) {
        for (auto& r : factor_suite(x, c, *smooth_eps, theta_opt->value_or(default_theta(c)), *theta_eps, ctx.exec())) {
          out.push_back(std::move(r));
        }
      });
      emit_reports(rows, ctx.g, ctx.out, [](const std::vector<ExperimentReport>& rs) {
        PlotSeries s{"factor statistics ratios", {"x", "squarefree", "chebyshev", "smooth", "large-pf"}, {}};
        for (std::size_t i = 0; i + 3 < rs.size(); i += 4) {
          s.rows.push_back({rs[i].params.at("x").get<double>(), rs[i].ratio, rs[i + 1].ratio, rs[i + 2].ratio,
                            rs[i + 3].ratio});
        }
        return s;
      });
    };
  });

  auto D = std::make_shared<std::uint64_t>(2);
  auto weight = std::make_shared<std::string>("one");
  auto* sd = ex->add_subcommand("square-divisor",
                                "Weighted count of d^2 | floor(n^c) over d in (D, 2D] against x sum z_d / d^2");
  add_x_c(sd, *a);
  sd->add_option("--D", *D, "dyadic parameter D");
  sd->add_option("--weight", *weight, "z_d: one, zero, prime or log");
  sd->callback([&ctx, a, D, weight] {
    ctx.action = [&ctx, a, D, weight] {
      const Weight z = named_weight(*weight);
      auto rows = over_grid(*a, [&](auto& out, std::uint64_t x, const ExponentC& c) {
        const SquareDivisorSums s = square_divisor_sum(x, c, *D, z, ctx.exec());
        ExperimentReport r;
        r.experiment = "square-divisor";
        r.params["x"] = x;
        r.params["c"] = c.str();
        r.params["D"] = *D;
        r.params["weight"] = *weight;
        r.observed = s.lhs;
        r.reference = s.rhs;
        r.set_ratio();
        out.push_back(r);
      });
      emit_reports(rows, ctx.g, ctx.out, by_param("x"));
    };
  });

  auto q = std::make_shared<std::uint64_t>(7);
  auto residue = std::make_shared<std::optional<std::uint64_t>>();
  auto* rs = ex->add_subcommand("residue", "Distribution of floor(n^c) mod q over n in (N, 2N], against N/q");
  add_x_c(rs, *a, "--N");
  rs->add_option("--q", *q, "modulus");
  rs->add_option("--a", *residue, "a single residue (default: all residues)");
  rs->callback([&ctx, a, q, residue] {
    ctx.action = [&ctx, a, q, residue] {
      auto rows = over_grid(*a, [&](auto& out, std::uint64_t N, const ExponentC& c) {
        if (*residue) {
          out.push_back(residue_equidistribution(N, c, *q, **residue, ctx.exec()));
          return;
        }
        for (auto& r : residue_equidistribution_all(N, c, *q, ctx.exec())) out.push_back(std::move(r));
      });
      for (auto& r : rows) r.extra.erase("histogram");
      emit_reports(rows, ctx.g, ctx.out, by_param("a"));
    };
  });

  auto* cv = ex->add_subcommand("convolution",
                                "Sum over n <= x of weighted factorizations floor(n^c) = k l with (k, l) in a dyadic box");
  add_x_c(cv, *a);
  cv->add_option("--weight", *weight, "a_k: one, zero, prime or log");
  cv->callback([&ctx, a, weight] {
    ctx.action = [&ctx, a, weight] {
      const Weight w = named_weight(*weight);
      auto rows = over_grid(*a, [&](auto& out, std::uint64_t x, const ExponentC& c) {
        const ConvolutionBox box = convolution_box(x, c);
        ExperimentReport r;
        r.experiment = "convolution";
        r.params["x"] = x;
        r.params["c"] = c.str();
        r.params["weight"] = *weight;
        r.params["K"] = box.K;
        r.params["L"] = box.L;
        r.observed = convolution_count(x, c, w, ctx.exec());
        r.reference = static_cast<double>(x);
        r.set_ratio();
        out.push_back(r);
      });
      emit_reports(rows, ctx.g, ctx.out, by_param("x"));
    };
  });
}

// ---- primes ------------------------------------------------------------

void add_primes(CLI::App& app, Context& ctx) {
  auto* primes = app.add_subcommand("primes", "Piatetski-Shapiro primes in arithmetic progressions");
  primes->require_subcommand(1);
  auto x = std::make_shared<std::uint64_t>(0);
  auto d = std::make_shared<std::uint64_t>(1);
  auto a = std::make_shared<std::int64_t>(0);
  auto c = std::make_shared<std::string>();
  auto list = std::make_shared<bool>(false);

  auto* ap = primes->add_subcommand(
      "ap", "Count of PS primes p <= x, p = a (mod d), against the main term of their asymptotic");
  ap->add_option("--x", *x, "x >= 2")->required();
  ap->add_option("--d", *d, "modulus d");
  ap->add_option("--a", *a, "residue a, coprime to d");
  ap->add_option("--c", *c, "exponent p/q")->required();
  ap->add_flag("--list", *list, "print the primes instead of a report row");
  ap->callback([&ctx, x, d, a, c, list] {
    ctx.action = [&ctx, x, d, a, c, list] {
      const ApQuery q{*x, *d, *a, ExponentC::parse(*c)};
      q.validate();
      const auto ps = ps_primes_ap(q, ctx.exec());
      if (*list) {
        for (std::size_t i = 0; i < ps.size(); ++i) ctx.out << (i ? " " : "") << ps[i];
        ctx.out << '\n';
        return;
      }
      ExperimentReport r;
      r.experiment = "pi_c_ap";
      r.params["x"] = *x;
      r.params["d"] = *d;
      r.params["a"] = *a;
      r.params["c"] = q.c.str();
      r.observed = static_cast<double>(ps.size());
      r.reference = thm9_main_term(q);
      r.set_ratio();
      std::vector<ExperimentReport> rows{r};
      emit_reports(rows, ctx.g, ctx.out, by_param("x"));
    };
  });

  auto ds = std::make_shared<std::vector<std::uint64_t>>();
  auto* bt = primes->add_subcommand(
      "bt", "Empirical constant C in pi_c(x; d, a) <= C x^gamma / (phi(d) log x), over all residues a coprime to d");
  bt->add_option("--x", *x, "x >= 2")->required();
  bt->add_option("--d", *ds, "moduli")->required();
  bt->add_option("--c", *c, "exponent p/q")->required();
  bt->callback([&ctx, x, ds, c] {
    ctx.action = [&ctx, x, ds, c] {
      const ExponentC ec = ExponentC::parse(*c);
      std::vector<ExperimentReport> rows;
      for (const std::uint64_t d : *ds) {
        for (std::uint64_t a = 0; a < d; ++a) {
          if (std::gcd(a, d) != 1) continue;
          const ApQuery q{*x, d, static_cast<std::int64_t>(a), ec};
          q.validate();
          ExperimentReport r;
          r.experiment = "brun-titchmarsh";
          r.params["x"] = *x;
          r.params["d"] = d;
          r.params["a"] = a;
          r.params["c"] = ec.str();
          r.observed = static_cast<double>(pi_c_ap(q, ctx.exec()));
          r.reference = std::pow(static_cast<double>(*x), static_cast<double>(ec.gamma())) /
                        (static_cast<double>(euler_phi(d)) * std::log(static_cast<double>(*x)));
          r.set_ratio();
          rows.push_back(r);
        }
      }
      emit_reports(rows, ctx.g, ctx.out, by_param("d"));
    };
  });
}

// ---- carmichael ----------------------------------------------------------

void add_carmichael(CLI::App& app, Context& ctx) {
  auto* carm = app.add_subcommand("carmichael", "Carmichael numbers composed of Piatetski-Shapiro primes");
  carm->require_subcommand(1);
  auto limit = std::make_shared<std::uint64_t>(0);
  auto c = std::make_shared<std::string>();
  auto no_filter = std::make_shared<bool>(false);
  auto* search = carm->add_subcommand("search", "All Carmichael numbers <= limit whose prime factors are PS values (JSON lines)");
  search->add_option("--limit", *limit, "search limit <= 10^9")->required();
  search->add_option("--c", *c, "exponent p/q")->required();
  search->add_flag("--no-filter", *no_filter, "keep every Carmichael number, with per-prime PS status");
  search->callback([&ctx, limit, c, no_filter] {
    ctx.action = [&ctx, limit, c, no_filter] {
      const ExponentC ec = ExponentC::parse(*c);
      Sink sink(ctx.g, ctx.out);
      for (const auto& r : search_ps_carmichael(*limit, ec, !*no_filter, ctx.exec())) {
        sink.stream() << to_json_line(r, ec) << '\n';
      }
    };
  });

  auto N = std::make_shared<std::string>();
  auto* check = carm->add_subcommand("check", "Korselt test of N and PS membership of its prime factors");
  check->add_option("--N", *N, "N >= 2")->required();
  check->add_option("--c", *c, "exponent p/q")->required();
  check->callback([&ctx, N, c] {
    ctx.action = [&ctx, N, c] {
      const ExponentC ec = ExponentC::parse(*c);
      const auto r = carmichael_record(parse_big(*N, "--N"), ec);
      if (!r) {
        ctx.out << "not a Carmichael number\n";
        return;
      }
      ctx.out << to_json_line(*r, ec) << '\n';
    };
  });
}

// ---- expsum ------------------------------------------------------------

void add_expsum(CLI::App& app, Context& ctx) {
  auto* es = app.add_subcommand("expsum", "Direct evaluation of exponential sums against their bounds");
  es->require_subcommand(1);
  auto path = std::make_shared<std::string>();
  auto* ev = es->add_subcommand("eval", "Evaluate a sum instance given as JSON; prints re, im, |S|");
  ev->add_option("--instance", *path, "JSON file")->required()->check(CLI::ExistingFile);
  ev->callback([&ctx, path] {
    ctx.action = [&ctx, path] {
      std::ifstream in(*path);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("instance: ") + e.what());
      }
      const auto s = eval_sum(sum_instance_from_json(j), ctx.exec());
      ctx.out << format_double(s.real()) << ' ' << format_double(s.imag()) << ' ' << format_double(std::abs(s))
              << '\n';
    };
  });

  auto kind = std::make_shared<std::string>();
  auto count = std::make_shared<std::size_t>(20);
  auto As = std::make_shared<std::vector<double>>(std::vector<double>{1e-3, 1e-2});
  auto Ns = std::make_shared<std::vector<double>>(std::vector<double>{100, 1000});
  auto* bd = es->add_subcommand(
      "bound",
      "Ratio |S| / bound for second- and third-derivative tests, Kusmin-Landau and the trilinear sum bound");
  bd->add_option("--kind", *kind, "vdc2, vdc3, kusmin-landau or trilinear")
      ->required()
      ->check(CLI::IsMember({"vdc2", "vdc3", "kusmin-landau", "trilinear"}));
  bd->add_option("--count", *count, "corpus size for randomized kinds");
  bd->add_option("--A", *As, "amplitudes for vdc2/vdc3");
  bd->add_option("--N", *Ns, "lengths for vdc2/vdc3");
  bd->callback([&ctx, kind, count, As, Ns] {
    ctx.action = [&ctx, kind, count, As, Ns] {
      std::vector<BoundReport> reports;
      if (*kind == "vdc2") {
        reports = ratio_study_vdc2(*As, *Ns, ctx.exec());
      } else if (*kind == "vdc3") {
        reports = ratio_study_vdc3(*As, *Ns, ctx.exec());
      } else if (*kind == "kusmin-landau") {
        reports = ratio_study_kusmin_landau(ctx.g.seed, *count, ctx.exec());
      } else {
        reports = ratio_study_theorem3(ctx.g.seed, *count, ctx.exec());
      }
      std::vector<ExperimentReport> rows;
      std::size_t i = 0;
      for (const auto& b : reports) {
        ExperimentReport r;
        r.experiment = "bound-" + *kind;
        r.params["index"] = i++;
        r.params["instance"] = b.meta;
        r.observed = b.observed;
        r.reference = b.bound;
        r.ratio = b.ratio;
        rows.push_back(r);
      }
      emit_reports(rows, ctx.g, ctx.out, by_param("index"));
    };
  });
}

// ---- sawtooth ------------------------------------------------------------

void add_sawtooth(CLI::App& app, Context& ctx) {
  auto* st = app.add_subcommand("sawtooth", "The sawtooth function, its trigonometric approximation and discrepancy");
  st->require_subcommand(1);
  auto H = std::make_shared<std::uint64_t>(10);
  auto grid = std::make_shared<std::uint64_t>(100'000);
  auto* va = st->add_subcommand(
      "vaaler", "Worst slack of |psi(t) - approximation| <= majorant on a uniform grid of t in [0, 1)");
  va->add_option("--H", *H, "degree H");
  va->add_option("--grid", *grid, "number of grid points");
  va->callback([&ctx, H, grid] {
    ctx.action = [&ctx, H, grid] {
      if (*grid < 1 || *grid > 10'000'000) throw ValidationError("--grid must lie in [1, 10^7]");
      const VaalerKernel v(*H);
      double worst = -1e300;
      double worst_t = 0.0;
      for (std::uint64_t i = 0; i < *grid; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(*grid);
        const double gap = std::abs(psi(t) - v.approx(t)) - v.majorant(t);
        if (gap > worst) {
          worst = gap;
          worst_t = t;
        }
      }
      ctx.out << "max_gap " << format_double(worst) << " at_t " << format_double(worst_t) << '\n';
    };
  });

  auto K = std::make_shared<std::uint64_t>(10'000);
  auto* di = st->add_subcommand(
      "discrepancy", "Discrepancy of {k sqrt 2}, k <= K, against the explicit Erdos-Turan bound, per beta");
  di->add_option("--K", *K, "number of points");
  di->add_option("--H", *H, "truncation H");
  di->add_option("--grid", *grid, "number of beta values");
  di->callback([&ctx, K, H, grid] {
    ctx.action = [&ctx, K, H, grid] {
      if (*K < 1 || *K > 10'000'000) throw ValidationError("--K must lie in [1, 10^7]");
      if (*grid < 1 || *grid > 100'000) throw ValidationError("--grid must lie in [1, 10^5]");
      std::vector<double> pts(*K);
      const long double r2 = std::sqrt(2.0L);
      for (std::uint64_t k = 1; k <= *K; ++k) {
        const long double v = static_cast<long double>(k) * r2;
        pts[k - 1] = static_cast<double>(v - std::floor(v));
      }
      const double rhs = erdos_turan_rhs(pts, *H);
      std::vector<ExperimentReport> rows;
      for (std::uint64_t i = 0; i < *grid; ++i) {
        const double beta = static_cast<double>(i + 1) / static_cast<double>(*grid + 1);
        ExperimentReport r;
        r.experiment = "erdos-turan";
        r.params["K"] = *K;
        r.params["H"] = *H;
        r.params["beta"] = beta;
        r.observed = std::abs(discrepancy_lhs(pts, beta));
        r.reference = rhs;
        r.set_ratio();
        rows.push_back(r);
      }
      emit_reports(rows, ctx.g, ctx.out, by_param("beta"));
    };
  });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Globals g;
  g.threads = default_threads();
  Context ctx{g, out, {}};

  CLI::App app{"Exact arithmetic and experiments for floor(n^c), c = p/q > 1", "pslab"};
  app.require_subcommand(1);
  app.add_option("--threads", g.threads, "worker threads (default: $PSLAB_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "csv, json or tsv-plot")->check(CLI::IsMember({"csv", "json", "tsv-plot"}));
  app.add_option("--output", g.output, "write results to this file");
  app.add_option("--seed", g.seed, "seed for randomized corpora");
  app.add_flag("--timing", g.timing, "report runtime_ms (otherwise 0, keeping output reproducible)");
  app.fallthrough();

  add_ps(app, ctx);
  add_pairs(app, ctx);
  add_experiment(app, ctx);
  add_primes(app, ctx);
  add_carmichael(app, ctx);
  add_expsum(app, ctx);
  add_sawtooth(app, ctx);
  for (auto* sub : app.get_subcommands({})) {
    sub->fallthrough();
    for (auto* leaf : sub->get_subcommands({})) leaf->fallthrough();
  }

  std::vector<std::string> argv_store{"pslab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (!ctx.action) throw ValidationError("no command given");
    ctx.action();
    out.flush();
    return kOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const GuardError& e) {
    err << "guard: " << e.what() << '\n';
    return kGuard;
  } catch (const RouteDisagreement& e) {
    err << "internal: " << e.what() << '\n';
    return kRouteDisagreement;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace pslab::cli
