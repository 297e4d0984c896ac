#pragma once

// Exact rational exponent-pair calculus and the piecewise-linear exponent
// functions for the largest prime factor of floor(n^c).

#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace pslab {

/// Reduced fraction with positive denominator (GMP keeps mpq_class canonical).
class Rational {
 public:
  Rational() = default;
  Rational(long num) : v_(num) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  /// Parses "p/q" or an integer.
  static Rational parse(std::string_view text);
  /// Exact value of a finite decimal such as "0.7039".
  static Rational from_decimal(std::string_view text);

  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }
  const mpq_class& raw() const { return v_; }
  double to_double() const { return v_.get_d(); }
  bool is_integer() const { return v_.get_den() == 1; }

  /// "p/q" (or "p" for integers).
  std::string str() const;
  /// Decimal with `digits` significant digits after the point.
  std::string decimal(int digits = 10) const;
  /// "p/q (= d.dddddddddd)"
  std::string render() const;

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ + b.v_)); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ - b.v_)); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ * b.v_)); }
  friend Rational operator/(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }
  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }

 private:
  mpq_class v_;
};

/// (kappa, lambda) with 0 <= kappa <= 1/2 <= lambda <= 1.
struct ExpPair {
  Rational kappa;
  Rational lambda;

  bool in_box() const;
  /// Both coordinates over their least common denominator: "a/D b/D".
  std::string str() const;

  friend bool operator==(const ExpPair&, const ExpPair&) = default;
};

/// A(k, l) = (k / (2k + 2), (k + l + 1) / (2k + 2)).
ExpPair a_process(const ExpPair& p);
/// B(k, l) = (l - 1/2, k + 1/2); requires l >= 1/2.
ExpPair b_process(const ExpPair& p);
/// Applies a word over {A, B} right to left ("BAAAA" = B after four A's).
ExpPair apply_processes(std::string_view ops, ExpPair p);

/// One linear piece (a - b c) / d of a piecewise exponent function.
struct LinearForm {
  long a, b, d;
  Rational at(const Rational& c) const;
  std::string str() const;
};

struct ThetaPiece {
  Rational lo;
  Rational hi;
  bool hi_closed;
  LinearForm form;
};

/// Pieces of theta on [243/205, 2), ordered by c.
const std::vector<ThetaPiece>& theta_pieces();
/// Interior breakpoints of theta (six of them).
std::vector<Rational> theta_breakpoints();

Rational theta(const Rational& c);
/// Minimum of the nine forms arising on [112/87, 160/117).
Rational theta1(const Rational& c);
/// Minimum of the eight forms arising on [160/117, 5/3).
Rational theta2(const Rational& c);
const std::vector<LinearForm>& theta1_forms();
const std::vector<LinearForm>& theta2_forms();
/// (3 - c)/6 on [5/3, 2), beta / c^2 beyond 2; integers rejected.
Rational theta3(const Rational& c, const Rational& beta);

/// 1 + (1 - lambda) / (2 + kappa): the smooth-values range c < threshold.
Rational derive_c_threshold_sv(const ExpPair& p);
/// min{7/4, 19/11, 149/87, 12/7, 85/49, 163/95, 71/39}.
Rational prop41_threshold();
const std::vector<Rational>& prop41_candidates();
/// Largest c for which E(-17/39 + 6 gamma/13) + gamma - 1 > 0 can hold:
/// 39 (13 + 6E) / (13 (39 + 17E)).
Rational carmichael_threshold(const Rational& E);

}  // namespace pslab
