#include "pslab/exppairs.hpp"

#include <algorithm>
#include <cctype>

#include "pslab/error.hpp"

namespace pslab {

Rational::Rational(long num, long den) {
  if (den == 0) throw ValidationError("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.v_ == 0) throw ValidationError("division by zero rational");
  return Rational(mpq_class(a.v_ / b.v_));
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  const auto valid = [](const std::string& part) {
    if (part.empty()) return false;
    std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (i == part.size()) return false;
    return std::all_of(part.begin() + static_cast<long>(i), part.end(),
                       [](unsigned char ch) { return std::isdigit(ch) != 0; });
  };
  const auto slash = s.find('/');
  if (slash == std::string::npos) {
    if (s.find('.') != std::string::npos) return from_decimal(s);
    if (!valid(s)) throw ValidationError("malformed rational '" + s + "'");
    return Rational(mpq_class(mpz_class(s.front() == '+' ? s.substr(1) : s, 10)));
  }
  const std::string num = s.substr(0, slash), den = s.substr(slash + 1);
  if (!valid(num) || !valid(den)) throw ValidationError("malformed rational '" + s + "'");
  mpz_class d(den.front() == '+' ? den.substr(1) : den, 10);
  if (d == 0) throw ValidationError("rational with zero denominator");
  return Rational(mpq_class(mpz_class(num.front() == '+' ? num.substr(1) : num, 10), d));
}

Rational Rational::from_decimal(std::string_view text) {
  std::string s(text);
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.erase(0, 1);
  }
  const auto dot = s.find('.');
  std::string digits = dot == std::string::npos ? s : s.substr(0, dot) + s.substr(dot + 1);
  const std::size_t scale = dot == std::string::npos ? 0 : s.size() - dot - 1;
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](unsigned char ch) { return std::isdigit(ch) != 0; })) {
    throw ValidationError("malformed decimal '" + std::string(text) + "'");
  }
  mpz_class num(digits, 10), den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, scale);
  if (negative) num = -num;
  return Rational(mpq_class(num, den));
}

std::string Rational::str() const {
  if (is_integer()) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::string Rational::decimal(int digits) const {
  // Round half away from zero at `digits` places, exactly.
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  const mpz_class num = abs(v_.get_num()) * scale * 2 + v_.get_den();
  mpz_class scaled = num / (v_.get_den() * 2);
  std::string body = scaled.get_str();
  if (body.size() <= static_cast<std::size_t>(digits)) {
    body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
  }
  std::string out = body.substr(0, body.size() - static_cast<std::size_t>(digits));
  if (digits > 0) out += "." + body.substr(body.size() - static_cast<std::size_t>(digits));
  if (v_ < 0 && scaled != 0) out.insert(0, "-");
  return out;
}

std::string Rational::render() const { return str() + " (= " + decimal(10) + ")"; }

bool ExpPair::in_box() const {
  const Rational half(1, 2);
  return Rational(0) <= kappa && kappa <= half && half <= lambda && lambda <= Rational(1);
}

std::string ExpPair::str() const {
  mpz_class l;
  mpz_lcm(l.get_mpz_t(), kappa.denominator().get_mpz_t(), lambda.denominator().get_mpz_t());
  const mpz_class k = kappa.numerator() * (l / kappa.denominator());
  const mpz_class m = lambda.numerator() * (l / lambda.denominator());
  return k.get_str() + "/" + l.get_str() + " " + m.get_str() + "/" + l.get_str();
}

ExpPair a_process(const ExpPair& p) {
  const Rational denom = Rational(2) * p.kappa + Rational(2);
  return {p.kappa / denom, (p.kappa + p.lambda + Rational(1)) / denom};
}

ExpPair b_process(const ExpPair& p) {
  const Rational half(1, 2);
  if (p.lambda < half) throw ValidationError("b_process: lambda must be >= 1/2");
  return {p.lambda - half, p.kappa + half};
}

ExpPair apply_processes(std::string_view ops, ExpPair p) {
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    switch (*it) {
      case 'A':
      case 'a':
        p = a_process(p);
        break;
      case 'B':
      case 'b':
        p = b_process(p);
        break;
      default:
        throw ValidationError(std::string("unknown process '") + *it + "' (use A or B)");
    }
  }
  return p;
}

Rational LinearForm::at(const Rational& c) const {
  return (Rational(a) - Rational(b) * c) / Rational(d);
}

std::string LinearForm::str() const {
  return "(" + std::to_string(a) + "-" + std::to_string(b) + "c)/" + std::to_string(d);
}

const std::vector<ThetaPiece>& theta_pieces() {
  static const std::vector<ThetaPiece> pieces = {
      {Rational(243, 205), Rational(24979, 20803), false, {2, 1, 1}},
      {Rational(24979, 20803), Rational(112, 87), true, {3, 2, 1}},
      {Rational(112, 87), Rational(160, 117), true, {92, 49, 68}},
      {Rational(160, 117), Rational(128, 85), true, {74, 31, 86}},
      {Rational(128, 85), Rational(31, 20), true, {23, 10, 25}},
      {Rational(31, 20), Rational(5, 3), true, {4, 2, 3}},
      {Rational(5, 3), Rational(2), false, {3, 1, 6}},
  };
  return pieces;
}

std::vector<Rational> theta_breakpoints() {
  std::vector<Rational> out;
  const auto& pieces = theta_pieces();
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) out.push_back(pieces[i].hi);
  return out;
}

Rational theta(const Rational& c) {
  const auto& pieces = theta_pieces();
  if (c < pieces.front().lo || c >= pieces.back().hi) {
    throw ValidationError("theta: c = " + c.str() + " outside [243/205, 2)");
  }
  for (const auto& piece : pieces) {
    if (c < piece.hi || (piece.hi_closed && c == piece.hi)) return piece.form.at(c);
  }
  return pieces.back().form.at(c);
}

const std::vector<LinearForm>& theta1_forms() {
  static const std::vector<LinearForm> forms = {
      {7, 4, 4},     {7, 3, 7},       {92, 49, 68}, {54, 28, 42}, {54, 29, 39},
      {266, 139, 192}, {100, 53, 74}, {6, 3, 5},    {20, 5, 22},
  };
  return forms;
}

const std::vector<LinearForm>& theta2_forms() {
  static const std::vector<LinearForm> forms = {
      {5, 2, 6},   {8, 4, 6},       {74, 31, 86}, {46, 20, 50},
      {43, 18, 50}, {230, 103, 228}, {82, 35, 92}, {22, 7, 20},
  };
  return forms;
}

namespace {
Rational min_of(const std::vector<LinearForm>& forms, const Rational& c) {
  Rational best = forms.front().at(c);
  for (const auto& f : forms) best = std::min(best, f.at(c));
  return best;
}
}  // namespace

Rational theta1(const Rational& c) { return min_of(theta1_forms(), c); }
Rational theta2(const Rational& c) { return min_of(theta2_forms(), c); }

Rational theta3(const Rational& c, const Rational& beta) {
  if (c.is_integer()) throw ValidationError("theta3: c must not be an integer");
  if (c < Rational(5, 3)) throw ValidationError("theta3: c must be >= 5/3");
  if (c < Rational(2)) return (Rational(3) - c) / Rational(6);
  if (!(beta > Rational(0))) throw ValidationError("theta3: beta must be positive for c > 2");
  return beta / (c * c);
}

Rational derive_c_threshold_sv(const ExpPair& p) {
  return Rational(1) + (Rational(1) - p.lambda) / (Rational(2) + p.kappa);
}

const std::vector<Rational>& prop41_candidates() {
  static const std::vector<Rational> values = {Rational(7, 4),   Rational(19, 11), Rational(149, 87),
                                               Rational(12, 7),  Rational(85, 49), Rational(163, 95),
                                               Rational(71, 39)};
  return values;
}

Rational prop41_threshold() {
  const auto& v = prop41_candidates();
  return *std::min_element(v.begin(), v.end());
}

Rational carmichael_threshold(const Rational& E) {
  if (!(E > Rational(0) && E <= Rational(1))) {
    throw ValidationError("carmichael_threshold: E must lie in (0, 1]");
  }
  return Rational(39) * (Rational(13) + Rational(6) * E) /
         (Rational(13) * (Rational(39) + Rational(17) * E));
}

}  // namespace pslab
