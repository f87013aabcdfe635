#include "ff/ring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "ff/error.hpp"

namespace ff {

Rational::Rational(long n, long d) {
  if (d == 0) throw InputError("division_by_zero", "rational with zero denominator");
  v_ = mpq_class(n, d);
  v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return InputError("bad_number", "malformed number '" + s + "'"); };
  if (s.empty()) throw bad();
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational a = parse(s.substr(0, slash));
    Rational b = parse(s.substr(slash + 1));
    if (b.is_zero()) throw InputError("division_by_zero", "zero denominator in '" + s + "'");
    return a / b;
  }
  // Decimal with optional exponent, converted exactly.
  size_t pos = 0;
  bool neg = false;
  if (s[pos] == '-' || s[pos] == '+') neg = s[pos++] == '-';
  std::string digits;
  long scale = 0;
  bool seen_dot = false;
  for (; pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.'); ++pos) {
    if (s[pos] == '.') {
      if (seen_dot) throw bad();
      seen_dot = true;
    } else {
      digits += s[pos];
      if (seen_dot) --scale;
    }
  }
  if (digits.empty()) throw bad();
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') throw bad();
    ++pos;
    try {
      size_t used = 0;
      scale += std::stol(s.substr(pos), &used);
      if (pos + used != s.size()) throw bad();
    } catch (const std::logic_error&) {
      throw bad();
    }
  }
  mpz_class n(digits, 10);
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
  mpq_class q = scale >= 0 ? mpq_class(n * p) : mpq_class(n, p);
  q.canonicalize();
  if (neg) q = -q;
  return Rational(q);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw PreconditionError("division_by_zero", "rational division by zero");
  v_ /= o.v_;
  return *this;
}

std::optional<mpz_class> exact_isqrt(const mpz_class& n) {
  if (sgn(n) < 0) return std::nullopt;
  if (!mpz_perfect_square_p(n.get_mpz_t())) return std::nullopt;
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

std::optional<Rational> Rational::sqrt() const {
  auto n = exact_isqrt(num());
  auto d = exact_isqrt(den());
  if (!n || !d) return std::nullopt;
  return Rational(mpq_class(*n, *d));
}

long double Rational::to_ld() const {
  // mpq_get_d loses the extra long double bits; divide in long double instead.
  long double n = std::strtold(num().get_str().c_str(), nullptr);
  long double d = std::strtold(den().get_str().c_str(), nullptr);
  return n / d;
}

std::string Rational::str() const {
  if (is_integer()) return num().get_str();
  return num().get_str() + "/" + den().get_str();
}

std::string Rational::fraction_str() const { return num().get_str() + "/" + den().get_str(); }

std::optional<Rational> RingTraits<Rational>::invert(const Rational& a) {
  if (a.is_zero()) return std::nullopt;
  return Rational(1) / a;
}

// -- Complex ---------------------------------------------------------------

bool Complex::approx_equal(const Complex& o, long double tol) const {
  long double scale = std::max({1.0L, abs(), o.abs()});
  long double d = std::max(std::fabs(re() - o.re()), std::fabs(im() - o.im()));
  return d <= tol * scale;
}

bool Complex::is_zero(long double tol) const {
  return std::max(std::fabs(re()), std::fabs(im())) <= tol;
}

std::string Complex::str() const {
  std::ostringstream os;
  os << std::setprecision(21);
  long double r = re() + 0.0L;
  if (im() == 0) {
    os << r;
  } else {
    os << "(" << r << (im() < 0 ? "-" : "+") << std::fabs(im()) << "i)";
  }
  return os.str();
}

std::optional<Complex> RingTraits<Complex>::invert(const Complex& a) {
  if (a.abs() == 0) return std::nullopt;
  return Complex(1) / a;
}

std::optional<Rational> rational_near(long double x, long double tol, long max_den) {
  // Continued-fraction convergents of x.
  long double scale = std::max(1.0L, std::fabs(x));
  long double r = x;
  mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int it = 0; it < 64; ++it) {
    long double a = std::floor(r);
    mpz_class ai(static_cast<long>(a));
    mpz_class h2 = ai * h1 + h0;
    mpz_class k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    Rational cand{mpq_class(h2, k2)};
    if (std::fabs(cand.to_ld() - x) <= tol * scale) return cand;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    long double frac = r - a;
    if (frac == 0) break;
    r = 1 / frac;
  }
  return std::nullopt;
}

// -- ParamPoly -------------------------------------------------------------

ParamPoly::ParamPoly(const Rational& c) {
  if (!c.is_zero()) c_.push_back(c);
}

ParamPoly::ParamPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { strip(); }

void ParamPoly::strip() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Rational ParamPoly::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size())) return Rational(0);
  return c_[static_cast<size_t>(k)];
}

Rational ParamPoly::evaluate(const Rational& at) const {
  Rational acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * at + *it;
  return acc;
}

ParamPoly& ParamPoly::operator+=(const ParamPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  strip();
  return *this;
}

ParamPoly& ParamPoly::operator-=(const ParamPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  strip();
  return *this;
}

ParamPoly& ParamPoly::operator*=(const ParamPoly& o) {
  if (c_.empty() || o.c_.empty()) {
    c_.clear();
    return *this;
  }
  std::vector<Rational> r(c_.size() + o.c_.size() - 1);
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  c_ = std::move(r);
  strip();
  return *this;
}

ParamPoly operator-(const ParamPoly& a) {
  ParamPoly r = a;
  for (auto& c : r.c_) c = -c;
  return r;
}

std::string ParamPoly::str(std::string_view name) const {
  if (c_.empty()) return "0";
  std::string out;
  for (int k = degree(); k >= 0; --k) {
    const Rational& c = c_[static_cast<size_t>(k)];
    if (c.is_zero()) continue;
    bool neg = c.sign() < 0;
    Rational mag = neg ? -c : c;
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    std::string mono;
    if (k >= 1) mono = std::string(name) + (k > 1 ? "^" + std::to_string(k) : "");
    if (mono.empty()) {
      out += mag.str();
    } else if (mag == Rational(1)) {
      out += mono;
    } else {
      out += mag.str() + "*" + mono;
    }
  }
  return out;
}

std::optional<ParamPoly> RingTraits<ParamPoly>::invert(const ParamPoly& a) {
  if (!a.is_unit()) return std::nullopt;
  return ParamPoly(Rational(1) / a.constant());
}

std::optional<Rational> RingTraits<ParamPoly>::as_rational(const ParamPoly& a) {
  if (!a.is_constant()) return std::nullopt;
  return a.constant();
}

std::optional<cld> RingTraits<ParamPoly>::as_complex(const ParamPoly& a) {
  if (!a.is_constant()) return std::nullopt;
  return cld(a.constant().to_ld(), 0);
}

}  // namespace ff
