#pragma once

// Coefficient rings for truncated series: exact rationals (GMP), approximate
// complex numbers, and polynomials in one formal parameter over Q.

#include <gmpxx.h>

#include <complex>
#include <concepts>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ff {

using cld = std::complex<long double>;

class Rational {
 public:
  Rational() = default;
  Rational(long n) : v_(n) {}  // NOLINT: integers convert implicitly
  Rational(long n, long d);
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  // Accepts "-5", "1/2", "0.25", "1e-3".
  static Rational parse(std::string_view text);

  const mpq_class& value() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }
  // Exact square root when both numerator and denominator are squares.
  std::optional<Rational> sqrt() const;
  long double to_ld() const;
  // Canonical "num/den" text, denominators of 1 omitted.
  std::string str() const;
  // Always "num/den", used by the JSON reports.
  std::string fraction_str() const;

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }
  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

 private:
  mpq_class v_;
};

// Approximate complex number. Equality is a max-norm comparison with a
// relative tolerance.
struct Complex {
  static constexpr long double kDefaultTolerance = 1e-9L;

  cld v{};

  Complex() = default;
  Complex(long double re, long double im = 0) : v(re, im) {}  // NOLINT
  Complex(cld c) : v(c) {}                                     // NOLINT

  long double re() const { return v.real(); }
  long double im() const { return v.imag(); }
  long double abs() const { return std::abs(v); }

  bool approx_equal(const Complex& o, long double tol = kDefaultTolerance) const;
  bool is_zero(long double tol = kDefaultTolerance) const;

  Complex& operator+=(const Complex& o) { v += o.v; return *this; }
  Complex& operator-=(const Complex& o) { v -= o.v; return *this; }
  Complex& operator*=(const Complex& o) { v *= o.v; return *this; }
  Complex& operator/=(const Complex& o) { v /= o.v; return *this; }
  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  friend Complex operator-(const Complex& a) { return Complex(-a.v); }
  friend bool operator==(const Complex& a, const Complex& b) { return a.approx_equal(b); }

  std::string str() const;
};

// Polynomial over Q in one formal parameter, dense, trailing zeros stripped.
class ParamPoly {
 public:
  ParamPoly() = default;
  ParamPoly(long c) : ParamPoly(Rational(c)) {}  // NOLINT
  ParamPoly(const Rational& c);                  // NOLINT
  explicit ParamPoly(std::vector<Rational> coeffs);

  // The parameter itself.
  static ParamPoly parameter() { return ParamPoly({Rational(0), Rational(1)}); }

  const std::vector<Rational>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  bool is_unit() const { return c_.size() == 1; }
  Rational constant() const { return c_.empty() ? Rational(0) : c_[0]; }
  Rational coeff(int k) const;
  Rational evaluate(const Rational& at) const;

  // Renders with the given parameter name, e.g. "5934060*b^6".
  std::string str(std::string_view name = "b") const;

  ParamPoly& operator+=(const ParamPoly& o);
  ParamPoly& operator-=(const ParamPoly& o);
  ParamPoly& operator*=(const ParamPoly& o);
  friend ParamPoly operator+(ParamPoly a, const ParamPoly& b) { return a += b; }
  friend ParamPoly operator-(ParamPoly a, const ParamPoly& b) { return a -= b; }
  friend ParamPoly operator*(ParamPoly a, const ParamPoly& b) { return a *= b; }
  friend ParamPoly operator-(const ParamPoly& a);
  friend bool operator==(const ParamPoly& a, const ParamPoly& b) { return a.c_ == b.c_; }

 private:
  void strip();
  std::vector<Rational> c_;
};

template <class R>
struct RingTraits;

template <>
struct RingTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "exact";
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational from_rational(const Rational& q) { return q; }
  static bool is_zero(const Rational& a) { return a.is_zero(); }
  static std::optional<Rational> invert(const Rational& a);
  static std::optional<Rational> as_rational(const Rational& a) { return a; }
  static std::optional<cld> as_complex(const Rational& a) { return cld(a.to_ld(), 0); }
  static std::string str(const Rational& a, std::string_view = {}) { return a.str(); }
};

template <>
struct RingTraits<Complex> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";
  static Complex zero() { return Complex(0); }
  static Complex one() { return Complex(1); }
  static Complex from_rational(const Rational& q) { return Complex(q.to_ld()); }
  // Structural zero only; tolerance tests go through Complex::is_zero(tol).
  static bool is_zero(const Complex& a) { return a.v == cld(0, 0); }
  static std::optional<Complex> invert(const Complex& a);
  static std::optional<Rational> as_rational(const Complex&) { return std::nullopt; }
  static std::optional<cld> as_complex(const Complex& a) { return a.v; }
  static std::string str(const Complex& a, std::string_view = {}) { return a.str(); }
};

template <>
struct RingTraits<ParamPoly> {
  static constexpr bool exact = true;
  static constexpr const char* name = "param";
  static ParamPoly zero() { return ParamPoly(); }
  static ParamPoly one() { return ParamPoly(1); }
  static ParamPoly from_rational(const Rational& q) { return ParamPoly(q); }
  static bool is_zero(const ParamPoly& a) { return a.is_zero(); }
  static std::optional<ParamPoly> invert(const ParamPoly& a);
  static std::optional<Rational> as_rational(const ParamPoly& a);
  static std::optional<cld> as_complex(const ParamPoly& a);
  static std::string str(const ParamPoly& a, std::string_view name = "b") { return a.str(name); }
};

template <class R>
concept CoefficientRing = requires(const R& a, const R& b) {
  { a + b } -> std::convertible_to<R>;
  { a - b } -> std::convertible_to<R>;
  { a * b } -> std::convertible_to<R>;
  { -a } -> std::convertible_to<R>;
  { a == b } -> std::convertible_to<bool>;
  { RingTraits<R>::zero() } -> std::convertible_to<R>;
  { RingTraits<R>::one() } -> std::convertible_to<R>;
  { RingTraits<R>::is_zero(a) } -> std::convertible_to<bool>;
  { RingTraits<R>::invert(a) } -> std::convertible_to<std::optional<R>>;
  { RingTraits<R>::from_rational(Rational{}) } -> std::convertible_to<R>;
};

template <CoefficientRing R>
bool is_zero(const R& a) { return RingTraits<R>::is_zero(a); }

template <CoefficientRing R>
R from_int(long k) { return RingTraits<R>::from_rational(Rational(k)); }

// Exact quotient a / b when b is a unit of the ring.
template <CoefficientRing R>
std::optional<R> try_divide(const R& a, const R& b) {
  auto inv = RingTraits<R>::invert(b);
  if (!inv) return std::nullopt;
  return a * *inv;
}

// Best rational approximation with denominator <= max_den, accepted only if it
// matches x within tol (relative to max(1, |x|)).
std::optional<Rational> rational_near(long double x, long double tol, long max_den = 1000);

// Integer square root test for arbitrary precision integers.
std::optional<mpz_class> exact_isqrt(const mpz_class& n);

}  // namespace ff
