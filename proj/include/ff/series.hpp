#pragma once

// Truncated power series in one and two variables over a CoefficientRing.
//
// A series stores only nonzero coefficients. Its Precision says which
// coefficients are known: all of them (exact polynomial), those of total
// degree <= order, or those whose first-variable exponent is <= order
// (x-adic truncation, the natural precision after a blow-up along x = 0).
// Binary operations meet the precisions of their operands and never extend
// them.

#include <array>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ff/ring.hpp"

namespace ff {

constexpr int kInf = std::numeric_limits<int>::max();

inline int order_minus(int order, int k) { return order == kInf ? kInf : order - k; }

enum class TruncKind { Total, FirstVar };

struct Precision {
  int order = kInf;
  TruncKind kind = TruncKind::Total;

  static Precision exact() { return {}; }
  static Precision total(int n) { return {n, TruncKind::Total}; }
  static Precision first_var(int k) { return {k, TruncKind::FirstVar}; }

  bool is_exact() const { return order == kInf; }
  bool keeps(int i, int j) const {
    if (is_exact()) return true;
    return kind == TruncKind::Total ? i + j <= order : i <= order;
  }
  // Both kinds guarantee every coefficient of total degree <= order.
  Precision as_total() const { return {order, TruncKind::Total}; }
  bool operator==(const Precision& o) const {
    return order == o.order && (is_exact() || kind == o.kind);
  }
  std::string str() const;
};

// Greatest precision implied by both operands.
Precision meet(const Precision& a, const Precision& b);

struct Exp2 {
  int i = 0;
  int j = 0;
  bool operator==(const Exp2&) const = default;
};

// Total degree ascending, then first exponent descending.
struct Exp2Order {
  bool operator()(const Exp2& a, const Exp2& b) const {
    int da = a.i + a.j, db = b.i + b.j;
    if (da != db) return da < db;
    return a.i > b.i;
  }
};

using VarNames = std::array<std::string, 2>;

template <CoefficientRing R>
class Series1;

template <CoefficientRing R>
class Series2 {
 public:
  using Terms = std::map<Exp2, R, Exp2Order>;

  explicit Series2(VarNames vars = {"x", "y"}, Precision prec = {});
  Series2(VarNames vars, Precision prec, const Terms& terms);

  static Series2 constant(VarNames vars, const R& c, Precision prec = {});
  static Series2 monomial(VarNames vars, int i, int j, const R& c, Precision prec = {});
  // index 0 -> first variable, 1 -> second.
  static Series2 variable(VarNames vars, int index, Precision prec = {});

  const VarNames& vars() const { return vars_; }
  const Precision& precision() const { return prec_; }
  int order() const { return prec_.order; }
  bool is_exact() const { return prec_.is_exact(); }
  const Terms& terms() const { return terms_; }
  size_t size() const { return terms_.size(); }

  R coeff(int i, int j) const;
  R constant_term() const { return coeff(0, 0); }
  bool is_zero() const { return terms_.empty(); }
  // Minimal total degree of a nonzero term, kInf for the zero series.
  int valuation() const;
  // Minimal exponent of one variable, kInf for the zero series.
  int valuation_in(int var) const;
  int degree() const;

  // Adds c * x^i y^j in place; terms outside the precision are ignored.
  Series2& accumulate(int i, int j, const R& c);

  Series2 truncated(const Precision& p) const;
  Series2 homogeneous_part(int k) const;
  Series2 with_precision(const Precision& p) const;  // relabels, drops terms outside p
  Series2 renamed(VarNames vars) const;
  // Exchanges the two variables. First-variable precision becomes total.
  Series2 swapped() const;
  Series2 scaled(const R& c) const;
  Series2 derive(int var) const;
  // Sets one variable to zero and returns a series in the other one.
  Series1<R> restrict_zero(int var) const;
  // Sum of the stored terms at a point.
  R evaluate(const R& x, const R& y) const;

  std::string to_string(std::string_view param = "b") const;

  Series2& operator+=(const Series2& o);
  Series2& operator-=(const Series2& o);
  friend Series2 operator+(Series2 a, const Series2& b) { return a += b; }
  friend Series2 operator-(Series2 a, const Series2& b) { return a -= b; }
  friend Series2 operator-(const Series2& a) { return a.scaled(-RingTraits<R>::one()); }

  // Same variables and coefficients (precision not compared).
  bool operator==(const Series2& o) const { return vars_ == o.vars_ && terms_ == o.terms_; }

 private:
  void check_vars(const Series2& o, const char* op) const;

  VarNames vars_;
  Precision prec_;
  Terms terms_;
};

template <CoefficientRing R>
Series2<R> operator*(const Series2<R>& a, const Series2<R>& b);

// s(ex, ey). Allowed when both substituents have positive valuation, or when
// s is an exact polynomial (translations). Substituting (x, exact ey) into a
// first-variable truncated series keeps the x-adic precision, and (x, ey with
// ey divisible by x) turns total precision N into x-adic precision N.
template <CoefficientRing R>
Series2<R> substitute(const Series2<R>& s, const Series2<R>& ex, const Series2<R>& ey);

// s / d for d with an invertible constant term. The quotient is computed to
// min(order(s), order(d), cap); an unbounded result is rejected.
template <CoefficientRing R>
Series2<R> divide_unit(const Series2<R>& s, const Series2<R>& d, int cap = kInf);

// s / (x^i y^j); every stored term must be divisible.
template <CoefficientRing R>
Series2<R> divide_monomial(const Series2<R>& s, int i, int j);

template <CoefficientRing R>
class Series1 {
 public:
  using Terms = std::map<int, R>;

  explicit Series1(std::string var = "x", int order = kInf);
  Series1(std::string var, int order, const Terms& terms);

  static Series1 constant(std::string var, const R& c, int order = kInf);
  static Series1 monomial(std::string var, int k, const R& c, int order = kInf);

  const std::string& var() const { return var_; }
  int order() const { return order_; }
  bool is_exact() const { return order_ == kInf; }
  const Terms& terms() const { return terms_; }

  R coeff(int k) const;
  bool is_zero() const { return terms_.empty(); }
  int valuation() const;
  int degree() const;

  Series1& accumulate(int k, const R& c);
  Series1 truncated(int order) const;
  Series1 scaled(const R& c) const;
  Series1 derive() const;
  // f(x + c); requires an exact polynomial unless c == 0.
  Series1 translate(const R& c) const;
  R evaluate(const R& x) const;
  std::string to_string(std::string_view param = "b") const;

  Series1& operator+=(const Series1& o);
  Series1& operator-=(const Series1& o);
  friend Series1 operator+(Series1 a, const Series1& b) { return a += b; }
  friend Series1 operator-(Series1 a, const Series1& b) { return a -= b; }
  friend Series1 operator-(const Series1& a) { return a.scaled(-RingTraits<R>::one()); }

  bool operator==(const Series1& o) const { return var_ == o.var_ && terms_ == o.terms_; }

 private:
  std::string var_;
  int order_;
  Terms terms_;
};

template <CoefficientRing R>
Series1<R> operator*(const Series1<R>& a, const Series1<R>& b);

// f(g); needs valuation(g) >= 1 unless f is an exact polynomial.
template <CoefficientRing R>
Series1<R> compose(const Series1<R>& f, const Series1<R>& g);

template <CoefficientRing R>
Series1<R> divide_unit(const Series1<R>& s, const Series1<R>& d, int cap = kInf);

// Coefficient-wise comparison within a tolerance relative to the magnitude.
bool approx_equal(const Series1<Complex>& a, const Series1<Complex>& b,
                  long double tol = Complex::kDefaultTolerance, int up_to = kInf);
bool approx_equal(const Series2<Complex>& a, const Series2<Complex>& b,
                  long double tol = Complex::kDefaultTolerance);

// Coefficient ring change.
template <CoefficientRing To, CoefficientRing From, class Fn>
Series2<To> map_coefficients(const Series2<From>& s, Fn fn) {
  Series2<To> r(s.vars(), s.precision());
  for (const auto& [e, c] : s.terms()) r.accumulate(e.i, e.j, fn(c));
  return r;
}

template <CoefficientRing To, CoefficientRing From, class Fn>
Series1<To> map_coefficients(const Series1<From>& s, Fn fn) {
  Series1<To> r(s.var(), s.order());
  for (const auto& [k, c] : s.terms()) r.accumulate(k, fn(c));
  return r;
}

// Formats a coefficient times a monomial as a signed summand, used by the
// series printers and the canonical form printer.
template <CoefficientRing R>
std::string format_term(const R& c, const std::string& monomial, bool first, std::string_view param);

}  // namespace ff
