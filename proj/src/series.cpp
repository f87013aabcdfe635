#include "ff/series.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

#include "ff/error.hpp"
#include "ff/kernels.hpp"

namespace ff {

std::string Precision::str() const {
  if (is_exact()) return "exact";
  return (kind == TruncKind::Total ? "total<=" : "first-var<=") + std::to_string(order);
}

Precision meet(const Precision& a, const Precision& b) {
  if (a.is_exact()) return b;
  if (b.is_exact()) return a;
  if (a.kind == b.kind) return {std::min(a.order, b.order), a.kind};
  return Precision::total(std::min(a.order, b.order));
}

// -- formatting -------------------------------------------------------------

namespace {

std::string power(const std::string& var, int k) {
  if (k == 0) return {};
  return k == 1 ? var : var + "^" + std::to_string(k);
}

std::string join_monomial(const std::string& a, const std::string& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return a + "*" + b;
}

std::string signed_piece(bool neg, bool first, const std::string& body) {
  if (first) return (neg ? "-" : "") + body;
  return (neg ? " - " : " + ") + body;
}

}  // namespace

template <CoefficientRing R>
std::string format_term(const R& c, const std::string& monomial, bool first, std::string_view param) {
  if constexpr (std::is_same_v<R, Rational>) {
    bool neg = c.sign() < 0;
    Rational mag = neg ? -c : c;
    if (monomial.empty()) return signed_piece(neg, first, mag.str());
    if (mag == Rational(1)) return signed_piece(neg, first, monomial);
    return signed_piece(neg, first, mag.str() + "*" + monomial);
  } else if constexpr (std::is_same_v<R, ParamPoly>) {
    int nonzero = 0, lead = -1;
    for (int k = 0; k <= c.degree(); ++k)
      if (!c.coeff(k).is_zero()) ++nonzero, lead = k;
    if (nonzero == 1) {
      Rational q = c.coeff(lead);
      std::string mono = join_monomial(power(std::string(param), lead), monomial);
      return format_term<Rational>(q, mono, first, param);
    }
    std::string body = "(" + c.str(param) + ")";
    return signed_piece(false, first, monomial.empty() ? body : body + "*" + monomial);
  } else {
    std::string body = c.str();
    return signed_piece(false, first, monomial.empty() ? body : body + "*" + monomial);
  }
}

// -- Series2 ----------------------------------------------------------------

template <CoefficientRing R>
Series2<R>::Series2(VarNames vars, Precision prec) : vars_(std::move(vars)), prec_(prec) {}

template <CoefficientRing R>
Series2<R>::Series2(VarNames vars, Precision prec, const Terms& terms)
    : vars_(std::move(vars)), prec_(prec) {
  for (const auto& [e, c] : terms) accumulate(e.i, e.j, c);
}

template <CoefficientRing R>
Series2<R> Series2<R>::constant(VarNames vars, const R& c, Precision prec) {
  return monomial(std::move(vars), 0, 0, c, prec);
}

template <CoefficientRing R>
Series2<R> Series2<R>::monomial(VarNames vars, int i, int j, const R& c, Precision prec) {
  Series2 s(std::move(vars), prec);
  s.accumulate(i, j, c);
  return s;
}

template <CoefficientRing R>
Series2<R> Series2<R>::variable(VarNames vars, int index, Precision prec) {
  return index == 0 ? monomial(std::move(vars), 1, 0, RingTraits<R>::one(), prec)
                    : monomial(std::move(vars), 0, 1, RingTraits<R>::one(), prec);
}

template <CoefficientRing R>
R Series2<R>::coeff(int i, int j) const {
  auto it = terms_.find(Exp2{i, j});
  return it == terms_.end() ? RingTraits<R>::zero() : it->second;
}

template <CoefficientRing R>
int Series2<R>::valuation() const {
  return terms_.empty() ? kInf : terms_.begin()->first.i + terms_.begin()->first.j;
}

template <CoefficientRing R>
int Series2<R>::valuation_in(int var) const {
  int v = kInf;
  for (const auto& [e, c] : terms_) v = std::min(v, var == 0 ? e.i : e.j);
  return v;
}

template <CoefficientRing R>
int Series2<R>::degree() const {
  return terms_.empty() ? -1 : terms_.rbegin()->first.i + terms_.rbegin()->first.j;
}

template <CoefficientRing R>
Series2<R>& Series2<R>::accumulate(int i, int j, const R& c) {
  if (!prec_.keeps(i, j) || ff::is_zero(c)) return *this;
  auto [it, inserted] = terms_.try_emplace(Exp2{i, j}, c);
  if (!inserted) {
    it->second += c;
    if (ff::is_zero(it->second)) terms_.erase(it);
  }
  return *this;
}

template <CoefficientRing R>
Series2<R> Series2<R>::truncated(const Precision& p) const {
  return with_precision(meet(prec_, p));
}

template <CoefficientRing R>
Series2<R> Series2<R>::with_precision(const Precision& p) const {
  Series2 r(vars_, p);
  for (const auto& [e, c] : terms_)
    if (p.keeps(e.i, e.j)) r.terms_.emplace(e, c);
  return r;
}

template <CoefficientRing R>
Series2<R> Series2<R>::homogeneous_part(int k) const {
  Series2 r(vars_, prec_);
  for (const auto& [e, c] : terms_)
    if (e.i + e.j == k) r.terms_.emplace(e, c);
  return r;
}

template <CoefficientRing R>
Series2<R> Series2<R>::renamed(VarNames vars) const {
  Series2 r = *this;
  r.vars_ = std::move(vars);
  return r;
}

template <CoefficientRing R>
Series2<R> Series2<R>::swapped() const {
  Series2 r({vars_[1], vars_[0]}, prec_.as_total());
  for (const auto& [e, c] : terms_) r.accumulate(e.j, e.i, c);
  return r;
}

template <CoefficientRing R>
Series2<R> Series2<R>::scaled(const R& c) const {
  Series2 r(vars_, prec_);
  for (const auto& [e, v] : terms_) r.accumulate(e.i, e.j, v * c);
  return r;
}

template <CoefficientRing R>
Series2<R> Series2<R>::derive(int var) const {
  Precision p = prec_;
  if (!p.is_exact() && (p.kind == TruncKind::Total || var == 0)) p.order -= 1;
  Series2 r(vars_, p);
  for (const auto& [e, c] : terms_) {
    int k = var == 0 ? e.i : e.j;
    if (k == 0) continue;
    if (var == 0)
      r.accumulate(e.i - 1, e.j, c * from_int<R>(k));
    else
      r.accumulate(e.i, e.j - 1, c * from_int<R>(k));
  }
  return r;
}

template <CoefficientRing R>
Series1<R> Series2<R>::restrict_zero(int var) const {
  // Known coefficients of the restriction: total degree <= order, or all of
  // them when x-adic and x is the variable set to zero.
  int order = prec_.order;
  if (!prec_.is_exact() && prec_.kind == TruncKind::FirstVar && var == 0) order = kInf;
  Series1<R> r(vars_[var == 0 ? 1 : 0], order);
  for (const auto& [e, c] : terms_) {
    if (var == 0 && e.i == 0) r.accumulate(e.j, c);
    if (var == 1 && e.j == 0) r.accumulate(e.i, c);
  }
  return r;
}

template <CoefficientRing R>
R Series2<R>::evaluate(const R& x, const R& y) const {
  R acc = RingTraits<R>::zero();
  for (const auto& [e, c] : terms_) {
    R t = c;
    for (int k = 0; k < e.i; ++k) t = t * x;
    for (int k = 0; k < e.j; ++k) t = t * y;
    acc += t;
  }
  return acc;
}

template <CoefficientRing R>
std::string Series2<R>::to_string(std::string_view param) const {
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    out += format_term(c, join_monomial(power(vars_[0], e.i), power(vars_[1], e.j)), first, param);
    first = false;
  }
  if (out.empty()) out = "0";
  if (!prec_.is_exact()) {
    if (prec_.kind == TruncKind::Total)
      out += " + O(" + vars_[0] + "," + vars_[1] + ")^" + std::to_string(prec_.order + 1);
    else
      out += " + O(" + vars_[0] + "^" + std::to_string(prec_.order + 1) + ")";
  }
  return out;
}

template <CoefficientRing R>
void Series2<R>::check_vars(const Series2& o, const char* op) const {
  if (vars_ != o.vars_)
    throw InputError("variable_mismatch", std::string(op) + ": series in (" + vars_[0] + "," +
                                              vars_[1] + ") and (" + o.vars_[0] + "," + o.vars_[1] + ")");
}

template <CoefficientRing R>
Series2<R>& Series2<R>::operator+=(const Series2& o) {
  check_vars(o, "add");
  Precision p = meet(prec_, o.prec_);
  if (!(p == prec_)) *this = with_precision(p);
  for (const auto& [e, c] : o.terms_) accumulate(e.i, e.j, c);
  return *this;
}

template <CoefficientRing R>
Series2<R>& Series2<R>::operator-=(const Series2& o) {
  check_vars(o, "subtract");
  Precision p = meet(prec_, o.prec_);
  if (!(p == prec_)) *this = with_precision(p);
  for (const auto& [e, c] : o.terms_) accumulate(e.i, e.j, -c);
  return *this;
}

namespace {

template <CoefficientRing R>
std::vector<kernels::Term2<R>> flatten(const Series2<R>& s) {
  std::vector<kernels::Term2<R>> v;
  v.reserve(s.size());
  for (const auto& [e, c] : s.terms()) v.push_back({e.i, e.j, c});
  return v;
}

template <CoefficientRing R>
Series2<R> product(const Series2<R>& a, const Series2<R>& b, const Precision& p) {
  auto keep = [&p](int i, int j) { return p.keeps(i, j); };
  auto terms = kernels::multiply(flatten(a), flatten(b), keep);
  Series2<R> r(a.vars(), p);
  for (auto& t : terms) r.accumulate(t.i, t.j, t.c);
  return r;
}

}  // namespace

template <CoefficientRing R>
Series2<R> operator*(const Series2<R>& a, const Series2<R>& b) {
  if (a.vars() != b.vars())
    throw InputError("variable_mismatch", "multiply: series in different variables");
  return product(a, b, meet(a.precision(), b.precision()));
}

template <CoefficientRing R>
Series2<R> substitute(const Series2<R>& s, const Series2<R>& ex, const Series2<R>& ey) {
  if (ex.vars() != ey.vars())
    throw InputError("variable_mismatch", "substitute: substituents in different variables");
  const bool positive = ex.valuation() >= 1 && ey.valuation() >= 1;
  const bool exact_subs = ex.is_exact() && ey.is_exact();
  Precision target;
  if (s.is_exact()) {
    target = meet(ex.precision(), ey.precision());
  } else if (exact_subs && s.precision().kind == TruncKind::FirstVar && ex.valuation_in(0) >= 1) {
    target = Precision::first_var(s.order());
  } else if (exact_subs && s.precision().kind == TruncKind::Total && ex.valuation_in(0) >= 1 &&
             ey.valuation_in(0) >= 1) {
    target = Precision::first_var(s.order());
  } else if (positive) {
    target = meet(Precision::total(s.order()), meet(ex.precision(), ey.precision()));
  } else {
    throw PrecisionError("substitution_beyond_truncation",
                         "substituting a unit into a truncated series needs unknown coefficients");
  }

  std::vector<Series2<R>> px{Series2<R>::constant(ex.vars(), RingTraits<R>::one(), target)};
  std::vector<Series2<R>> py = px;
  auto pow_of = [&](std::vector<Series2<R>>& cache, const Series2<R>& base, int k) -> const Series2<R>& {
    while (static_cast<int>(cache.size()) <= k) cache.push_back(product(cache.back(), base, target));
    return cache[static_cast<size_t>(k)];
  };

  Series2<R> r(ex.vars(), target);
  // Horner in the second variable: r = sum_j (sum_i c_ij ex^i) ey^j.
  std::map<int, Series2<R>> by_j;
  for (const auto& [e, c] : s.terms()) {
    auto [it, _] = by_j.try_emplace(e.j, ex.vars(), target);
    it->second += pow_of(px, ex, e.i).scaled(c);
  }
  for (const auto& [j, part] : by_j) r += product(part, pow_of(py, ey, j), target);
  return r;
}

template <CoefficientRing R>
Series2<R> divide_monomial(const Series2<R>& s, int i, int j) {
  Precision p = s.precision();
  if (!p.is_exact()) p.order -= p.kind == TruncKind::Total ? i + j : i;
  Series2<R> r(s.vars(), p);
  for (const auto& [e, c] : s.terms()) {
    if (e.i < i || e.j < j)
      throw PreconditionError("not_divisible", "term " + s.vars()[0] + "^" + std::to_string(e.i) + "*" +
                                                   s.vars()[1] + "^" + std::to_string(e.j) +
                                                   " is not divisible by the monomial");
    r.accumulate(e.i - i, e.j - j, c);
  }
  return r;
}

template <CoefficientRing R>
Series2<R> divide_unit(const Series2<R>& s, const Series2<R>& d, int cap) {
  if (s.vars() != d.vars())
    throw InputError("variable_mismatch", "divide: series in different variables");
  auto inv = RingTraits<R>::invert(d.constant_term());
  if (!inv) throw PreconditionError("non_unit", "divisor has no invertible constant term");
  if (d.size() == 1) return s.scaled(*inv);
  int n = std::min({s.precision().order, d.precision().order, cap});
  if (n == kInf)
    throw PrecisionError("unbounded_quotient", "quotient by a non-constant unit needs an order");
  Precision p = Precision::total(n);
  Series2<R> q(s.vars(), p);
  std::vector<std::pair<Exp2, R>> tail;
  for (const auto& [e, c] : d.terms())
    if (e.i + e.j > 0) tail.emplace_back(e, c);
  for (int deg = 0; deg <= n; ++deg) {
    for (int i = deg; i >= 0; --i) {
      int j = deg - i;
      R v = s.coeff(i, j);
      for (const auto& [e, c] : tail) {
        if (e.i > i || e.j > j) continue;
        auto it = q.terms().find(Exp2{i - e.i, j - e.j});
        if (it != q.terms().end()) v -= c * it->second;
      }
      q.accumulate(i, j, v * *inv);
    }
  }
  return q;
}

// -- Series1 ----------------------------------------------------------------

template <CoefficientRing R>
Series1<R>::Series1(std::string var, int order) : var_(std::move(var)), order_(order) {}

template <CoefficientRing R>
Series1<R>::Series1(std::string var, int order, const Terms& terms)
    : var_(std::move(var)), order_(order) {
  for (const auto& [k, c] : terms) accumulate(k, c);
}

template <CoefficientRing R>
Series1<R> Series1<R>::constant(std::string var, const R& c, int order) {
  return monomial(std::move(var), 0, c, order);
}

template <CoefficientRing R>
Series1<R> Series1<R>::monomial(std::string var, int k, const R& c, int order) {
  Series1 s(std::move(var), order);
  s.accumulate(k, c);
  return s;
}

template <CoefficientRing R>
R Series1<R>::coeff(int k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? RingTraits<R>::zero() : it->second;
}

template <CoefficientRing R>
int Series1<R>::valuation() const {
  return terms_.empty() ? kInf : terms_.begin()->first;
}

template <CoefficientRing R>
int Series1<R>::degree() const {
  return terms_.empty() ? -1 : terms_.rbegin()->first;
}

template <CoefficientRing R>
Series1<R>& Series1<R>::accumulate(int k, const R& c) {
  if (k > order_ || ff::is_zero(c)) return *this;
  auto [it, inserted] = terms_.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (ff::is_zero(it->second)) terms_.erase(it);
  }
  return *this;
}

template <CoefficientRing R>
Series1<R> Series1<R>::truncated(int order) const {
  Series1 r(var_, std::min(order_, order));
  for (const auto& [k, c] : terms_)
    if (k <= r.order_) r.terms_.emplace(k, c);
  return r;
}

template <CoefficientRing R>
Series1<R> Series1<R>::scaled(const R& c) const {
  Series1 r(var_, order_);
  for (const auto& [k, v] : terms_) r.accumulate(k, v * c);
  return r;
}

template <CoefficientRing R>
Series1<R> Series1<R>::derive() const {
  Series1 r(var_, order_minus(order_, 1));
  for (const auto& [k, c] : terms_)
    if (k > 0) r.accumulate(k - 1, c * from_int<R>(k));
  return r;
}

template <CoefficientRing R>
Series1<R> Series1<R>::translate(const R& c) const {
  if (ff::is_zero(c)) return *this;
  if (!is_exact())
    throw PrecisionError("substitution_beyond_truncation", "translating a truncated series");
  Series1 shift(var_, kInf);
  shift.accumulate(0, c);
  shift.accumulate(1, RingTraits<R>::one());
  return compose(*this, shift);
}

template <CoefficientRing R>
R Series1<R>::evaluate(const R& x) const {
  R acc = RingTraits<R>::zero();
  int deg = degree();
  for (int k = deg; k >= 0; --k) acc = acc * x + coeff(k);
  return acc;
}

template <CoefficientRing R>
std::string Series1<R>::to_string(std::string_view param) const {
  std::string out;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    out += format_term(c, power(var_, k), first, param);
    first = false;
  }
  if (out.empty()) out = "0";
  if (!is_exact()) out += " + O(" + var_ + "^" + std::to_string(order_ + 1) + ")";
  return out;
}

template <CoefficientRing R>
Series1<R>& Series1<R>::operator+=(const Series1& o) {
  if (var_ != o.var_) throw InputError("variable_mismatch", "add: series in different variables");
  if (o.order_ < order_) *this = truncated(o.order_);
  for (const auto& [k, c] : o.terms_) accumulate(k, c);
  return *this;
}

template <CoefficientRing R>
Series1<R>& Series1<R>::operator-=(const Series1& o) {
  if (var_ != o.var_) throw InputError("variable_mismatch", "subtract: series in different variables");
  if (o.order_ < order_) *this = truncated(o.order_);
  for (const auto& [k, c] : o.terms_) accumulate(k, -c);
  return *this;
}

template <CoefficientRing R>
Series1<R> operator*(const Series1<R>& a, const Series1<R>& b) {
  if (a.var() != b.var()) throw InputError("variable_mismatch", "multiply: series in different variables");
  Series1<R> r(a.var(), std::min(a.order(), b.order()));
  for (const auto& [i, c] : a.terms()) {
    if (i > r.order()) break;
    for (const auto& [j, d] : b.terms()) {
      if (i + j > r.order()) break;
      r.accumulate(i + j, c * d);
    }
  }
  return r;
}

template <CoefficientRing R>
Series1<R> compose(const Series1<R>& f, const Series1<R>& g) {
  int gv = g.valuation();
  if (!f.is_exact() && gv < 1)
    throw PrecisionError("substitution_beyond_truncation", "composing a truncated series with a unit");
  int order = std::min(f.order(), g.order());
  Series1<R> r(g.var(), order);
  Series1<R> pw = Series1<R>::constant(g.var(), RingTraits<R>::one(), order);
  int k = 0;
  for (const auto& [e, c] : f.terms()) {
    while (k < e) {
      pw = pw * g;
      ++k;
    }
    r += pw.scaled(c);
  }
  return r;
}

template <CoefficientRing R>
Series1<R> divide_unit(const Series1<R>& s, const Series1<R>& d, int cap) {
  if (s.var() != d.var()) throw InputError("variable_mismatch", "divide: series in different variables");
  auto inv = RingTraits<R>::invert(d.coeff(0));
  if (!inv) throw PreconditionError("non_unit", "divisor has no invertible constant term");
  if (d.terms().size() == 1) return s.scaled(*inv);
  int n = std::min({s.order(), d.order(), cap});
  if (n == kInf)
    throw PrecisionError("unbounded_quotient", "quotient by a non-constant unit needs an order");
  Series1<R> q(s.var(), n);
  for (int k = 0; k <= n; ++k) {
    R v = s.coeff(k);
    for (const auto& [e, c] : d.terms()) {
      if (e == 0) continue;
      if (e > k) break;
      v -= c * q.coeff(k - e);
    }
    q.accumulate(k, v * *inv);
  }
  return q;
}

bool approx_equal(const Series1<Complex>& a, const Series1<Complex>& b, long double tol, int up_to) {
  int limit = std::min({a.order(), b.order(), up_to});
  auto check = [&](const Series1<Complex>& s, const Series1<Complex>& t) {
    for (const auto& [k, c] : s.terms()) {
      if (k > limit) break;
      if (!c.approx_equal(t.coeff(k), tol)) return false;
    }
    return true;
  };
  return a.var() == b.var() && check(a, b) && check(b, a);
}

bool approx_equal(const Series2<Complex>& a, const Series2<Complex>& b, long double tol) {
  Precision p = meet(a.precision(), b.precision());
  auto check = [&](const Series2<Complex>& s, const Series2<Complex>& t) {
    for (const auto& [e, c] : s.terms()) {
      if (!p.keeps(e.i, e.j)) continue;
      if (!c.approx_equal(t.coeff(e.i, e.j), tol)) return false;
    }
    return true;
  };
  return a.vars() == b.vars() && check(a, b) && check(b, a);
}

#define FF_INSTANTIATE(R)                                                                   \
  template class Series2<R>;                                                                \
  template class Series1<R>;                                                                \
  template Series2<R> operator*(const Series2<R>&, const Series2<R>&);                      \
  template Series2<R> substitute(const Series2<R>&, const Series2<R>&, const Series2<R>&);  \
  template Series2<R> divide_unit(const Series2<R>&, const Series2<R>&, int);               \
  template Series2<R> divide_monomial(const Series2<R>&, int, int);                         \
  template Series1<R> operator*(const Series1<R>&, const Series1<R>&);                      \
  template Series1<R> compose(const Series1<R>&, const Series1<R>&);                        \
  template Series1<R> divide_unit(const Series1<R>&, const Series1<R>&, int);               \
  template std::string format_term(const R&, const std::string&, bool, std::string_view);

FF_INSTANTIATE(Rational)
FF_INSTANTIATE(Complex)
FF_INSTANTIATE(ParamPoly)

#undef FF_INSTANTIATE

}  // namespace ff
