#include "ff/parser.hpp"

#include <cctype>

namespace ff {

ModeSpec ModeSpec::parse(std::string_view text) {
  if (text == "exact") return {RingMode::Exact, "b"};
  if (text == "float") return {RingMode::Float, "b"};
  if (text.substr(0, 6) == "param:") {
    std::string name(text.substr(6));
    bool ok = !name.empty() && std::isalpha(static_cast<unsigned char>(name[0]));
    for (char c : name) ok = ok && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
    if (!ok || name == "x" || name == "y" || name == "d" || name == "dx" || name == "dy" || name == "i")
      throw InputError("bad_mode", "invalid parameter name '" + name + "'");
    return {RingMode::Param, name};
  }
  throw InputError("bad_mode", "mode must be exact, float or param:NAME, got '" + std::string(text) + "'");
}

std::string ModeSpec::str() const {
  switch (mode) {
    case RingMode::Exact: return "exact";
    case RingMode::Float: return "float";
    case RingMode::Param: return "param:" + param;
  }
  return "?";
}

namespace {

constexpr int kMaxExponent = 10000;

template <CoefficientRing R>
struct Val {
  bool form = false;
  Series2<R> f;  // function, or the dx-coefficient of a form
  Series2<R> g;  // dy-coefficient of a form
};

template <CoefficientRing R>
class Parser {
 public:
  Parser(std::string_view text, const std::string& param) : s_(text), param_(param) {}

  Val<R> parse_all() {
    auto v = expr();
    skip();
    if (pos_ < s_.size()) fail("syntax_error", "unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  const VarNames vars_{"x", "y"};
  std::string_view s_;
  std::string param_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& code, const std::string& what) const { throw ParseError(code, what, pos_); }
  [[noreturn]] void fail_at(std::size_t at, const std::string& code, const std::string& what) const {
    throw ParseError(code, what, at);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Series2<R> zero() const { return Series2<R>(vars_); }
  Val<R> scalar(const Series2<R>& f) const { return {false, f, zero()}; }
  Val<R> constant(const R& c) const { return scalar(Series2<R>::constant(vars_, c)); }

  Val<R> add(Val<R> a, const Val<R>& b, bool minus, std::size_t at) const {
    if (a.form != b.form) fail_at(at, "mixed_degree", "cannot add a function and a differential form");
    if (minus) {
      a.f -= b.f;
      a.g -= b.g;
    } else {
      a.f += b.f;
      a.g += b.g;
    }
    return a;
  }

  Val<R> mul(const Val<R>& a, const Val<R>& b, std::size_t at) const {
    if (a.form && b.form) fail_at(at, "form_product", "product of two differential forms");
    if (!a.form && !b.form) return scalar(a.f * b.f);
    const auto& fn = a.form ? b : a;
    const auto& fm = a.form ? a : b;
    return {true, fn.f * fm.f, fn.f * fm.g};
  }

  Val<R> expr() {
    auto v = term();
    for (;;) {
      skip();
      std::size_t at = pos_;
      if (accept('+'))
        v = add(v, term(), false, at);
      else if (accept('-'))
        v = add(v, term(), true, at);
      else
        return v;
    }
  }

  Val<R> term() {
    auto v = unary();
    for (;;) {
      skip();
      std::size_t at = pos_;
      if (!accept('*')) return v;
      v = mul(v, unary(), at);
    }
  }

  Val<R> unary() {
    if (accept('-')) {
      auto v = unary();
      return {v.form, -v.f, -v.g};
    }
    if (accept('+')) return unary();
    return power();
  }

  Val<R> power() {
    auto base = atom();
    skip();
    std::size_t at = pos_;
    if (!accept('^')) return base;
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("syntax_error", "expected a non-negative integer exponent");
    long e = 0;
    for (std::size_t k = start; k < pos_; ++k) {
      e = e * 10 + (s_[k] - '0');
      if (e > kMaxExponent) fail_at(start, "exponent_too_large", "exponent exceeds " + std::to_string(kMaxExponent));
    }
    if (base.form) fail_at(at, "form_power", "power of a differential form");
    auto r = Series2<R>::constant(vars_, RingTraits<R>::one());
    auto b = base.f;
    for (long k = e; k > 0; k >>= 1) {
      if (k & 1) r = r * b;
      if (k > 1) b = b * b;
    }
    return scalar(r);
  }

  R number() {
    std::size_t start = pos_;
    auto digits = [&] {
      std::size_t d = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return pos_ > d;
    };
    bool any = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      any = digits() || any;
    }
    if (!any) fail_at(start, "syntax_error", "malformed number");
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (!digits()) pos_ = save;
    }
    if (pos_ < s_.size() && s_[pos_] == '/') {
      ++pos_;
      if (!digits()) fail("syntax_error", "expected a denominator");
    }
    Rational q;
    try {
      q = Rational::parse(s_.substr(start, pos_ - start));
    } catch (const InputError& e) {
      fail_at(start, e.code(), e.what());
    }
    return RingTraits<R>::from_rational(q);
  }

  Val<R> atom() {
    skip();
    if (pos_ >= s_.size()) fail("syntax_error", "expected an expression");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      R v = number();
      if constexpr (std::is_same_v<R, Complex>) {
        if (pos_ < s_.size() && s_[pos_] == 'i' &&
            (pos_ + 1 == s_.size() || !std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
          ++pos_;
          v = v * Complex(0, 1);
        }
      }
      return constant(v);
    }
    if (c == '(') {
      ++pos_;
      auto v = expr();
      if (!accept(')')) fail("syntax_error", "expected ')'");
      return v;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string id(s_.substr(start, pos_ - start));
      if (id == "x") return scalar(Series2<R>::variable(vars_, 0));
      if (id == "y") return scalar(Series2<R>::variable(vars_, 1));
      if (id == "dx") return {true, Series2<R>::constant(vars_, RingTraits<R>::one()), zero()};
      if (id == "dy") return {true, zero(), Series2<R>::constant(vars_, RingTraits<R>::one())};
      if (id == "d") {
        if (!accept('(')) fail("syntax_error", "expected '(' after d");
        std::size_t inner = pos_;
        auto v = expr();
        if (!accept(')')) fail("syntax_error", "expected ')'");
        if (v.form) fail_at(inner, "form_differential", "d applied to a differential form");
        return {true, v.f.derive(0), v.f.derive(1)};
      }
      if constexpr (std::is_same_v<R, ParamPoly>) {
        if (id == param_) return constant(ParamPoly::parameter());
      }
      if constexpr (std::is_same_v<R, Complex>) {
        if (id == "i") return constant(Complex(0, 1));
      }
      fail_at(start, "unknown_symbol", "unknown symbol '" + id + "'");
    }
    fail("syntax_error", "unexpected '" + std::string(1, c) + "'");
  }
};

}  // namespace

template <CoefficientRing R>
OneForm2<R> parse_form(std::string_view text, const std::string& param) {
  auto v = Parser<R>(text, param).parse_all();
  if (!v.form) throw InputError("not_a_form", "expression has no dx, dy or d(...)");
  if (v.f.is_zero() && v.g.is_zero()) throw InputError("zero_form", "the form is identically zero");
  return OneForm2<R>(v.f, v.g);
}

template <CoefficientRing R>
Series2<R> parse_function(std::string_view text, const std::string& param) {
  auto v = Parser<R>(text, param).parse_all();
  if (v.form) throw InputError("not_a_function", "expected a function, found a differential form");
  return v.f;
}

template OneForm2<Rational> parse_form(std::string_view, const std::string&);
template OneForm2<Complex> parse_form(std::string_view, const std::string&);
template OneForm2<ParamPoly> parse_form(std::string_view, const std::string&);
template Series2<Rational> parse_function(std::string_view, const std::string&);
template Series2<Complex> parse_function(std::string_view, const std::string&);
template Series2<ParamPoly> parse_function(std::string_view, const std::string&);

}  // namespace ff
