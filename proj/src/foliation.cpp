#include "ff/foliation.hpp"

#include <cmath>
#include <sstream>
#include <type_traits>

#include "ff/error.hpp"

namespace ff {

template <CoefficientRing R>
OneForm2<R>::OneForm2(Series2<R> a, Series2<R> b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.vars() != b_.vars()) throw InputError("variable_mismatch", "form coefficients in different variables");
  Precision p = meet(a_.precision(), b_.precision());
  a_ = a_.with_precision(p);
  b_ = b_.with_precision(p);
  if (a_.is_zero() && b_.is_zero()) throw InputError("zero_form", "the 1-form is identically zero");
}

template <CoefficientRing R>
std::string OneForm2<R>::to_string(std::string_view param) const {
  auto part = [&](const Series2<R>& s, const std::string& v) {
    return "(" + s.with_precision({}).to_string(param) + ")*d" + v;
  };
  std::string out = part(a_, vars()[0]) + " + " + part(b_, vars()[1]);
  if (!a_.is_exact()) out += "  [" + a_.precision().str() + "]";
  return out;
}

template <CoefficientRing R>
std::string PlaneVectorField<R>::to_string(std::string_view param) const {
  return "(" + px.to_string(param) + ")*d/d" + vars()[0] + " + (" + py.to_string(param) + ")*d/d" + vars()[1];
}

template <CoefficientRing R>
bool Matrix2<R>::is_zero() const {
  for (const auto& row : m)
    for (const auto& v : row)
      if (!ff::is_zero(v)) return false;
  return true;
}

template <CoefficientRing R>
std::string Matrix2<R>::to_string(std::string_view param) const {
  auto s = [&](const R& v) { return RingTraits<R>::str(v, param); };
  return "[[" + s(m[0][0]) + ", " + s(m[0][1]) + "], [" + s(m[1][0]) + ", " + s(m[1][1]) + "]]";
}

template <CoefficientRing R>
bool projectively_equal(const Matrix2<R>& A, const Matrix2<R>& B) {
  // All 2x2 minors of the 2x4 matrix (vec A; vec B) vanish.
  std::array<R, 4> a{A(0, 0), A(0, 1), A(1, 0), A(1, 1)};
  std::array<R, 4> b{B(0, 0), B(0, 1), B(1, 0), B(1, 1)};
  if (A.is_zero() != B.is_zero()) return false;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      R minor = a[i] * b[j] - a[j] * b[i];
      if constexpr (std::is_same_v<R, Complex>) {
        if (!minor.is_zero()) return false;
      } else if (!ff::is_zero(minor)) {
        return false;
      }
    }
  return true;
}

std::string Ratio::str() const {
  if (exact) return exact->str();
  std::ostringstream os;
  os.precision(12);
  os << approx.real() + 0.0L;
  if (approx.imag() != 0) os << (approx.imag() < 0 ? "-" : "+") << std::fabs(approx.imag()) << "i";
  return os.str();
}

std::string type_name(const SingularityType& t) {
  static const char* names[] = {"Regular",  "ReducedHyperbolic",      "Resonant",           "ResonantNode",
                                "SaddleNode", "PoincareDulacCandidate", "DicriticalCandidate", "NonElementary"};
  return names[t.index()];
}

std::string type_to_string(const SingularityType& t) {
  std::string name = type_name(t);
  if (auto* h = std::get_if<ReducedHyperbolic>(&t)) return name + "(" + h->ratio.str() + ")";
  if (auto* r = std::get_if<Resonant>(&t)) return name + "(" + r->ratio.str() + ")";
  if (auto* n = std::get_if<ResonantNode>(&t)) return name + "(" + n->ratio.str() + ")";
  if (auto* p = std::get_if<PoincareDulacCandidate>(&t)) return name + "(m=" + std::to_string(p->m) + ")";
  return name;
}

namespace {

// Type from a rational ratio lambda2 / lambda1 of nonzero eigenvalues.
SingularityType from_rational_ratio(const Rational& r) {
  if (r.sign() < 0) return Resonant{r};
  if (r.is_integer() && r >= Rational(2)) return PoincareDulacCandidate{static_cast<int>(r.num().get_si())};
  Rational inv = Rational(1) / r;
  if (inv.is_integer() && inv >= Rational(2)) return PoincareDulacCandidate{static_cast<int>(inv.num().get_si())};
  return ResonantNode{r};
}

SingularityType from_complex_ratio(cld r, long double tol) {
  if (std::fabs(r.imag()) <= tol * std::max(1.0L, std::abs(r))) {
    if (auto q = rational_near(r.real(), tol)) return from_rational_ratio(*q);
  }
  return ReducedHyperbolic{Ratio{std::nullopt, r}};
}

std::array<cld, 2> ordered(cld a, cld b) {
  long double ma = std::abs(a), mb = std::abs(b);
  if (std::fabs(ma - mb) <= 1e-15L * std::max(ma, mb)) {
    // Equal moduli: pick the ratio in the closed upper half plane.
    if (ma != 0 && (b / a).imag() < 0) std::swap(a, b);
  } else if (mb < ma) {
    std::swap(a, b);
  }
  return {a, b};
}

template <CoefficientRing R>
bool all_constant(const Matrix2<R>& L) {
  for (const auto& row : L.m)
    for (const auto& v : row)
      if (!RingTraits<R>::as_rational(v)) return false;
  return true;
}

Matrix2<Rational> to_rational(const Matrix2<ParamPoly>& L) {
  Matrix2<Rational> r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.m[i][j] = L.m[i][j].constant();
  return r;
}

}  // namespace

template <CoefficientRing R>
Eigenvalues<R> eigenvalues(const Matrix2<R>& L, long double tol) {
  Eigenvalues<R> e{L.trace(), L.det(), std::nullopt, std::nullopt};
  if constexpr (std::is_same_v<R, Rational>) {
    if (L.is_triangular()) {
      e.exact = std::array<Rational, 2>{L(0, 0), L(1, 1)};
    } else {
      Rational disc = e.trace * e.trace - Rational(4) * e.det;
      if (auto s = disc.sqrt()) {
        Rational l1 = (e.trace - *s) / Rational(2), l2 = (e.trace + *s) / Rational(2);
        if (l1 * l1 > l2 * l2) std::swap(l1, l2);
        e.exact = std::array<Rational, 2>{l1, l2};
      }
    }
    if (e.exact) {
      e.approx = std::array<cld, 2>{cld((*e.exact)[0].to_ld()), cld((*e.exact)[1].to_ld())};
    } else {
      cld t(e.trace.to_ld()), d(e.det.to_ld());
      cld s = std::sqrt(t * t - 4.0L * d);
      e.approx = ordered((t - s) / 2.0L, (t + s) / 2.0L);
    }
  } else if constexpr (std::is_same_v<R, ParamPoly>) {
    if (all_constant(L)) {
      auto r = eigenvalues(to_rational(L), tol);
      e.approx = r.approx;
      if (r.exact) e.exact = std::array<ParamPoly, 2>{ParamPoly((*r.exact)[0]), ParamPoly((*r.exact)[1])};
    } else if (L.is_triangular()) {
      e.exact = std::array<ParamPoly, 2>{L(0, 0), L(1, 1)};
      auto a = RingTraits<ParamPoly>::as_complex(L(0, 0)), b = RingTraits<ParamPoly>::as_complex(L(1, 1));
      if (a && b) e.approx = std::array<cld, 2>{*a, *b};
    }
  } else {
    (void)tol;
    if (L.is_triangular()) {
      e.approx = std::array<cld, 2>{L(0, 0).v, L(1, 1).v};
    } else {
      cld t = e.trace.v, d = e.det.v;
      cld s = std::sqrt(t * t - 4.0L * d);
      e.approx = ordered((t - s) / 2.0L, (t + s) / 2.0L);
    }
  }
  return e;
}

template <CoefficientRing R>
SingularityType classify_singularity(const Matrix2<R>& L, long double tol) {
  if constexpr (std::is_same_v<R, Rational>) {
    if (L.is_zero()) return NonElementary{};
    if (L(0, 1).is_zero() && L(1, 0).is_zero() && L(0, 0) == L(1, 1)) return DicriticalCandidate{};
    Rational t = L.trace(), d = L.det();
    if (d.is_zero()) return t.is_zero() ? SingularityType{NonElementary{}} : SingularityType{SaddleNode{}};
    auto e = eigenvalues(L, tol);
    if (e.exact) return from_rational_ratio((*e.exact)[1] / (*e.exact)[0]);
    if (t.is_zero()) return Resonant{Rational(-1)};
    return ReducedHyperbolic{Ratio{std::nullopt, (*e.approx)[1] / (*e.approx)[0]}};
  } else if constexpr (std::is_same_v<R, ParamPoly>) {
    if (all_constant(L)) return classify_singularity(to_rational(L), tol);
    if (L(0, 1).is_zero() && L(1, 0).is_zero() && L(0, 0) == L(1, 1)) return DicriticalCandidate{};
    auto e = eigenvalues(L, tol);
    if (e.exact) {
      auto l1 = RingTraits<ParamPoly>::as_rational((*e.exact)[0]);
      auto l2 = RingTraits<ParamPoly>::as_rational((*e.exact)[1]);
      if (l1 && l2) {
        if (l1->is_zero() && l2->is_zero()) return NonElementary{};
        if (l1->is_zero() || l2->is_zero()) return SaddleNode{};
        return from_rational_ratio(*l2 / *l1);
      }
    }
    throw PreconditionError("parametric_linear_part",
                            "eigenvalues depend on the parameter; evaluate it or use exact mode");
  } else {
    long double scale = 0;
    for (const auto& row : L.m)
      for (const auto& v : row) scale = std::max(scale, v.abs());
    if (scale <= tol) return NonElementary{};
    auto near = [&](const Complex& v) { return v.abs() <= tol * scale; };
    if (near(L(0, 1)) && near(L(1, 0)) && near(L(0, 0) - L(1, 1))) return DicriticalCandidate{};
    auto e = eigenvalues(L, tol);
    cld l1 = (*e.approx)[0], l2 = (*e.approx)[1];
    bool z1 = std::abs(l1) <= tol * scale, z2 = std::abs(l2) <= tol * scale;
    if (z1 && z2) return NonElementary{};
    if (z1 || z2) return SaddleNode{};
    return from_complex_ratio(l2 / l1, tol);
  }
}

template <CoefficientRing R>
PlaneVectorField<R> translate(const PlaneVectorField<R>& X, const R& x0, const R& y0) {
  if (ff::is_zero(x0) && ff::is_zero(y0)) return X;
  const auto& v = X.vars();
  auto ex = Series2<R>::variable(v, 0) + Series2<R>::constant(v, x0);
  auto ey = Series2<R>::variable(v, 1) + Series2<R>::constant(v, y0);
  return {substitute(X.px, ex, ey), substitute(X.py, ex, ey)};
}

namespace {

template <CoefficientRing R>
bool vanishes(const R& v, long double tol) {
  if constexpr (std::is_same_v<R, Complex>)
    return v.is_zero(tol);
  else
    return ff::is_zero(v);
}

}  // namespace

template <CoefficientRing R>
Matrix2<R> linear_part(const PlaneVectorField<R>& X, const R& x0, const R& y0) {
  auto T = translate(X, x0, y0);
  if (!vanishes(T.px.constant_term(), Complex::kDefaultTolerance) ||
      !vanishes(T.py.constant_term(), Complex::kDefaultTolerance))
    throw PreconditionError("not_singular", "the vector field does not vanish at the point");
  return {{{{T.px.coeff(1, 0), T.px.coeff(0, 1)}, {T.py.coeff(1, 0), T.py.coeff(0, 1)}}}};
}

template <CoefficientRing R>
R cs_index(const PlaneVectorField<R>& X, const R& z0) {
  if (!X.px.restrict_zero(0).is_zero())
    throw PreconditionError("divisor_not_invariant", "x = 0 is not invariant");
  auto q = X.py.restrict_zero(0);
  if (q.is_zero()) throw PreconditionError("degenerate_divisor", "the field vanishes along x = 0");
  auto pt = divide_monomial(X.px, 1, 0).restrict_zero(0);
  auto qs = q.translate(z0);
  int s = qs.valuation();
  if constexpr (std::is_same_v<R, Complex>) {
    // Leading coefficients may be rounding noise.
    s = kInf;
    for (const auto& [k, c] : qs.terms())
      if (!c.is_zero(Complex::kDefaultTolerance)) {
        s = k;
        break;
      }
  }
  if (s == 0) throw PreconditionError("not_singular", "the point is not singular on the divisor");
  if (s > 1) throw PreconditionError("multiple_zero", "cs_index needs a simple zero on the divisor");
  auto res = try_divide(pt.translate(z0).coeff(0), qs.coeff(1));
  if (!res) throw PreconditionError("non_unit", "residue denominator is not invertible");
  return *res;
}

template <CoefficientRing R>
SingularityReport<R> analyze_point(const PlaneVectorField<R>& X, const R& x0, const R& y0, std::string chart,
                                   bool divisor_invariant, long double tol) {
  SingularityReport<R> r{std::move(chart), {x0, y0}, {}, {}, Regular{}, std::nullopt, false};
  auto T = translate(X, x0, y0);
  if (!vanishes(T.px.constant_term(), tol) || !vanishes(T.py.constant_term(), tol)) return r;
  r.linear = {{{{T.px.coeff(1, 0), T.px.coeff(0, 1)}, {T.py.coeff(1, 0), T.py.coeff(0, 1)}}}};
  r.eigen = eigenvalues(r.linear, tol);
  r.type = classify_singularity(r.linear, tol);
  r.approximate = !RingTraits<R>::exact || r.eigen.approximate();
  if (divisor_invariant && vanishes(x0, tol)) {
    try {
      r.cs_index = cs_index(X, y0);
    } catch (const PreconditionError&) {
      r.cs_index.reset();
    }
  }
  return r;
}

#define FF_INSTANTIATE(R)                                                                               \
  template class OneForm2<R>;                                                                           \
  template struct PlaneVectorField<R>;                                                                  \
  template struct Matrix2<R>;                                                                           \
  template bool projectively_equal(const Matrix2<R>&, const Matrix2<R>&);                               \
  template Eigenvalues<R> eigenvalues(const Matrix2<R>&, long double);                                  \
  template SingularityType classify_singularity(const Matrix2<R>&, long double);                        \
  template PlaneVectorField<R> translate(const PlaneVectorField<R>&, const R&, const R&);               \
  template Matrix2<R> linear_part(const PlaneVectorField<R>&, const R&, const R&);                      \
  template R cs_index(const PlaneVectorField<R>&, const R&);                                            \
  template SingularityReport<R> analyze_point(const PlaneVectorField<R>&, const R&, const R&, std::string, \
                                              bool, long double);

FF_INSTANTIATE(Rational)
FF_INSTANTIATE(Complex)
FF_INSTANTIATE(ParamPoly)

#undef FF_INSTANTIATE

}  // namespace ff
