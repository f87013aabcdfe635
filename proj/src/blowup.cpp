#include "ff/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

#include "ff/error.hpp"

namespace ff {

std::string chart_name(Chart c) { return c == Chart::One ? "y=xz" : "x=wy"; }

namespace {

template <CoefficientRing R>
bool negligible(const R& v, long double tol) {
  if constexpr (std::is_same_v<R, Complex>)
    return v.is_zero(tol);
  else
    return ff::is_zero(v);
}

template <CoefficientRing R>
bool negligible(const Series1<R>& s, long double tol) {
  for (const auto& [k, c] : s.terms())
    if (!negligible(c, tol)) return false;
  return true;
}

template <CoefficientRing R>
void require_singular_origin(const OneForm2<R>& w) {
  if (!negligible(w.a().constant_term(), Complex::kDefaultTolerance) ||
      !negligible(w.b().constant_term(), Complex::kDefaultTolerance))
    throw PreconditionError("nonsingular_origin", "the origin is not a singular point of the form");
}

}  // namespace

template <CoefficientRing R>
BlowupResult<R> blowup_chart1(const OneForm2<R>& w, const std::string& new_var) {
  require_singular_origin(w);
  VarNames v{w.vars()[0], new_var};
  auto x = Series2<R>::variable(v, 0);
  auto z = Series2<R>::variable(v, 1);
  auto A = substitute(w.a(), x, x * z);
  auto B = substitute(w.b(), x, x * z);
  auto a = A + z * B;
  auto b = x * B;
  int nu = std::min(a.valuation_in(0), b.valuation_in(0));
  if (nu == kInf) throw PrecisionError("truncation_exhausted", "blow-up leaves no known coefficients");
  OneForm2<R> t(divide_monomial(a, nu, 0), divide_monomial(b, nu, 0));
  bool dicritical = !negligible(t.b().restrict_zero(0), Complex::kDefaultTolerance);
  return {t, nu, dicritical, Chart::One};
}

template <CoefficientRing R>
BlowupResult<R> blowup_chart2(const OneForm2<R>& w, const std::string& new_var) {
  require_singular_origin(w);
  VarNames v{new_var, w.vars()[1]};
  auto wv = Series2<R>::variable(v, 0);
  auto y = Series2<R>::variable(v, 1);
  auto A = substitute(w.a(), wv * y, y);
  auto B = substitute(w.b(), wv * y, y);
  auto a = y * A;
  auto b = wv * A + B;
  int nu = std::min(a.valuation_in(1), b.valuation_in(1));
  if (nu == kInf) throw PrecisionError("truncation_exhausted", "blow-up leaves no known coefficients");
  OneForm2<R> t(divide_monomial(a, 0, nu), divide_monomial(b, 0, nu));
  bool dicritical = !negligible(t.a().restrict_zero(1), Complex::kDefaultTolerance);
  return {t, nu, dicritical, Chart::Two};
}

template <CoefficientRing R>
OneForm2<R> recenter(const OneForm2<R>& w, const R& z0) {
  if (ff::is_zero(z0)) return w;
  const auto& v = w.vars();
  auto x = Series2<R>::variable(v, 0);
  auto z = Series2<R>::variable(v, 1) + Series2<R>::constant(v, z0);
  return {substitute(w.a(), x, z), substitute(w.b(), x, z)};
}

template <CoefficientRing R>
OneForm2<R> swap_variables(const OneForm2<R>& w) {
  return {w.b().swapped(), w.a().swapped()};
}

template <CoefficientRing R>
OneForm2<R> ReductionPath<R>::penultimate_form() const {
  if (steps.empty()) throw PreconditionError("empty_path", "the path has no blow-up");
  const OneForm2<R>& prev = steps.size() == 1 ? start : steps[steps.size() - 2].result.transformed;
  return recenter(prev, steps.back().center);
}

template <CoefficientRing R>
int ReductionPath<R>::total_divided_power() const {
  int s = 0;
  for (const auto& st : steps) s += st.result.divided_power;
  return s;
}

namespace {

template <CoefficientRing R>
void push_component(ReductionPath<R>& path, bool on_latest) {
  if (on_latest && !path.self_intersections.empty()) path.self_intersections.back() -= 1;
  path.components.push_back("D" + std::to_string(path.components.size() + 1));
  path.self_intersections.push_back(-1);
}

}  // namespace

template <CoefficientRing R>
std::pair<OneForm2<R>, int> macro_blowup(const OneForm2<R>& w, int p) {
  VarNames v{w.vars()[0], "z"};
  auto x = Series2<R>::variable(v, 0);
  auto z = Series2<R>::variable(v, 1);
  auto xp = Series2<R>::monomial(v, p, 0, RingTraits<R>::one());
  auto A = substitute(w.a(), x, xp * z);
  auto B = substitute(w.b(), x, xp * z);
  auto a = A + Series2<R>::monomial(v, p - 1, 1, from_int<R>(p)) * B;
  auto b = xp * B;
  int nu = std::min(a.valuation_in(0), b.valuation_in(0));
  return {OneForm2<R>(divide_monomial(a, nu, 0), divide_monomial(b, nu, 0)), nu};
}

template <CoefficientRing R>
ReductionPath<R> blowup_chain(const OneForm2<R>& w, int p) {
  if (p < 0) throw InputError("bad_argument", "negative number of blow-ups");
  ReductionPath<R> path{w, {}, {}, {}};
  const OneForm2<R>* current = &w;
  for (int k = 0; k < p; ++k) {
    try {
      path.steps.push_back({Chart::One, RingTraits<R>::zero(), blowup_chart1(*current, "z")});
    } catch (const PreconditionError& e) {
      if (e.code() != "nonsingular_origin") throw;
      throw PreconditionError("chain_off_origin", "blow-up " + std::to_string(k + 1) +
                                                      ": the continuing singular point is not at the origin");
    }
    push_component(path, k > 0);
    current = &path.steps.back().result.transformed;
  }
  if (p >= 1) {
    auto [macro, nu] = macro_blowup(w, p);
    path.macro_agrees = macro == path.final_form() && nu == path.total_divided_power();
  }
  return path;
}

std::vector<cld> polynomial_roots(const std::vector<cld>& c) {
  int n = static_cast<int>(c.size()) - 1;
  while (n > 0 && c[static_cast<size_t>(n)] == cld(0)) --n;
  if (n <= 0) return {};
  std::vector<cld> monic(c.begin(), c.begin() + n + 1);
  for (auto& v : monic) v /= c[static_cast<size_t>(n)];
  auto eval = [&](cld z) {
    cld acc = 1;
    for (int k = n - 1; k >= 0; --k) acc = acc * z + monic[static_cast<size_t>(k)];
    return acc;
  };
  // Cauchy bound for the starting circle.
  long double bound = 1;
  for (int k = 0; k < n; ++k) bound = std::max(bound, 1 + std::abs(monic[static_cast<size_t>(k)]));
  std::vector<cld> z(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) z[static_cast<size_t>(k)] = bound * std::pow(cld(0.4L, 0.9L), k) / std::abs(cld(0.4L, 0.9L));
  for (int it = 0; it < 2000; ++it) {
    long double change = 0;
    for (int i = 0; i < n; ++i) {
      cld den = 1;
      for (int j = 0; j < n; ++j)
        if (j != i) den *= z[static_cast<size_t>(i)] - z[static_cast<size_t>(j)];
      if (den == cld(0)) den = 1e-30L;
      cld step = eval(z[static_cast<size_t>(i)]) / den;
      z[static_cast<size_t>(i)] -= step;
      change = std::max(change, std::abs(step) / std::max(1.0L, std::abs(z[static_cast<size_t>(i)])));
    }
    if (change < 1e-19L) break;
  }
  return z;
}

namespace {

template <CoefficientRing R>
std::vector<cld> to_complex_coeffs(const Series1<R>& q) {
  std::vector<cld> c(static_cast<size_t>(q.degree() + 1));
  for (const auto& [k, v] : q.terms()) c[static_cast<size_t>(k)] = *RingTraits<R>::as_complex(v);
  return c;
}

DivisorPoints<Rational> rational_roots(const Series1<Rational>& q) {
  DivisorPoints<Rational> out;
  auto add_exact = [&](const Rational& r) {
    for (const auto& p : out.points)
      if (p.exact && *p.exact == r) return;
    int mult = 0;
    Series1<Rational> d = q;
    while (!d.is_zero() && d.evaluate(r).is_zero()) {
      ++mult;
      d = d.derive();
    }
    out.points.push_back({r, cld(r.to_ld()), mult});
  };
  int deg = q.degree();
  if (deg == 1) {
    add_exact(-q.coeff(0) / q.coeff(1));
  } else if (deg == 2) {
    Rational a = q.coeff(2), b = q.coeff(1), c = q.coeff(0);
    Rational disc = b * b - Rational(4) * a * c;
    if (auto s = disc.sqrt()) {
      add_exact((-b - *s) / (Rational(2) * a));
      add_exact((-b + *s) / (Rational(2) * a));
    } else {
      cld sd = std::sqrt(cld(disc.to_ld()));
      for (cld r : {(-b.to_ld() - sd) / (2 * a.to_ld()), (-b.to_ld() + sd) / (2 * a.to_ld())})
        out.points.push_back({std::nullopt, r, 1});
    }
  } else if (deg > 2) {
    for (cld r : polynomial_roots(to_complex_coeffs(q))) {
      if (std::fabs(r.imag()) < 1e-8L * std::max(1.0L, std::abs(r))) {
        auto cand = rational_near(r.real(), 1e-9L, 1000000);
        if (cand && q.evaluate(*cand).is_zero()) {
          add_exact(*cand);
          continue;
        }
      }
      out.points.push_back({std::nullopt, r, 1});
    }
  }
  return out;
}

}  // namespace

template <CoefficientRing R>
DivisorPoints<R> singular_points_on_divisor(const OneForm2<R>& w, long double tol) {
  if (!negligible(w.b().restrict_zero(0), tol))
    throw PreconditionError("divisor_not_invariant", "x = 0 is not invariant");
  auto q = w.a().restrict_zero(0);
  if (negligible(q, tol)) throw PreconditionError("degenerate_divisor", "dx-coefficient vanishes on x = 0");
  if constexpr (std::is_same_v<R, Rational>) {
    return rational_roots(q);
  } else if constexpr (std::is_same_v<R, ParamPoly>) {
    Series1<Rational> qr(q.var(), q.order());
    for (const auto& [k, c] : q.terms()) {
      auto v = RingTraits<ParamPoly>::as_rational(c);
      if (!v) throw PreconditionError("parametric_roots", "divisor points depend on the parameter");
      qr.accumulate(k, *v);
    }
    auto r = rational_roots(qr);
    DivisorPoints<ParamPoly> out;
    for (const auto& p : r.points)
      out.points.push_back({p.exact ? std::optional<ParamPoly>(ParamPoly(*p.exact)) : std::nullopt, p.approx,
                            p.multiplicity});
    return out;
  } else {
    DivisorPoints<Complex> out;
    for (cld r : polynomial_roots(to_complex_coeffs(q))) {
      bool merged = false;
      for (auto& p : out.points)
        if (std::abs(p.approx - r) <= 1e-6L * std::max(1.0L, std::abs(r))) {
          ++p.multiplicity;
          merged = true;
        }
      if (!merged) out.points.push_back({std::nullopt, r, 1});
    }
    return out;
  }
}

template <CoefficientRing R>
DivisorPoints<R> singular_points_on_divisor(const ReductionPath<R>& path, long double tol) {
  auto pts = singular_points_on_divisor(path.final_form(), tol);
  pts.has_corner = path.steps.size() >= 2;
  return pts;
}

template <CoefficientRing R>
OneForm2<R> corner_form(const ReductionPath<R>& path) {
  auto r = blowup_chart2(path.penultimate_form(), "w");
  return swap_variables(r.transformed);
}

template <CoefficientRing R>
ReductionPath<R> pd_chain(const OneForm2<R>& w, int m) {
  if (m < 2) throw InputError("bad_argument", "pd_chain needs m >= 2");
  ReductionPath<R> path{w, {}, {}, {}};
  OneForm2<R> current = w;
  R center = RingTraits<R>::zero();
  const std::string zname = w.vars()[1];
  for (int k = 0; k < m - 1; ++k) {
    path.steps.push_back({Chart::One, center, blowup_chart1(recenter(current, center), zname)});
    push_component(path, k > 0);
    const auto& res = path.steps.back().result;
    if (res.dicritical) throw PreconditionError("pd_chain_dicritical", "a blow-up in the chain is dicritical");
    current = res.transformed;
    // The continuing point is the single zero of a linear restriction.
    auto q = current.a().restrict_zero(0);
    if (q.degree() != 1)
      throw PreconditionError("pd_chain_branching", "more than one candidate point on the new divisor");
    auto root = try_divide(-q.coeff(0), q.coeff(1));
    if (!root) throw PreconditionError("pd_chain_branching", "continuing point depends on the parameter");
    center = *root;
  }
  path.final_center = center;
  return path;
}

#define FF_INSTANTIATE(R)                                                                          \
  template BlowupResult<R> blowup_chart1(const OneForm2<R>&, const std::string&);                  \
  template BlowupResult<R> blowup_chart2(const OneForm2<R>&, const std::string&);                  \
  template OneForm2<R> recenter(const OneForm2<R>&, const R&);                                     \
  template OneForm2<R> swap_variables(const OneForm2<R>&);                                         \
  template struct ReductionPath<R>;                                                                \
  template std::pair<OneForm2<R>, int> macro_blowup(const OneForm2<R>&, int);                     \
  template ReductionPath<R> blowup_chain(const OneForm2<R>&, int);                                 \
  template DivisorPoints<R> singular_points_on_divisor(const OneForm2<R>&, long double);           \
  template DivisorPoints<R> singular_points_on_divisor(const ReductionPath<R>&, long double);      \
  template OneForm2<R> corner_form(const ReductionPath<R>&);                                       \
  template ReductionPath<R> pd_chain(const OneForm2<R>&, int);

FF_INSTANTIATE(Rational)
FF_INSTANTIATE(Complex)
FF_INSTANTIATE(ParamPoly)

#undef FF_INSTANTIATE

}  // namespace ff
