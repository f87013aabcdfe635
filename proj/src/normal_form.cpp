#include "ff/normal_form.hpp"

#include <omp.h>

#include "ff/error.hpp"

namespace ff {

namespace {

template <CoefficientRing R>
Series2<R> magnitudes(const Series2<R>& s) {
  return map_coefficients<R>(s, [](const R& c) { return Complex(c.abs()); });
}

// Valuation of s, ignoring terms below round-off. bound majorizes the
// operations that produced s, term by term.
template <CoefficientRing R>
int effective_valuation(const Series2<R>& s, const Series2<R>& bound) {
  if constexpr (std::is_same_v<R, Complex>) {
    int v = kInf;
    for (const auto& [e, c] : s.terms()) {
      long double scale = std::max<long double>(1, bound.coeff(e.i, e.j).abs());
      if (c.abs() > Complex::kDefaultTolerance * scale) v = std::min(v, e.i + e.j);
    }
    return v;
  } else {
    return s.valuation();
  }
}

}  // namespace

template <CoefficientRing R>
PlaneVectorField<R> FiberedField<R>::field() const {
  const auto& v = a.vars();
  return {Series2<R>::variable(v, 0), Series2<R>::monomial(v, 0, 1, from_int<R>(m)) + a};
}

template <CoefficientRing R>
FiberedField<R> to_fibered_field(const OneForm2<R>& w, int m, int order) {
  if (m < 2) throw InputError("bad_argument", "m must be at least 2");
  const auto& v = w.vars();
  if (!w.b().restrict_zero(0).is_zero())
    throw PreconditionError("not_fibered", "dz-coefficient is not divisible by x");
  auto unit = divide_monomial(w.b(), 1, 0);
  if (!RingTraits<R>::invert(unit.constant_term()))
    throw PreconditionError("not_fibered", "dz-coefficient is not x times a unit");
  // Dual field divided by the unit: x d/dx + g d/dz.
  auto g = divide_unit(-w.a(), unit, order);
  if (!(g.constant_term() == RingTraits<R>::zero())) throw PreconditionError("not_singular", "origin is not singular");
  if (!(g.coeff(0, 1) == from_int<R>(m)))
    throw PreconditionError("ratio_mismatch", "the eigenvalue ratio at the origin is not " + std::to_string(m));
  auto k = try_divide(g.coeff(1, 0), from_int<R>(m - 1));
  // z = zeta - k x removes the linear x-term.
  auto x = Series2<R>::variable(v, 0);
  auto zeta = Series2<R>::variable(v, 1) - x.scaled(*k);
  auto raw = substitute(g, x, zeta) + x.scaled(*k) - Series2<R>::variable(v, 1).scaled(from_int<R>(m));
  Series2<R> a(v, raw.precision());
  for (const auto& [e, c] : raw.terms()) {
    if (e.i + e.j >= 2)
      a.accumulate(e.i, e.j, c);
    else if (!(c == RingTraits<R>::zero()))
      throw PreconditionError("not_fibered", "tail has a linear part");
  }
  return {m, a.truncated(Precision::total(order)), *k};
}

template <CoefficientRing R>
HomologicalStep<R> homological_step(const Series2<R>& ak, int m, int k) {
  HomologicalStep<R> out{Series2<R>(ak.vars()), Series2<R>(ak.vars())};
  for (const auto& [e, c] : ak.terms()) {
    if (e.i + e.j != k) throw InputError("not_homogeneous", "slice has a term outside degree " + std::to_string(k));
    int d = e.i + m * (e.j - 1);
    if (d == 0)
      out.b.accumulate(e.i, e.j, c);
    else
      out.phi.accumulate(e.i, e.j, -c * *RingTraits<R>::invert(from_int<R>(d)));
  }
  return out;
}

template <CoefficientRing R>
Series2<R> conjugacy_residual(const FiberedField<R>& X, const Series2<R>& phi, const R& eps, int N) {
  const auto& v = X.a.vars();
  auto p = Precision::total(N);
  auto q = (Series2<R>::monomial(v, 0, 1, from_int<R>(X.m)) + X.a).truncated(p);
  auto one = Series2<R>::constant(v, RingTraits<R>::one());
  auto x = Series2<R>::variable(v, 0);
  auto ph = phi.truncated(p);
  auto lhs = (one + ph.derive(1)) * q + x * ph.derive(0);
  auto rhs = (Series2<R>::variable(v, 1) + ph).scaled(from_int<R>(X.m)) + Series2<R>::monomial(v, X.m, 0, eps);
  return (lhs - rhs).truncated(p);
}

template <CoefficientRing R>
Series2<R> conjugacy_bound(const FiberedField<R>& X, const Series2<R>& phi, const R& eps, int N) {
  if constexpr (std::is_same_v<R, Complex>) {
    const auto& v = X.a.vars();
    auto p = Precision::total(N);
    auto q = (Series2<R>::monomial(v, 0, 1, from_int<R>(X.m)) + magnitudes(X.a)).truncated(p);
    auto ph = magnitudes(phi.truncated(p));
    auto one = Series2<R>::constant(v, RingTraits<R>::one());
    auto lhs = (one + ph.derive(1)) * q + Series2<R>::variable(v, 0) * ph.derive(0);
    auto rhs = (Series2<R>::variable(v, 1) + ph).scaled(from_int<R>(X.m)) + Series2<R>::monomial(v, X.m, 0, Complex(eps.abs()));
    return (lhs + rhs).truncated(p);
  } else {
    return Series2<R>(X.a.vars(), X.a.precision());
  }
}

template <CoefficientRing R>
NormalizationResult<R> normalize(const FiberedField<R>& X, int N) {
  if (X.a.order() < N)
    throw PrecisionError("truncation_exhausted",
                         "field known to order " + std::to_string(X.a.order()) + " < " + std::to_string(N));
  if (N < X.m)
    throw PrecisionError("truncation_exhausted", "order " + std::to_string(N) + " does not reach degree m");
  const auto& v = X.a.vars();
  Series2<R> phi(v, Precision::total(N));
  R eps = RingTraits<R>::zero();
  for (int k = 2; k <= N; ++k) {
    auto res = conjugacy_residual(X, phi, eps, N);
    if (RingTraits<R>::exact && res.valuation() < k)
      throw std::logic_error("normalize: residual below the current degree");
    auto step = homological_step(res.homogeneous_part(k), X.m, k);
    phi += step.phi;
    if (k == X.m) eps += step.b.coeff(X.m, 0);
  }
  int r = effective_valuation(conjugacy_residual(X, phi, eps, N), conjugacy_bound(X, phi, eps, N));
  return {eps, phi, N, r};
}

template <CoefficientRing R>
int verify_conjugation(const FiberedField<R>& X, const Series2<R>& phi, int m, const R& eps, int N) {
  const auto& v = X.a.vars();
  auto p = Precision::total(N);
  auto x = Series2<R>::variable(v, 0, p);
  auto u = Series2<R>::variable(v, 1, p);
  if (phi.valuation() < 2) throw PreconditionError("bad_conjugation", "phi must have valuation at least 2");
  // z = psi(x, u) solves psi + phi(x, psi) = u; each pass fixes one more degree.
  Series2<R> psi = u;
  for (int d = 2; d <= N; ++d) {
    auto pd = Precision::total(d);
    psi = (u - substitute(phi.truncated(pd), x.truncated(pd), psi.with_precision(pd))).truncated(pd);
  }
  psi = psi.with_precision(p);
  auto q = Series2<R>::monomial(v, 0, 1, from_int<R>(X.m)) + X.a;
  auto one = Series2<R>::constant(v, RingTraits<R>::one());
  // Second component of the pushed-forward field, in source coordinates.
  auto pushed = (one + phi.derive(1)) * q + Series2<R>::variable(v, 0) * phi.derive(0);
  auto target = Series2<R>::monomial(v, 0, 1, from_int<R>(m), p) + Series2<R>::monomial(v, m, 0, eps);
  auto residual = (substitute(pushed.truncated(p), x, psi) - target).truncated(p);
  Series2<R> bound;
  if constexpr (std::is_same_v<R, Complex>) {
    auto mag_pushed = (one + magnitudes(phi).derive(1)) * magnitudes(q) + Series2<R>::variable(v, 0) * magnitudes(phi).derive(0);
    bound = substitute(mag_pushed.truncated(p), x, magnitudes(psi)).truncated(p) + magnitudes(target);
  }
  return effective_valuation(residual, bound);
}

namespace {

bool better(long num, long den, int i, int j, const BoundResult& best, long bnum, long bden) {
  long lhs = num * bden, rhs = bnum * den;
  if (lhs != rhs) return lhs > rhs;
  return i < best.i || (i == best.i && j < best.j);
}

}  // namespace

BoundResult bound_bruteforce_serial(int m, int radius) {
  if (m < 2 || radius < m + 1) throw InputError("bad_argument", "need m >= 2 and radius >= m + 1");
  BoundResult best{Rational(-1), -1, -1};
  long bnum = -1, bden = 1;
  for (int s = m + 1; s <= radius; ++s)
    for (int i = 0; i <= s; ++i) {
      int j = s - i;
      long num = j, den = i + static_cast<long>(m) * (j - 1);
      if (better(num, den, i, j, best, bnum, bden)) {
        bnum = num, bden = den;
        best.i = i, best.j = j;
      }
    }
  best.value = Rational(bnum, bden);
  return best;
}

BoundResult bound_bruteforce(int m, int radius) {
  if (m < 2 || radius < m + 1) throw InputError("bad_argument", "need m >= 2 and radius >= m + 1");
  BoundResult best{Rational(-1), -1, -1};
  long bnum = -1, bden = 1;
#pragma omp parallel
  {
    BoundResult local{Rational(0), -1, -1};
    long lnum = -1, lden = 1;
#pragma omp for schedule(dynamic, 8) nowait
    for (int s = m + 1; s <= radius; ++s)
      for (int i = 0; i <= s; ++i) {
        int j = s - i;
        long num = j, den = i + static_cast<long>(m) * (j - 1);
        if (better(num, den, i, j, local, lnum, lden)) {
          lnum = num, lden = den;
          local.i = i, local.j = j;
        }
      }
#pragma omp critical
    if (local.i >= 0 && better(lnum, lden, local.i, local.j, best, bnum, bden)) {
      bnum = lnum, bden = lden;
      best.i = local.i, best.j = local.j;
    }
  }
  best.value = Rational(bnum, bden);
  return best;
}

std::vector<Exp2> obstructed_monomials(int m, int kmax) {
  std::vector<Exp2> out;
  for (int k = 2; k <= kmax; ++k)
    for (int i = 0; i <= k; ++i)
      if (i + m * (k - i - 1) == 0) out.push_back({i, k - i});
  return out;
}

#define FF_INSTANTIATE(R)                                                                           \
  template struct FiberedField<R>;                                                                  \
  template FiberedField<R> to_fibered_field(const OneForm2<R>&, int, int);                          \
  template HomologicalStep<R> homological_step(const Series2<R>&, int, int);                        \
  template Series2<R> conjugacy_residual(const FiberedField<R>&, const Series2<R>&, const R&, int); \
  template NormalizationResult<R> normalize(const FiberedField<R>&, int);                           \
  template int verify_conjugation(const FiberedField<R>&, const Series2<R>&, int, const R&, int);

FF_INSTANTIATE(Rational)
FF_INSTANTIATE(Complex)
FF_INSTANTIATE(ParamPoly)

#undef FF_INSTANTIATE

}  // namespace ff
