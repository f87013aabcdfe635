#include "ff/holonomy.hpp"

#include <omp.h>

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>

#include "ff/error.hpp"

namespace ff {

namespace {

// Terms of degree <= n as an exact polynomial; products of such cuts stay
// exact and are cut again.
template <CoefficientRing R>
Series1<R> cut(const Series1<R>& s, int n) {
  Series1<R> r(s.var(), kInf);
  for (const auto& [k, c] : s.terms()) {
    if (k > n) break;
    r.accumulate(k, c);
  }
  return r;
}

template <CoefficientRing R>
Series1<R> x_of(const std::string& var) {
  return Series1<R>::monomial(var, 1, RingTraits<R>::one());
}

template <CoefficientRing R>
R inv_int(long k) {
  return *RingTraits<R>::invert(from_int<R>(k));
}

}  // namespace

template <CoefficientRing R>
VectorField1<R>::VectorField1(Series1<R> s) : f(std::move(s)) {
  if (f.valuation() < 2) throw PreconditionError("vf_valuation", "vector field must have valuation >= 2");
}

template <CoefficientRing R>
FormalDiffeo1<R> FormalDiffeo1<R>::identity(int order) {
  return {RingTraits<R>::one(), Series1<R>("x", order)};
}

template <CoefficientRing R>
FormalDiffeo1<R> FormalDiffeo1<R>::linear(const R& l, int order) {
  return {l, Series1<R>("x", order)};
}

template <CoefficientRing R>
FormalDiffeo1<R> FormalDiffeo1<R>::from_series(const Series1<R>& s) {
  if (!is_zero(s.coeff(0))) throw PreconditionError("not_fixed", "diffeomorphism must fix the origin");
  R l = s.coeff(1);
  if (is_zero(l)) throw PreconditionError("zero_multiplier", "multiplier vanishes");
  auto tail = s;
  tail.accumulate(0, RingTraits<R>::zero());
  tail.accumulate(1, -l);
  return {l, tail};
}

template <CoefficientRing R>
Series1<R> FormalDiffeo1<R>::series() const {
  auto s = tail;
  s.accumulate(1, multiplier);
  return s;
}

template <CoefficientRing R>
FormalDiffeo1<R> exp_vf(const VectorField1<R>& Y, int N) {
  int order = std::min(N, Y.f.order());
  auto f = cut(Y.f, order);
  auto term = x_of<R>(f.var());
  auto sum = term;
  for (int k = 1; k <= order; ++k) {
    term = cut(f * term.derive(), order).scaled(inv_int<R>(k));
    if (term.is_zero()) break;
    sum += term;
  }
  return FormalDiffeo1<R>::from_series(sum.truncated(order));
}

template <CoefficientRing R>
VectorField1<R> log_diffeo(const FormalDiffeo1<R>& h, int N) {
  if (!(h.multiplier == RingTraits<R>::one()))
    throw PreconditionError("not_tangent_to_identity", "logarithm needs multiplier 1");
  int order = std::min(N, h.order());
  // exp(f + c x^k) = exp(f) + c x^k + O(x^(k+1)).
  Series1<R> f(h.tail.var(), kInf);
  for (int k = 2; k <= order; ++k) {
    R have = f.is_zero() ? RingTraits<R>::zero() : exp_vf(VectorField1<R>(f), k).coeff(k);
    R c = h.tail.coeff(k) - have;
    if (!is_zero(c)) f.accumulate(k, c);
  }
  return VectorField1<R>(f.truncated(order));
}

namespace {

// sum_k f_k g^k, cut at degree n.
template <CoefficientRing R>
Series1<R> apply_series(const Series1<R>& f, const Series1<R>& g, int n) {
  auto gs = cut(g, n);
  Series1<R> r(g.var(), kInf);
  auto pw = Series1<R>::constant(g.var(), RingTraits<R>::one());
  int last = 0;
  for (const auto& [k, c] : f.terms()) {
    if (k > n) break;
    for (; last < k; ++last) pw = cut(pw * gs, n);
    r += pw.scaled(c);
  }
  return r;
}

}  // namespace

template <CoefficientRing R>
FormalDiffeo1<R> compose(const FormalDiffeo1<R>& h, const FormalDiffeo1<R>& g, int N) {
  int order = std::min({N, h.order(), g.order()});
  return FormalDiffeo1<R>::from_series(apply_series(h.series(), g.series(), order).truncated(order));
}

template <CoefficientRing R>
FormalDiffeo1<R> inverse(const FormalDiffeo1<R>& h, int N) {
  int order = std::min(N, h.order());
  auto linv = *RingTraits<R>::invert(h.multiplier);
  auto x = x_of<R>(h.tail.var());
  // g = (x - tail(g)) / l gains one correct degree per pass.
  auto g = x.scaled(linv);
  for (int it = 1; it < order; ++it) g = (x - apply_series(h.tail, g, order)).scaled(linv);
  return FormalDiffeo1<R>::from_series(g.truncated(order));
}

template <CoefficientRing R>
FormalDiffeo1<R> conjugate(const FormalDiffeo1<R>& g, const FormalDiffeo1<R>& h, int N) {
  return compose(h, compose(g, inverse(h, N), N), N);
}

template <CoefficientRing R>
VectorField1<R> pushforward(const VectorField1<R>& Y, const FormalDiffeo1<R>& h, int N) {
  int order = std::min({N, h.order(), Y.f.order()});
  auto hp = cut(h.series().derive(), order);
  auto num = cut(hp * cut(Y.f, order), order);
  auto hinv = cut(inverse(h, order).series(), order);
  auto r = apply_series(num, hinv, order).truncated(order);
  return VectorField1<R>(r);
}

template <CoefficientRing R>
FormalDiffeo1<R> iterate(const FormalDiffeo1<R>& h, int q, int N) {
  if (q < 0) throw InputError("bad_argument", "iterate needs q >= 0");
  auto r = FormalDiffeo1<R>::identity(std::min(N, h.order()));
  for (int k = 0; k < q; ++k) r = compose(h, r, N);
  return r;
}

template <CoefficientRing R>
bool is_identity(const FormalDiffeo1<R>& h, int N) {
  if (!(h.multiplier == RingTraits<R>::one())) return false;
  for (const auto& [k, c] : h.tail.terms())
    if (k <= N && !(c == RingTraits<R>::zero())) return false;
  return true;
}

template <CoefficientRing R>
FormalDiffeo1<R> commutator(const FormalDiffeo1<R>& h1, const FormalDiffeo1<R>& h2, int N) {
  return compose(h1, compose(h2, compose(inverse(h1, N), inverse(h2, N), N), N), N);
}

template <CoefficientRing R>
bool commutes_with_scaling(const FormalDiffeo1<R>& h, const R& a, int N) {
  // a h_k = h_k a^k for every k.
  R ak = a;
  int order = std::min(N, h.order());
  for (int k = 2; k <= order; ++k) {
    ak = ak * a;
    R c = h.tail.coeff(k);
    if (!(c * a == c * ak)) return false;
  }
  return true;
}

template <CoefficientRing R>
bool periodicity(const FormalDiffeo1<R>& h, int q, int N) {
  return is_identity(iterate(h, q, N), N);
}

Complex root_of_unity(int k, int n) {
  long double t = 2 * std::numbers::pi_v<long double> * k / n;
  return Complex(std::cos(t), std::sin(t));
}

VectorField1<Complex> pd_model_field(int m, int N) {
  if (m < 2) throw InputError("bad_argument", "m must be at least 2");
  Complex c(0, -2 * std::numbers::pi_v<long double> / m);
  auto num = Series1<Complex>::monomial("x", m + 1, c);
  auto den = Series1<Complex>::constant("x", Complex(m));
  den.accumulate(m, Complex(1));
  return VectorField1<Complex>(divide_unit(num, den, N));
}

FormalDiffeo1<Complex> pd_holonomy_model(int m, int N) {
  return exp_vf(pd_model_field(m, N), N).scaled(root_of_unity(1, m));
}

HolonomyGroupModel group_model(int p, int m, const VectorField1<Complex>& Y, int N, std::optional<Complex> mu,
                               std::optional<Complex> lambda) {
  if (p < 1 || m < 1) throw InputError("bad_argument", "p and m must be positive");
  if (!Y.f.is_zero() && Y.f.valuation() != m + 1)
    throw PreconditionError("vf_valuation", "group model needs valuation(Y) = m + 1");
  Complex mu_v = mu.value_or(root_of_unity(1, m));
  Complex la_v = lambda.value_or(root_of_unity(1, p));
  auto h1 = exp_vf(Y, N).scaled(mu_v);
  auto h2 = exp_vf(Y.scaled(Complex(-1)), N).scaled(la_v / mu_v);
  return {p, m, mu_v, la_v, Y, h1, h2};
}

std::string group_class_name(GroupClass g) { return g == GroupClass::Abelian ? "Abelian" : "NonSolvable"; }

GroupClass dichotomy(int p, int m) {
  if (p < 2 || m < 2) throw InputError("bad_argument", "need p >= 2 and m >= 2");
  return m % p == 0 ? GroupClass::Abelian : GroupClass::NonSolvable;
}

SzLambda sz_lambda(int p, int m) {
  if (p < 2 || m < 2) throw InputError("bad_argument", "need p >= 2 and m >= 2");
  Rational small(p, m + p), large(m + p, p);
  bool integer = large.is_integer();
  if (integer != (m % p == 0)) throw std::logic_error("sz_lambda: integrality disagrees with divisibility");
  return {small, large, integer};
}

namespace {

using State = std::array<cld, 1>;

HolonomySample transport(const OneForm2<Complex>& w, const HolonomyLoop& loop, cld x0) {
  using namespace boost::numeric::odeint;
  const auto& A = w.a();
  const auto& B = w.b();
  const long double two_pi = 2 * std::numbers::pi_v<long double>;
  std::size_t evals = 0;
  bool hit = false;
  auto rhs = [&](const State& s, State& ds, long double t) {
    ++evals;
    cld e = std::polar(1.0L, t);
    cld z = loop.center + loop.radius * e;
    cld a = A.evaluate(Complex(s[0]), Complex(z)).v;
    cld b = B.evaluate(Complex(s[0]), Complex(z)).v;
    if (std::abs(a) < 1e-300L) {
      hit = true;
      ds[0] = 0;
      return;
    }
    ds[0] = -b / a * cld(0, loop.radius) * e;
  };
  State s{x0};
  // Absolute tolerance relative to the starting point, so tiny x0 keep full
  // relative accuracy.
  long double abs_tol = loop.tolerance * std::max(std::abs(x0), 1e-300L);
  auto stepper = make_controlled(abs_tol, loop.tolerance, runge_kutta_dopri5<State, long double, State, long double>());
  std::size_t steps = integrate_adaptive(stepper, rhs, s, 0.0L, two_pi, two_pi / 256);
  if (hit || !std::isfinite(std::abs(s[0]))) throw PreconditionError("loop_hits_singularity", "transport met a zero of the dx-coefficient");
  return {x0, s[0], steps};
}

void check_loop(const OneForm2<Complex>& w, const HolonomyLoop& loop) {
  if (!(loop.radius > 0)) throw InputError("bad_argument", "loop radius must be positive");
  if (!(loop.tolerance > 0)) throw InputError("bad_argument", "tolerance must be positive");
  // The loop must avoid the singular points of the divisor.
  auto q = w.a().restrict_zero(0);
  long double scale = 0;
  for (const auto& [k, c] : q.terms()) scale = std::max(scale, c.abs());
  for (int i = 0; i < 720; ++i) {
    cld z = loop.center + loop.radius * std::polar(1.0L, 2 * std::numbers::pi_v<long double> * i / 720);
    if (std::abs(q.evaluate(Complex(z)).v) <= 1e-12L * std::max(1.0L, scale))
      throw PreconditionError("loop_hits_singularity", "the loop passes through a singular point of the divisor");
  }
}

}  // namespace

std::vector<HolonomySample> numeric_holonomy_serial(const OneForm2<Complex>& w, const HolonomyLoop& loop,
                                                    const std::vector<cld>& samples) {
  check_loop(w, loop);
  std::vector<HolonomySample> out;
  out.reserve(samples.size());
  for (cld x0 : samples) out.push_back(transport(w, loop, x0));
  return out;
}

std::vector<HolonomySample> numeric_holonomy(const OneForm2<Complex>& w, const HolonomyLoop& loop,
                                             const std::vector<cld>& samples) {
  check_loop(w, loop);
  std::vector<HolonomySample> out(samples.size());
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < samples.size(); ++i) {
    try {
      out[i] = transport(w, loop, samples[i]);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

#define FF_INSTANTIATE(R)                                                                               \
  template struct VectorField1<R>;                                                                      \
  template struct FormalDiffeo1<R>;                                                                     \
  template FormalDiffeo1<R> exp_vf(const VectorField1<R>&, int);                                        \
  template VectorField1<R> log_diffeo(const FormalDiffeo1<R>&, int);                                    \
  template FormalDiffeo1<R> compose(const FormalDiffeo1<R>&, const FormalDiffeo1<R>&, int);             \
  template FormalDiffeo1<R> inverse(const FormalDiffeo1<R>&, int);                                      \
  template FormalDiffeo1<R> conjugate(const FormalDiffeo1<R>&, const FormalDiffeo1<R>&, int);           \
  template VectorField1<R> pushforward(const VectorField1<R>&, const FormalDiffeo1<R>&, int);           \
  template FormalDiffeo1<R> iterate(const FormalDiffeo1<R>&, int, int);                                 \
  template bool is_identity(const FormalDiffeo1<R>&, int);                                              \
  template FormalDiffeo1<R> commutator(const FormalDiffeo1<R>&, const FormalDiffeo1<R>&, int);          \
  template bool commutes_with_scaling(const FormalDiffeo1<R>&, const R&, int);                          \
  template bool periodicity(const FormalDiffeo1<R>&, int, int);

FF_INSTANTIATE(Rational)
FF_INSTANTIATE(Complex)
FF_INSTANTIATE(ParamPoly)

#undef FF_INSTANTIATE

}  // namespace ff
