#include "ff/classify.hpp"

#include <cmath>

#include "ff/error.hpp"

namespace ff {

namespace {

[[noreturn]] void mismatch(const std::string& what) {
  throw PreconditionError("shape_mismatch", "not of the form d(y^2 + x^n) + alpha x^p U(x) dy: " + what);
}

template <CoefficientRing R>
bool near_zero(const R& a, long double tol) {
  if constexpr (std::is_same_v<R, Complex>)
    return a.is_zero(tol);
  else
    return is_zero(a);
}

}  // namespace

template <CoefficientRing R>
PrenormalData<R> parse_prenormal(const OneForm2<R>& w) {
  auto lin = w.b().coeff(0, 1);
  auto inv = RingTraits<R>::invert(lin);
  if (is_zero(lin) || !inv) mismatch("no invertible y dy term");
  auto s = w.scaled(from_int<R>(2) * *inv);
  const auto& A = s.a();
  const auto& B = s.b();
  if (A.size() != 1) mismatch("dx-coefficient is not a single power of x");
  const auto& [e, c] = *A.terms().begin();
  int n = e.i + 1;
  if (e.j != 0 || n < 3 || !(c == from_int<R>(n))) mismatch("dx-coefficient is not n x^(n-1) with n >= 3");
  Series1<R> f("x", kInf);
  for (const auto& [eb, cb] : B.terms()) {
    if (eb.j == 0)
      f.accumulate(eb.i, cb);
    else if (!(eb.i == 0 && eb.j == 1))
      mismatch("dy-coefficient depends on y beyond 2y");
  }
  if (f.is_zero()) mismatch("alpha vanishes");
  int p = f.valuation();
  if (p < 2) mismatch("p < 2");
  R alpha = f.coeff(p);
  auto ainv = RingTraits<R>::invert(alpha);
  if (!ainv) throw PreconditionError("parametric_alpha", "alpha must be a nonzero constant");
  int order = B.order() == kInf ? kInf : B.order() - p;
  Series1<R> U("x", order);
  for (const auto& [k, ck] : f.terms())
    if (k - p <= order) U.accumulate(k - p, ck * *ainv);
  return {n, p, alpha, U};
}

template <CoefficientRing R>
OneForm2<R> prenormal_form(const PrenormalData<R>& d) {
  VarNames v{"x", "y"};
  auto a = Series2<R>::monomial(v, d.n - 1, 0, from_int<R>(d.n));
  auto b = Series2<R>::monomial(v, 0, 1, from_int<R>(2));
  Series2<R> u(v, d.U.is_exact() ? Precision::exact() : Precision::total(d.U.order() + d.p));
  for (const auto& [k, c] : d.U.terms()) u.accumulate(k + d.p, 0, c * d.alpha);
  return {a, b + u};
}

std::string case_name(TakensCase c) {
  switch (c) {
    case TakensCase::Cusp: return "cusp";
    case TakensCase::Saddle: return "saddle";
    case TakensCase::SaddleNodeClass: return "saddle-node-class";
  }
  return "?";
}

std::string subcase_name(SaddleSubcase s) {
  switch (s) {
    case SaddleSubcase::AlphaPm4: return "alpha_pm4";
    case SaddleSubcase::SimplePair: return "simple_pair";
    case SaddleSubcase::ResonantPair: return "resonant_pair";
  }
  return "?";
}

TakensCase takens_case(int n, int p) {
  if (2 * p > n) return TakensCase::Cusp;
  if (2 * p == n) return TakensCase::Saddle;
  return TakensCase::SaddleNodeClass;
}

SaddleSubcase saddle_subcase(const Rational& alpha) {
  auto a2 = alpha * alpha;
  if (a2 == Rational(16)) return SaddleSubcase::AlphaPm4;
  auto disc = a2 - Rational(16);
  if (disc.sign() <= 0) return SaddleSubcase::SimplePair;
  // (alpha^2 - 16)/alpha^2 < 1 always holds here.
  return disc.sqrt() ? SaddleSubcase::ResonantPair : SaddleSubcase::SimplePair;
}

SaddleSubcase saddle_subcase(cld alpha, long double tol) {
  if (std::abs(alpha - cld(4)) <= tol * 4 || std::abs(alpha + cld(4)) <= tol * 4) return SaddleSubcase::AlphaPm4;
  if (std::abs(alpha.imag()) > tol * std::max(1.0L, std::abs(alpha))) return SaddleSubcase::SimplePair;
  long double a = alpha.real();
  long double s2 = (a * a - 16) / (a * a);
  if (s2 <= 0 || s2 >= 1) return SaddleSubcase::SimplePair;
  return rational_near(std::sqrt(s2), tol) ? SaddleSubcase::ResonantPair : SaddleSubcase::SimplePair;
}

GpdAlpha gpd_condition(int p, int m) {
  if (p < 2 || m < 2) throw InputError("bad_argument", "need p >= 2 and m >= 2");
  long radicand = static_cast<long>(p) * (m + p);
  long double approx = -2.0L * (m + 2 * p) / std::sqrt(static_cast<long double>(radicand));
  auto r = exact_isqrt(mpz_class(radicand));
  if (!r) return {std::nullopt, approx};
  return {Rational(-2 * (m + 2 * p)) / Rational(mpq_class(*r)), approx};
}

std::optional<GpdDetection<Rational>> gpd_detect(int p, const Rational& alpha) {
  if (saddle_subcase(alpha) != SaddleSubcase::ResonantPair) return std::nullopt;
  auto s = *(alpha * alpha - Rational(16)).sqrt();
  std::array<Rational, 2> roots{(-alpha + s) / Rational(4), (-alpha - s) / Rational(4)};
  for (int k = 0; k < 2; ++k) {
    const auto& z1 = roots[k];
    const auto& z2 = roots[1 - k];
    auto q = Rational(p) * (z1 - z2) / z2;
    if (!q.is_integer() || q < Rational(2)) continue;
    int m = static_cast<int>(q.num().get_si());
    auto on_curve = [&](const Rational& z) { return (Rational(2) * z * z + alpha * z + Rational(2)).is_zero(); };
    if (!on_curve(z1) || !on_curve(z2) || !(Rational(p) * (z1 - z2) == Rational(m) * z2))
      throw std::logic_error("gpd_detect: integer solution fails the root formula");
    return GpdDetection<Rational>{m, z1, z2};
  }
  return std::nullopt;
}

std::optional<GpdDetection<cld>> gpd_detect(int p, cld alpha, long double tol) {
  if (saddle_subcase(alpha, tol) != SaddleSubcase::ResonantPair) return std::nullopt;
  cld s = std::sqrt(alpha * alpha - cld(16));
  std::array<cld, 2> roots{(-alpha + s) / 4.0L, (-alpha - s) / 4.0L};
  for (int k = 0; k < 2; ++k) {
    cld z1 = roots[k], z2 = roots[1 - k];
    cld q = cld(p) * (z1 - z2) / z2;
    long double r = std::round(q.real());
    if (r < 2 || std::abs(q - cld(r)) > tol * std::max(1.0L, r)) continue;
    int m = static_cast<int>(r);
    auto res = [&](cld z) { return std::abs(2.0L * z * z + alpha * z + 2.0L); };
    if (res(z1) > tol * 100 || res(z2) > tol * 100)
      throw std::logic_error("gpd_detect: roots fail the quadratic");
    return GpdDetection<cld>{m, z1, z2};
  }
  return std::nullopt;
}

std::string verdict_string(Verdict v, int order) {
  switch (v) {
    case Verdict::GeneralizedPD: return "GeneralizedPD";
    case Verdict::Dicritical: return "Dicritical-to-order-" + std::to_string(order);
    case Verdict::NotApplicable: return "NotApplicable";
  }
  return "?";
}

std::string method_name(PdMethod m) { return m == PdMethod::Homological ? "homological" : "chain"; }

template <CoefficientRing R>
PdDecision<R> pd_vs_dicritical(const OneForm2<R>& local, int m, PdMethod method, int order, long double tol) {
  auto L = linear_part(dual(local), RingTraits<R>::zero(), RingTraits<R>::zero());
  auto type = classify_singularity(L, tol);
  auto* pd = std::get_if<PoincareDulacCandidate>(&type);
  if (!pd || pd->m != m)
    throw PreconditionError("not_pd_candidate", "linear part is " + type_to_string(type) + ", expected ratio " +
                                                    std::to_string(m));
  if (method == PdMethod::Homological) {
    auto X = to_fibered_field(local, m, order);
    auto res = normalize(X, order);
    if (res.residual_valuation <= order) throw std::logic_error("normalize left a residual of low order");
    auto v = near_zero(res.epsilon, tol) ? Verdict::Dicritical : Verdict::GeneralizedPD;
    return {method, v, res.epsilon, order, std::nullopt, res.residual_valuation};
  }
  auto path = pd_chain(local, m);
  auto F = linear_part(dual(path.centered_final_form()), RingTraits<R>::zero(), RingTraits<R>::zero());
  const R& c = F(0, 0);
  if (near_zero(c, tol) || !(F(1, 1) == c) || !near_zero(F(0, 1), tol))
    throw PreconditionError("pd_chain_shape", "final linear part is not [[c, 0], [d, c]]: " + F.to_string());
  auto d = try_divide(F(1, 0), c);
  if (!d) throw PreconditionError("pd_chain_shape", "diagonal entry is not a unit");
  auto v = near_zero(*d, tol) ? Verdict::Dicritical : Verdict::GeneralizedPD;
  return {method, v, *d, order, F};
}

namespace {

template <CoefficientRing R>
std::optional<Rational> constant_rational(const R& a) {
  if constexpr (std::is_same_v<R, ParamPoly>) {
    if (!a.is_constant()) return std::nullopt;
    return a.constant();
  } else {
    return RingTraits<R>::as_rational(a);
  }
}

}  // namespace

template <CoefficientRing R>
GPDReport<R> analyze(const OneForm2<R>& w, int order, long double tol) {
  GPDReport<R> rep{parse_prenormal(w), TakensCase::Saddle};
  rep.order = order;
  const auto& d = rep.data;
  rep.tag = takens_case(d.n, d.p);
  if (rep.tag != TakensCase::Saddle) return rep;

  std::optional<GpdDetection<R>> det;
  if constexpr (RingTraits<R>::exact) {
    auto alpha = constant_rational(d.alpha);
    if (!alpha) throw PreconditionError("parametric_alpha", "alpha must be a rational constant");
    rep.subcase = saddle_subcase(*alpha);
    if (*rep.subcase == SaddleSubcase::ResonantPair) {
      auto s = *(*alpha * *alpha - Rational(16)).sqrt();
      rep.z1 = RingTraits<R>::from_rational((-*alpha + s) / Rational(4));
      rep.z2 = RingTraits<R>::from_rational((-*alpha - s) / Rational(4));
    }
    if (auto g = gpd_detect(d.p, *alpha)) {
      auto lift = [](const Rational& q) { return RingTraits<R>::from_rational(q); };
      det = GpdDetection<R>{g->m, lift(g->z1), lift(g->z2)};
      rep.gpd_alpha_check = gpd_condition(d.p, g->m).exact == *alpha;
    }
  } else {
    rep.approximate = true;
    cld alpha = *RingTraits<R>::as_complex(d.alpha);
    rep.subcase = saddle_subcase(alpha, tol);
    if (*rep.subcase == SaddleSubcase::ResonantPair) {
      cld s = std::sqrt(alpha * alpha - cld(16));
      rep.z1 = R((-alpha + s) / 4.0L);
      rep.z2 = R((-alpha - s) / 4.0L);
    }
    if (auto g = gpd_detect(d.p, alpha, tol)) {
      det = GpdDetection<R>{g->m, R(g->z1), R(g->z2)};
      rep.gpd_alpha_check = std::abs(gpd_condition(d.p, g->m).approx - alpha) <= tol * std::abs(alpha);
    }
  }
  if (!det) return rep;
  rep.m = det->m;
  rep.z1 = det->z1;
  rep.z2 = det->z2;

  auto path = blowup_chain(w, d.p);
  const auto& final_form = path.final_form();
  for (const R& z : {det->z1, det->z2}) {
    auto t = classify_singularity(linear_part(dual(final_form), RingTraits<R>::zero(), z), tol);
    auto* pd = std::get_if<PoincareDulacCandidate>(&t);
    if (pd && pd->m == det->m) rep.pd_point = z;
  }
  if (!rep.pd_point) throw std::logic_error("analyze: no point of ratio m on the divisor");
  auto local = recenter(final_form, *rep.pd_point);
  auto hom = pd_vs_dicritical(local, det->m, PdMethod::Homological, order, tol);
  auto chain = pd_vs_dicritical(local, det->m, PdMethod::Chain, order, tol);
  rep.epsilon = hom.coefficient;
  rep.chain_coefficient = chain.coefficient;
  rep.methods_agree = hom.verdict == chain.verdict && hom.coefficient == chain.coefficient;
  rep.verdict = hom.verdict;
  return rep;
}

#define FF_INSTANTIATE(R)                                                                       \
  template PrenormalData<R> parse_prenormal(const OneForm2<R>&);                               \
  template OneForm2<R> prenormal_form(const PrenormalData<R>&);                                \
  template PdDecision<R> pd_vs_dicritical(const OneForm2<R>&, int, PdMethod, int, long double); \
  template GPDReport<R> analyze(const OneForm2<R>&, int, long double);

FF_INSTANTIATE(Rational)
FF_INSTANTIATE(Complex)
FF_INSTANTIATE(ParamPoly)

#undef FF_INSTANTIATE

}  // namespace ff
