#include <random>

#include "doctest.h"
#include "ff/classify.hpp"
#include "ff/error.hpp"
#include "support/poly.hpp"
#include "support/random_series.hpp"

using namespace ff;
using fftest::poly;
using fftest::upoly;
using Form = OneForm2<Rational>;

namespace {

const VarNames XY{"x", "y"};

Form saddle_example() { return fftest::prenormal<Rational>(4, 2, Rational(-5), upoly({{0, 1}, {1, 1}})); }

OneForm2<ParamPoly> saddle_example_param() {
  Series1<ParamPoly> U("x");
  U.accumulate(0, ParamPoly(1));
  U.accumulate(1, ParamPoly::parameter());
  return fftest::prenormal<ParamPoly>(4, 2, ParamPoly(-5), U);
}

// U = 1 + a x^m with p = 2, m = 6, alpha = -5.
Form sextic_family(long a) {
  auto U = upoly({{0, 1}});
  if (a != 0) U.accumulate(6, Rational(a));
  return fftest::prenormal<Rational>(4, 2, Rational(-5), U);
}

// x dz - (m z + a x^m) dx.
Form pd_model(int m, const Rational& a) { return {poly({{0, 1, -m}, {m, 0, -a}}), poly({{1, 0, 1}})}; }

}  // namespace

TEST_CASE("parse_prenormal reads off n, p, alpha, U") {
  auto d = parse_prenormal(saddle_example());
  CHECK(d.n == 4);
  CHECK(d.p == 2);
  CHECK(d.alpha == Rational(-5));
  CHECK(d.U == upoly({{0, 1}, {1, 1}}));

  auto d2 = parse_prenormal(fftest::prenormal<Rational>(6, 3, Rational(-5), upoly({{0, 1}})));
  CHECK(d2.n == 6);
  CHECK(d2.p == 3);
  CHECK(d2.alpha == Rational(-5));
  CHECK(d2.U == upoly({{0, 1}}));

  // Any nonzero multiple parses to the same data.
  auto scaled = saddle_example().scaled(Rational(-3, 7));
  auto d3 = parse_prenormal(scaled);
  CHECK(d3.alpha == Rational(-5));
  CHECK(prenormal_form(d3) == saddle_example());

  try {
    parse_prenormal(Form(poly({{0, 1, 1}}, XY), poly({{1, 0, 1}}, XY)));
    FAIL("expected shape mismatch");
  } catch (const PreconditionError& e) {
    CHECK(e.code() == "shape_mismatch");
  }
  // 2y dy + 4x^3 dx + x y dy has a forbidden y-term.
  CHECK_THROWS_AS(parse_prenormal(Form(poly({{3, 0, 4}}, XY), poly({{0, 1, 2}, {1, 1, 1}}, XY))),
                  PreconditionError);
  // p = 1.
  CHECK_THROWS_AS(parse_prenormal(Form(poly({{3, 0, 4}}, XY), poly({{0, 1, 2}, {1, 0, 1}}, XY))),
                  PreconditionError);
}

TEST_CASE("parse_prenormal round trip on random data") {
  std::mt19937 rng(11);
  for (int t = 0; t < 40; ++t) {
    int n = 3 + static_cast<int>(rng() % 6);
    int p = 2 + static_cast<int>(rng() % 4);
    auto alpha = fftest::random_rational(rng, 9, 4);
    if (alpha.is_zero()) alpha = Rational(1);
    auto U = fftest::random_series1(rng, 1, 5, kInf, 0.6, "x");
    U.accumulate(0, Rational(1) - U.coeff(0));
    auto d = parse_prenormal(fftest::prenormal<Rational>(n, p, alpha, U));
    CHECK(d.n == n);
    CHECK(d.p == p);
    CHECK(d.alpha == alpha);
    CHECK(d.U == U);
  }
}

TEST_CASE("takens case split") {
  CHECK(takens_case(3, 2) == TakensCase::Cusp);
  CHECK(takens_case(4, 2) == TakensCase::Saddle);
  CHECK(takens_case(7, 2) == TakensCase::SaddleNodeClass);
  for (int n = 3; n < 30; ++n)
    for (int p = 2; p < 20; ++p) {
      auto c = takens_case(n, p);
      CHECK((c == TakensCase::Saddle) == (2 * p == n));
      CHECK((c == TakensCase::Cusp) == (2 * p > n));
    }
  CHECK(case_name(TakensCase::SaddleNodeClass) == "saddle-node-class");
}

TEST_CASE("saddle subcases") {
  CHECK(saddle_subcase(Rational(4)) == SaddleSubcase::AlphaPm4);
  CHECK(saddle_subcase(Rational(-4)) == SaddleSubcase::AlphaPm4);
  CHECK(saddle_subcase(Rational(-5)) == SaddleSubcase::ResonantPair);
  CHECK(saddle_subcase(Rational(-6)) == SaddleSubcase::SimplePair);
  CHECK(saddle_subcase(Rational(1)) == SaddleSubcase::SimplePair);
  CHECK(saddle_subcase(cld(-5, 0)) == SaddleSubcase::ResonantPair);
  CHECK(saddle_subcase(cld(-6, 0)) == SaddleSubcase::SimplePair);
  CHECK(saddle_subcase(cld(4, 0)) == SaddleSubcase::AlphaPm4);

  // Rational roots r, 1/r of 2z^2 + alpha z + 2 come from alpha = -2(r + 1/r).
  std::mt19937 rng(5);
  for (int t = 0; t < 60; ++t) {
    auto r = fftest::random_rational(rng, 12, 7);
    if (r.is_zero() || r * r == Rational(1)) continue;
    auto alpha = Rational(-2) * (r + Rational(1) / r);
    CHECK(saddle_subcase(alpha) == SaddleSubcase::ResonantPair);
    CHECK(subcase_name(saddle_subcase(alpha)) == "resonant_pair");
  }
}

TEST_CASE("gpd_condition") {
  auto a = gpd_condition(2, 6);
  REQUIRE(a.exact);
  CHECK(*a.exact == Rational(-5));
  CHECK(*gpd_condition(4, 12).exact == Rational(-5));
  auto irr = gpd_condition(2, 2);
  CHECK(irr.irrational());
  CHECK(irr.approx == doctest::Approx(-4.2426407).epsilon(1e-7));
  CHECK_THROWS_AS(gpd_condition(1, 3), InputError);
}

TEST_CASE("gpd_detect examples and Vieta") {
  auto g = gpd_detect(2, Rational(-5));
  REQUIRE(g);
  CHECK(g->m == 6);
  CHECK(g->z1 == Rational(2));
  CHECK(g->z2 == Rational(1, 2));

  auto g4 = gpd_detect(4, Rational(-5));
  REQUIRE(g4);
  CHECK(g4->m == 12);
  CHECK(g4->z1 == Rational(2));

  auto gm = gpd_detect(2, Rational(5));
  REQUIRE(gm);
  CHECK(gm->m == 6);
  CHECK(gm->z1 == Rational(-2));
  CHECK(gm->z2 == Rational(-1, 2));

  CHECK_FALSE(gpd_detect(2, Rational(-6)));
  CHECK_FALSE(gpd_detect(2, Rational(4)));
  // Roots 3/2 and 2/3 give m = 5/2 or a negative value.
  CHECK_FALSE(gpd_detect(2, Rational(-13, 3)));

  auto c = gpd_detect(2, cld(-5, 0));
  REQUIRE(c);
  CHECK(c->m == 6);
  CHECK(std::abs(c->z1 - cld(2)) < 1e-12L);
}

TEST_CASE("gpd_condition and gpd_detect are inverse") {
  int checked = 0;
  for (int p = 2; p <= 40; ++p)
    for (int m = 2; m <= 40; ++m) {
      auto a = gpd_condition(p, m);
      if (a.irrational()) continue;
      auto g = gpd_detect(p, *a.exact);
      REQUIRE(g);
      CHECK(g->m == m);
      CHECK(g->z1 * g->z2 == Rational(1));
      CHECK(g->z1 + g->z2 == -*a.exact / Rational(2));
      // The partner point is a resonant saddle.
      auto partner = Rational(p) * (g->z2 - g->z1) / g->z1;
      CHECK(partner.sign() < 0);
      auto t = classify_singularity(fftest::mat(1, 0, 0, partner));
      CHECK(std::holds_alternative<Resonant>(t));
      ++checked;
    }
  CHECK(checked > 10);
}

TEST_CASE("pd_vs_dicritical on the analytic model") {
  for (int m : {2, 3, 6}) {
    for (long a : {0L, 1L, -3L}) {
      auto w = pd_model(m, Rational(a));
      auto h = pd_vs_dicritical(w, m, PdMethod::Homological, m + 4);
      auto c = pd_vs_dicritical(w, m, PdMethod::Chain, m + 4);
      CHECK(h.coefficient == Rational(a));
      CHECK(c.coefficient == Rational(a));
      CHECK(h.verdict == c.verdict);
      CHECK((h.verdict == Verdict::Dicritical) == (a == 0));
      REQUIRE(c.linear);
      CHECK(projectively_equal(*c.linear, fftest::mat(1, 0, a, 1)));
    }
  }
  CHECK(verdict_string(Verdict::Dicritical, 12) == "Dicritical-to-order-12");
  CHECK_THROWS_AS(pd_vs_dicritical(pd_model(3, Rational(1)), 2, PdMethod::Homological, 8), PreconditionError);
  Form saddle(poly({{0, 1, 1}}), poly({{1, 0, 1}}));
  CHECK_THROWS_AS(pd_vs_dicritical(saddle, 2, PdMethod::Chain, 8), PreconditionError);
}

TEST_CASE("both methods agree on random perturbations of the model") {
  std::mt19937 rng(23);
  for (int t = 0; t < 12; ++t) {
    int m = 2 + static_cast<int>(rng() % 3);
    auto a = fftest::random_rational(rng, 5, 3);
    // Multiply by a unit and add higher order terms that keep x = 0 invariant.
    auto w = pd_model(m, a);
    auto unit = fftest::random_series2(rng, 0, 2, Precision::exact(), 0.5, {"x", "z"});
    unit.accumulate(0, 0, Rational(1) - unit.coeff(0, 0));
    auto extra = fftest::random_series2(rng, 2, 4, Precision::exact(), 0.4, {"x", "z"});
    auto xextra = fftest::random_series2(rng, 1, 3, Precision::exact(), 0.4, {"x", "z"});
    Form pert(w.a() + extra, w.b() + poly({{1, 0, 1}}) * xextra);
    pert = pert.multiplied(unit);
    int N = m + 4;
    auto h = pd_vs_dicritical(pert, m, PdMethod::Homological, N);
    auto c = pd_vs_dicritical(pert, m, PdMethod::Chain, N);
    CHECK(h.coefficient == c.coefficient);
    CHECK(h.verdict == c.verdict);
  }
}

TEST_CASE("resonant saddle example through the whole pipeline") {
  auto rep = analyze(saddle_example(), 12);
  CHECK(rep.tag == TakensCase::Saddle);
  REQUIRE(rep.subcase);
  CHECK(*rep.subcase == SaddleSubcase::ResonantPair);
  REQUIRE(rep.m);
  CHECK(*rep.m == 6);
  CHECK(*rep.z1 == Rational(2));
  CHECK(*rep.z2 == Rational(1, 2));
  CHECK(rep.gpd_alpha_check);
  CHECK(*rep.epsilon == Rational(5934060));
  CHECK(*rep.chain_coefficient == Rational(5934060));
  CHECK(rep.methods_agree);
  CHECK(rep.verdict == Verdict::GeneralizedPD);
  CHECK(rep.verdict_str() == "GeneralizedPD");
}

TEST_CASE("resonant saddle example with a parameter") {
  auto rep = analyze(saddle_example_param(), 12);
  REQUIRE(rep.m);
  CHECK(*rep.m == 6);
  ParamPoly expected(std::vector<Rational>{0, 0, 0, 0, 0, 0, Rational(5934060)});
  CHECK(*rep.epsilon == expected);
  CHECK(*rep.chain_coefficient == expected);
  CHECK(rep.verdict == Verdict::GeneralizedPD);
}

TEST_CASE("the family U = 1 + a x^6") {
  auto rep1 = analyze(sextic_family(1), 12);
  CHECK(*rep1.m == 6);
  CHECK(*rep1.epsilon == Rational(-20));
  CHECK(*rep1.chain_coefficient == Rational(-20));
  CHECK(rep1.verdict == Verdict::GeneralizedPD);
  // Closed form p * alpha * z1 * a of the off-diagonal entry.
  CHECK(Rational(2) * Rational(-5) * *rep1.z1 * Rational(1) == Rational(-20));

  for (int N : {8, 12, 16}) {
    auto rep0 = analyze(sextic_family(0), N);
    CHECK(rep0.epsilon->is_zero());
    CHECK(rep0.chain_coefficient->is_zero());
    CHECK(rep0.verdict == Verdict::Dicritical);
    CHECK(rep0.verdict_str() == "Dicritical-to-order-" + std::to_string(N));
  }
}

TEST_CASE("analyze outside the resonant saddle") {
  auto cusp = analyze(fftest::prenormal<Rational>(3, 2, Rational(1), upoly({{0, 1}})), 12);
  CHECK(cusp.tag == TakensCase::Cusp);
  CHECK(cusp.verdict == Verdict::NotApplicable);
  CHECK_FALSE(cusp.m);
  auto sn = analyze(fftest::prenormal<Rational>(7, 2, Rational(1), upoly({{0, 1}})), 12);
  CHECK(sn.tag == TakensCase::SaddleNodeClass);
  auto simple = analyze(fftest::prenormal<Rational>(4, 2, Rational(-6), upoly({{0, 1}})), 12);
  CHECK(*simple.subcase == SaddleSubcase::SimplePair);
  CHECK_FALSE(simple.m);
  CHECK(simple.verdict == Verdict::NotApplicable);
  auto pm4 = analyze(fftest::prenormal<Rational>(4, 2, Rational(4), upoly({{0, 1}})), 12);
  CHECK(*pm4.subcase == SaddleSubcase::AlphaPm4);
  // Resonant pair whose ratio is not an integer.
  auto noint = analyze(fftest::prenormal<Rational>(4, 2, Rational(-13, 3), upoly({{0, 1}})), 12);
  CHECK(*noint.subcase == SaddleSubcase::ResonantPair);
  CHECK_FALSE(noint.m);
  CHECK(noint.z1);
}

TEST_CASE("float mode agrees with exact mode") {
  auto w = map_coefficients<Complex>(saddle_example(), [](const Rational& q) { return Complex(q.to_ld()); });
  auto rep = analyze(w, 12);
  CHECK(rep.approximate);
  REQUIRE(rep.m);
  CHECK(*rep.m == 6);
  CHECK(std::abs(rep.epsilon->v - cld(5934060)) < 1e-6L * 5934060);
  CHECK(rep.verdict == Verdict::GeneralizedPD);
}
