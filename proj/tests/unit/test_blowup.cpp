#include <random>

#include "doctest.h"
#include "ff/blowup.hpp"
#include "ff/error.hpp"
#include "support/oracles.hpp"
#include "support/poly.hpp"
#include "support/random_series.hpp"

using namespace ff;
using fftest::poly;
using fftest::upoly;
using S2 = Series2<Rational>;
using Form = OneForm2<Rational>;

namespace {

const VarNames XY{"x", "y"};

Form saddle_example() { return fftest::prenormal<Rational>(4, 2, Rational(-5), upoly({{0, 1}, {1, 1}})); }

OneForm2<ParamPoly> param_saddle_example() {
  Series1<ParamPoly> U("x");
  U.accumulate(0, ParamPoly(1));
  U.accumulate(1, ParamPoly::parameter());
  return fftest::prenormal<ParamPoly>(4, 2, ParamPoly(-5), U);
}

}  // namespace

TEST_CASE("chart 1 examples") {
  auto r = blowup_chart1(saddle_example());
  CHECK(r.divided_power == 1);
  CHECK_FALSE(r.dicritical);
  CHECK(r.transformed.a() == poly({{0, 2, 2}, {2, 0, 4}, {1, 1, -5}, {2, 1, -5}}));
  CHECK(r.transformed.b() == poly({{1, 1, 2}, {2, 0, -5}, {3, 0, -5}}));
  CHECK(r.transformed.vars() == VarNames{"x", "z"});

  Form radial(poly({{0, 1, -1}}, XY), poly({{1, 0, 1}}, XY));
  auto rr = blowup_chart1(radial);
  CHECK(rr.dicritical);
  CHECK(rr.divided_power == 2);

  Form hyp(poly({{0, 1, 1}}, XY), poly({{1, 0, 1}}, XY));
  auto rh = blowup_chart1(hyp);
  CHECK_FALSE(rh.dicritical);
  CHECK(rh.divided_power == 1);
  CHECK(rh.transformed == Form(poly({{0, 1, 2}}), poly({{1, 0, 1}})));

  Form regular(poly({{0, 0, 1}}, XY), poly({{1, 0, 1}}, XY));
  CHECK_THROWS_AS(blowup_chart1(regular), PreconditionError);
  CHECK_THROWS_AS(blowup_chart2(regular), PreconditionError);
}

TEST_CASE("chart 2 examples") {
  Form radial(poly({{0, 1, -1}}, XY), poly({{1, 0, 1}}, XY));
  auto r = blowup_chart2(radial);
  CHECK(r.dicritical);
  CHECK(r.transformed.vars() == VarNames{"w", "y"});
  Form hyp(poly({{0, 1, 1}}, XY), poly({{1, 0, 1}}, XY));
  auto h = blowup_chart2(hyp);
  CHECK_FALSE(h.dicritical);
  CHECK(h.divided_power == 1);
  // x = wy: y(y dw + w dy) + wy dy, divided by y.
  CHECK(h.transformed == Form(poly({{0, 1, 1}}, {"w", "y"}), poly({{1, 0, 2}}, {"w", "y"})));
}

TEST_CASE("division is maximal and follows the order rule") {
  std::mt19937 rng(31);
  for (int t = 0; t < 30; ++t) {
    int nu = 1 + t % 3;
    Form w(fftest::random_series2(rng, nu, nu + 3, {}, 0.7), fftest::random_series2(rng, nu, nu + 3, {}, 0.7));
    if (w.valuation() != nu) continue;
    auto r = blowup_chart1(w);
    CHECK(std::min(r.transformed.a().valuation_in(0), r.transformed.b().valuation_in(0)) == 0);
    CHECK(r.divided_power == (r.dicritical ? nu + 1 : nu));
  }
  // Radial lowest part times a unit plus higher terms: dicritical, divides by nu + 1.
  for (int nu = 1; nu <= 3; ++nu) {
    S2 xk = poly({{nu - 1, 0, 1}}, XY);
    Form w((poly({{0, 1, -1}}, XY) * xk) + poly({{nu + 1, 0, 3}}, XY), poly({{1, 0, 1}}, XY) * xk);
    auto r = blowup_chart1(w);
    CHECK(r.dicritical);
    CHECK(r.divided_power == nu + 1);
  }
}

TEST_CASE("charts agree on the overlap") {
  std::mt19937 rng(32);
  for (int t = 0; t < 10; ++t) {
    Form w(fftest::random_series2(rng, 1, 4, {}, 0.7), fftest::random_series2(rng, 1, 4, {}, 0.7));
    auto r1 = blowup_chart1(w).transformed, r2 = blowup_chart2(w).transformed;
    // Pull chart 2 back with w = 1/z, y = x z and compare foliations pointwise.
    for (int k = 0; k < 5; ++k) {
      fftest::cld x(0.3L + 0.1L * k, 0.2L), z(0.7L, -0.4L + 0.15L * k);
      fftest::cld W = 1.0L / z, Y = x * z;
      fftest::cld A = fftest::eval(r2.a(), W, Y), B = fftest::eval(r2.b(), W, Y);
      fftest::cld pa = B * z, pb = x * B - A / (z * z);
      fftest::cld a1 = fftest::eval(r1.a(), x, z), b1 = fftest::eval(r1.b(), x, z);
      long double scale = std::abs(a1 * pb) + std::abs(b1 * pa) + 1e-30L;
      CHECK(std::abs(a1 * pb - b1 * pa) / scale < 1e-15L);
    }
  }
}

TEST_CASE("chains") {
  auto path = blowup_chain(saddle_example(), 2);
  CHECK(path.final_form() ==
        Form(poly({{0, 2, 4}, {0, 0, 4}, {0, 1, -10}, {1, 1, -10}}), poly({{1, 1, 2}, {1, 0, -5}, {2, 0, -5}})));
  CHECK(path.total_divided_power() == 3);
  CHECK(path.macro_agrees);
  CHECK(path.components == std::vector<std::string>{"D1", "D2"});
  CHECK(path.self_intersections == std::vector<int>{-2, -1});

  auto p3 = blowup_chain(fftest::prenormal<Rational>(6, 3, Rational(4), upoly({{0, 1}})), 3);
  CHECK(p3.final_form() == Form(poly({{0, 2, 6}, {0, 0, 6}, {0, 1, 12}}), poly({{1, 1, 2}, {1, 0, 4}})));
  CHECK(p3.self_intersections == std::vector<int>{-2, -2, -1});
  auto pts = singular_points_on_divisor(p3);
  REQUIRE(pts.points.size() == 1);
  CHECK(*pts.points[0].exact == Rational(-1));
  CHECK(pts.points[0].multiplicity == 2);
  CHECK(pts.has_corner);

  auto id = blowup_chain(saddle_example(), 0);
  CHECK(id.steps.empty());
  CHECK(id.final_form() == saddle_example());

  // The continuing point leaves the origin: y^2 - x^2 blown up twice.
  Form off(poly({{1, 0, -2}}, XY), poly({{0, 1, 2}}, XY));
  CHECK_THROWS_AS(blowup_chain(off, 2), PreconditionError);
}

TEST_CASE("iterated chain equals one-shot substitution") {
  std::mt19937 rng(33);
  for (int p = 2; p <= 5; ++p)
    for (int t = 0; t < 3; ++t) {
      auto U = fftest::random_series1(rng, 1, 4, kInf);
      U.accumulate(0, Rational(1));
      Rational alpha = fftest::random_rational(rng) + Rational(10);
      auto path = blowup_chain(fftest::prenormal<Rational>(2 * p, p, alpha, U), p);
      CHECK(path.macro_agrees);
      CHECK(path.total_divided_power() == 2 * p - 1);
    }
}

TEST_CASE("recentering") {
  auto w = blowup_chain(saddle_example(), 2).final_form();
  auto c = recenter(w, Rational(2));
  CHECK(c == Form(poly({{0, 2, 4}, {0, 1, 6}, {1, 1, -10}, {1, 0, -20}}), poly({{1, 1, 2}, {1, 0, -1}, {2, 0, -5}})));
  CHECK(recenter(w, Rational(0)) == w);

  auto wp = blowup_chain(param_saddle_example(), 2);
  CHECK(wp.macro_agrees);
  auto cp = recenter(wp.final_form(), ParamPoly(2));
  auto b = ParamPoly::parameter();
  CHECK(cp.a().coeff(1, 1) == b * ParamPoly(-10));
  CHECK(cp.a().coeff(1, 0) == b * ParamPoly(-20));
  CHECK(cp.a().coeff(0, 1) == ParamPoly(6));
  CHECK(cp.b().coeff(2, 0) == b * ParamPoly(-5));
  CHECK(cp.to_string() == "(-20*b*x + 6*z - 10*b*x*z + 4*z^2)*dx + (-x - 5*b*x^2 + 2*x*z)*dz");
}

TEST_CASE("points on the divisor") {
  auto pts = singular_points_on_divisor(blowup_chain(saddle_example(), 2));
  REQUIRE(pts.points.size() == 2);
  CHECK(*pts.points[0].exact == Rational(1, 2));
  CHECK(*pts.points[1].exact == Rational(2));
  CHECK(pts.has_corner);

  Form a0(poly({{0, 2, 4}, {0, 0, 4}}), poly({{1, 1, 2}}));
  auto imag = singular_points_on_divisor(a0);
  REQUIRE(imag.points.size() == 2);
  CHECK(imag.points[0].approximate());
  CHECK(std::abs(imag.points[0].approx - fftest::cld(0, -1)) < 1e-15L);
  CHECK(std::abs(imag.points[1].approx - fftest::cld(0, 1)) < 1e-15L);

  // A cubic with rational roots found numerically and verified exactly.
  Form cubic(poly({{0, 3, 1}, {0, 2, -2}, {0, 1, -1}, {0, 0, 2}}), poly({{1, 0, 1}}));
  auto c = singular_points_on_divisor(cubic);
  REQUIRE(c.points.size() == 3);
  for (const auto& p : c.points) CHECK_FALSE(p.approximate());

  Form dic(poly({{0, 1, 1}}), poly({{0, 0, 1}}));
  CHECK_THROWS_AS(singular_points_on_divisor(dic), PreconditionError);
  Form deg(poly({{1, 1, 1}}), poly({{1, 0, 1}}));
  CHECK_THROWS_AS(singular_points_on_divisor(deg), PreconditionError);
}

TEST_CASE("corner chart and the index sum") {
  auto path = blowup_chain(saddle_example(), 2);
  auto X = dual(path.final_form());
  Rational s1 = cs_index(X, Rational(2)), s2 = cs_index(X, Rational(1, 2));
  auto corner = corner_form(path);
  Rational s3 = cs_index(dual(corner), Rational(0));
  CHECK(s1 == Rational(1, 6));
  CHECK(s2 == Rational(-2, 3));
  CHECK(s3 == Rational(-1, 2));
  CHECK(s1 + s2 + s3 == Rational(path.self_intersections.back()));

  // Residue oracle in the corner chart.
  auto f = [&](fftest::cld z) {
    return fftest::eval(divide_monomial(corner.b(), 1, 0), 0, z) / -fftest::eval(corner.a(), 0, z);
  };
  CHECK(std::abs(fftest::residue_by_contour(f, 0, 0.1L) - fftest::cld(-0.5L)) < 1e-12L);
}

TEST_CASE("truncated inputs keep x-adic precision through the chain") {
  auto w = saddle_example().truncated(Precision::total(12));
  auto path = blowup_chain(w, 2);
  CHECK(path.final_form().precision() == Precision::first_var(9));
  CHECK(path.final_form() == blowup_chain(saddle_example(), 2).final_form());
  auto c = recenter(path.final_form(), Rational(2));
  CHECK(c.precision() == Precision::first_var(9));
}

TEST_CASE("node chain") {
  // x dz - (2z + 3x^2)dx: one blow-up gives the Jordan block with off-diagonal 3.
  Form model(poly({{0, 1, -2}, {2, 0, -3}}), poly({{1, 0, 1}}));
  auto path = pd_chain(model, 2);
  auto L = linear_part(dual(path.centered_final_form()), Rational(0), Rational(0));
  CHECK(projectively_equal(L, fftest::mat(1, 0, 3, 1)));

  // A linear shear is followed by recentering.
  Form sheared(poly({{0, 1, -3}, {1, 0, -4}, {3, 0, -1}}), poly({{1, 0, 1}}));
  auto p2 = pd_chain(sheared, 3);
  CHECK(p2.steps.size() == 2);
  CHECK(p2.steps[1].center == Rational(-2));
  auto L2 = linear_part(dual(p2.centered_final_form()), Rational(0), Rational(0));
  CHECK(L2(0, 0) == L2(1, 1));
  CHECK(L2(0, 1) == Rational(0));
}
