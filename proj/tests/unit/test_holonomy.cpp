#include <numbers>
#include <random>

#include "doctest.h"
#include "ff/blowup.hpp"
#include "ff/error.hpp"
#include "ff/holonomy.hpp"
#include "support/poly.hpp"
#include "support/random_series.hpp"

using namespace ff;
using S1 = Series1<Rational>;
using C1 = Series1<Complex>;
using D = FormalDiffeo1<Rational>;

namespace {

const long double kPi = std::numbers::pi_v<long double>;

S1 s1(std::initializer_list<std::pair<int, Rational>> t, int order = kInf) {
  S1 s("x", order);
  for (const auto& [k, c] : t) s.accumulate(k, c);
  return s;
}

VectorField1<Rational> random_vf(std::mt19937& rng, int hi) {
  return VectorField1<Rational>(fftest::random_series1(rng, 2, hi, kInf, 0.7));
}

D random_diffeo(std::mt19937& rng, int hi) {
  auto s = fftest::random_series1(rng, 2, hi, kInf, 0.6);
  auto l = fftest::random_rational(rng, 5, 3);
  if (l.is_zero()) l = Rational(2);
  s.accumulate(1, l);
  return D::from_series(s);
}

// x dz - (m z + x^m) dx over the complex numbers.
OneForm2<Complex> pd_model_form(int m) {
  VarNames v{"x", "z"};
  Series2<Complex> a(v), b(v);
  a.accumulate(0, 1, Complex(-m));
  a.accumulate(m, 0, Complex(-1));
  b.accumulate(1, 0, Complex(1));
  return {a, b};
}

OneForm2<Complex> to_complex(const OneForm2<Rational>& w) {
  return map_coefficients<Complex>(w, [](const Rational& q) { return Complex(q.to_ld()); });
}

}  // namespace

TEST_CASE("exp of x^2 d/dx is the flow x / (1 - x)") {
  auto h = exp_vf(VectorField1<Rational>(s1({{2, 1}})), 6);
  CHECK(h.multiplier == Rational(1));
  CHECK(h.tail == s1({{2, 1}, {3, 1}, {4, 1}, {5, 1}, {6, 1}}));
  for (int N : {12, 20}) {
    auto hN = exp_vf(VectorField1<Rational>(s1({{2, 1}})), N);
    for (int k = 1; k <= N; ++k) CHECK(hN.coeff(k) == Rational(1));
    CHECK(hN.order() == N);
  }
  auto id = exp_vf(VectorField1<Rational>(S1("x")), 8);
  CHECK(id.multiplier == Rational(1));
  CHECK(id.tail.is_zero());
  CHECK_THROWS_AS(VectorField1<Rational>(s1({{1, 1}})), PreconditionError);
}

TEST_CASE("Lie series against direct summation") {
  // Oracle: sum of Y^k(x)/k! computed with plain polynomial arithmetic.
  std::mt19937 rng(2);
  for (int t = 0; t < 10; ++t) {
    auto Y = random_vf(rng, 5);
    int N = 9;
    S1 term = s1({{1, 1}}), sum = term;
    Rational fact(1);
    for (int k = 1; k <= N; ++k) {
      auto next = Y.f * term.derive();
      term = S1("x");
      for (const auto& [j, c] : next.terms())
        if (j <= N) term.accumulate(j, c);
      fact *= Rational(k);
      sum += term.scaled(Rational(1) / fact);
    }
    auto h = exp_vf(Y, N);
    for (int k = 1; k <= N; ++k) CHECK(h.coeff(k) == sum.coeff(k));
  }
}

TEST_CASE("flow additivity and the logarithm") {
  std::mt19937 rng(7);
  int N = 10;
  for (int t = 0; t < 10; ++t) {
    auto Y = random_vf(rng, 5);
    auto a = fftest::random_rational(rng, 5, 4);
    auto b = fftest::random_rational(rng, 5, 4);
    auto lhs = compose(exp_vf(Y.scaled(a), N), exp_vf(Y.scaled(b), N), N);
    auto rhs = exp_vf(Y.scaled(a + b), N);
    CHECK(lhs.multiplier == rhs.multiplier);
    CHECK(lhs.tail == rhs.tail);

    auto back = log_diffeo(exp_vf(Y, N), N);
    CHECK(back.f == Y.f.truncated(N));
  }
  CHECK_THROWS_AS(log_diffeo(D::linear(Rational(2)), 5), PreconditionError);
}

TEST_CASE("group operations") {
  std::mt19937 rng(13);
  int N = 9;
  for (int t = 0; t < 10; ++t) {
    auto h = random_diffeo(rng, 5);
    auto id = compose(h, inverse(h, N), N);
    CHECK(is_identity(id, N));
    CHECK(is_identity(compose(inverse(h, N), h, N), N));

    // Naturality of exp under conjugation.
    auto Y = random_vf(rng, 4);
    auto lhs = conjugate(exp_vf(Y, N), h, N);
    auto rhs = exp_vf(pushforward(Y, h, N), N);
    CHECK(lhs.tail == rhs.tail);
    CHECK(lhs.multiplier == rhs.multiplier);
  }
  // Associativity.
  auto f = random_diffeo(rng, 4), g = random_diffeo(rng, 4), h = random_diffeo(rng, 4);
  auto l = compose(f, compose(g, h, N), N);
  auto r = compose(compose(f, g, N), h, N);
  CHECK(l.tail == r.tail);
  CHECK(l.multiplier == r.multiplier);
}

TEST_CASE("pd_holonomy_model") {
  auto h = pd_holonomy_model(2, 3);
  CHECK(h.multiplier == Complex(-1));
  CHECK(h.coeff(2).is_zero());
  CHECK(h.coeff(3) == Complex(0, kPi / 2));

  for (int m : {2, 3, 6}) {
    auto hm = pd_holonomy_model(m, 12);
    auto mu = hm.multiplier;
    CHECK(mu == root_of_unity(1, m));
    Complex pw(1);
    for (int k = 0; k < m; ++k) pw = pw * mu;
    CHECK(std::abs(pw.v - cld(1)) <= 1e-9L);
    // Only exponents congruent to 1 mod m appear.
    for (const auto& [k, c] : hm.tail.terms()) CHECK((k % m == 1 || c.is_zero(1e-12L)));
  }
}

TEST_CASE("formal and numeric holonomy agree") {
  for (int m : {2, 3}) {
    auto h = pd_holonomy_model(m, 16);
    std::vector<cld> xs{0.02L, 0.05L, cld(0.03L, 0.02L)};
    auto num = numeric_holonomy(pd_model_form(m), HolonomyLoop{}, xs);
    REQUIRE(num.size() == xs.size());
    for (const auto& s : num) CHECK(std::abs(s.value - h(Complex(s.x0)).v) < 1e-6L);
    auto ser = numeric_holonomy_serial(pd_model_form(m), HolonomyLoop{}, xs);
    for (size_t i = 0; i < xs.size(); ++i) CHECK(ser[i].value == num[i].value);
  }
}

TEST_CASE("numeric holonomy of a foliation without monodromy") {
  VarNames v{"x", "z"};
  Series2<Complex> one(v), zero(v);
  one.accumulate(0, 0, Complex(1));
  OneForm2<Complex> dx(one, zero);
  auto out = numeric_holonomy(dx, HolonomyLoop{}, {0.1L, cld(0, 0.3L)});
  for (const auto& s : out) CHECK(std::abs(s.value - s.x0) < 1e-10L);
}

TEST_CASE("corner multiplier is exp(2 pi i CS)") {
  // Linear corner 2z dx + x dz: leaves x^2 z = const, index -1/2.
  VarNames v{"x", "z"};
  Series2<Complex> a(v), b(v);
  a.accumulate(0, 1, Complex(2));
  b.accumulate(1, 0, Complex(1));
  auto lin = numeric_holonomy(OneForm2<Complex>(a, b), HolonomyLoop{0, 0.5L}, {1e-3L});
  CHECK(std::abs(lin[0].value / lin[0].x0 - cld(-1)) < 1e-8L);

  // Corner of the chain d(y^2 + x^4) - 5x^2(1 + x) dy after two blow-ups.
  auto w = fftest::prenormal<Rational>(4, 2, Rational(-5), fftest::upoly({{0, 1}, {1, 1}}));
  auto corner = corner_form(blowup_chain(w, 2));
  auto X = dual(corner);
  CHECK(cs_index(X, Rational(0)) == Rational(-1, 2));
  for (long double r : {0.05L, 0.02L}) {
    auto s = numeric_holonomy(to_complex(corner), HolonomyLoop{0, r}, {1e-7L});
    CHECK(std::abs(s[0].value / s[0].x0 - cld(-1)) < 1e-4L);
  }
}

TEST_CASE("numeric holonomy preconditions") {
  CHECK_THROWS_AS(numeric_holonomy(pd_model_form(2), HolonomyLoop{1, 1}, {0.01L}), PreconditionError);
  CHECK_THROWS_AS(numeric_holonomy(pd_model_form(2), HolonomyLoop{0, -1}, {0.01L}), InputError);
}

TEST_CASE("group model") {
  auto Y = pd_model_field(6, 14);
  auto G = group_model(2, 6, Y, 14);
  CHECK(G.h1.multiplier == root_of_unity(1, 6));
  CHECK(G.h2.multiplier == Complex(-1) * root_of_unity(-1, 6));
  // h2 = h0 o h1^-1 with h0 = lambda id.
  auto h0 = FormalDiffeo1<Complex>::linear(G.lambda);
  auto h2 = compose(h0, inverse(G.h1, 14), 14);
  CHECK(h2.multiplier == G.h2.multiplier);
  CHECK(approx_equal(h2.tail, G.h2.tail, 1e-9L));

  auto lin = group_model(2, 6, VectorField1<Complex>(C1("x")), 10);
  CHECK(lin.h1.tail.is_zero());
  CHECK(lin.h2.tail.is_zero());
  CHECK_THROWS_AS(group_model(2, 3, Y, 10), PreconditionError);
}

TEST_CASE("dichotomy and the lambda pair") {
  CHECK(dichotomy(2, 6) == GroupClass::Abelian);
  CHECK(dichotomy(3, 2) == GroupClass::NonSolvable);
  CHECK(dichotomy(4, 12) == GroupClass::Abelian);
  auto l26 = sz_lambda(2, 6);
  CHECK(l26.small == Rational(1, 4));
  CHECK(l26.large == Rational(4));
  CHECK(l26.integer);
  auto l32 = sz_lambda(3, 2);
  CHECK(l32.small == Rational(3, 5));
  CHECK(l32.large == Rational(5, 3));
  CHECK_FALSE(l32.integer);
  CHECK(sz_lambda(4, 12).large == Rational(4));
  for (int p = 2; p < 25; ++p)
    for (int m = 2; m < 25; ++m) {
      auto l = sz_lambda(p, m);
      CHECK(l.small * l.large == Rational(1));
      CHECK(l.integer == (dichotomy(p, m) == GroupClass::Abelian));
    }
  CHECK(group_class_name(GroupClass::NonSolvable) == "NonSolvable");
}

TEST_CASE("commutation with scalings and periodicity") {
  for (int m : {2, 3, 6}) {
    auto h = exp_vf(pd_model_field(m, 14), 14);
    for (int k = 0; k < m; ++k) CHECK(commutes_with_scaling(h, root_of_unity(k, m), 14));
    CHECK_FALSE(commutes_with_scaling(h, Complex(2), 14));
    CHECK_FALSE(commutes_with_scaling(h, root_of_unity(1, m + 1), 14));
    // The first mismatch sits at order m + 1.
    CHECK(commutes_with_scaling(h, Complex(2), m));
    CHECK_FALSE(commutes_with_scaling(h, Complex(2), m + 1));
  }
  CHECK(periodicity(D::linear(Rational(-1)), 2, 10));
  CHECK_FALSE(periodicity(D::linear(Rational(-1)), 1, 10));
  CHECK(periodicity(FormalDiffeo1<Complex>::linear(root_of_unity(1, 5)), 5, 10));
  CHECK_FALSE(periodicity(pd_holonomy_model(3, 10), 3, 10));
}

TEST_CASE("commutators of the group model") {
  // p | m: lambda^m = 1 and the generators commute.
  for (auto [p, m] : {std::pair{2, 6}, {4, 12}, {3, 3}}) {
    auto G = group_model(p, m, pd_model_field(m, 16), 16);
    CHECK(is_identity(commutator(G.h1, G.h2, 16), 16));
  }
  auto G = group_model(3, 2, pd_model_field(2, 12), 12);
  CHECK_FALSE(is_identity(commutator(G.h1, G.h2, 12), 12));
}
