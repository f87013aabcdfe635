#pragma once

// One-dimensional formal diffeomorphisms h(x) = l x + O(x^2), Lie-series
// exponentials of vector fields f(x) d/dx, the holonomy model of the
// Poincare-Dulac singularity and numeric holonomy by transport along a loop
// on the divisor {x = 0}.

#include <vector>

#include "ff/foliation.hpp"

namespace ff {

// f(x) d/dx with valuation(f) >= 2.
template <CoefficientRing R>
struct VectorField1 {
  Series1<R> f;

  explicit VectorField1(Series1<R> f);
  VectorField1 scaled(const R& c) const { return VectorField1(f.scaled(c)); }
  // Y(g) = f g'.
  Series1<R> apply(const Series1<R>& g) const { return f * g.derive(); }
};

template <CoefficientRing R>
struct FormalDiffeo1 {
  R multiplier;
  Series1<R> tail;  // valuation >= 2

  static FormalDiffeo1 identity(int order = kInf);
  static FormalDiffeo1 linear(const R& l, int order = kInf);
  static FormalDiffeo1 from_series(const Series1<R>& s);

  Series1<R> series() const;
  int order() const { return tail.order(); }
  R coeff(int k) const { return k == 1 ? multiplier : tail.coeff(k); }
  R operator()(const R& x) const { return series().evaluate(x); }
  // c h.
  FormalDiffeo1 scaled(const R& c) const { return {multiplier * c, tail.scaled(c)}; }
  FormalDiffeo1 truncated(int order) const { return {multiplier, tail.truncated(order)}; }
  std::string to_string(std::string_view param = "b") const { return series().to_string(param); }
};

// sum_k Y^k(x) / k!, to order N.
template <CoefficientRing R>
FormalDiffeo1<R> exp_vf(const VectorField1<R>& Y, int N);

// Y with exp_vf(Y) = h to order N; h must be tangent to the identity.
template <CoefficientRing R>
VectorField1<R> log_diffeo(const FormalDiffeo1<R>& h, int N);

// h(g(x)).
template <CoefficientRing R>
FormalDiffeo1<R> compose(const FormalDiffeo1<R>& h, const FormalDiffeo1<R>& g, int N);

template <CoefficientRing R>
FormalDiffeo1<R> inverse(const FormalDiffeo1<R>& h, int N);

// h o g o h^-1.
template <CoefficientRing R>
FormalDiffeo1<R> conjugate(const FormalDiffeo1<R>& g, const FormalDiffeo1<R>& h, int N);

// h_* Y = (h' f) o h^-1.
template <CoefficientRing R>
VectorField1<R> pushforward(const VectorField1<R>& Y, const FormalDiffeo1<R>& h, int N);

// q-fold self-composition.
template <CoefficientRing R>
FormalDiffeo1<R> iterate(const FormalDiffeo1<R>& h, int q, int N);

template <CoefficientRing R>
bool is_identity(const FormalDiffeo1<R>& h, int N);

// h1 o h2 o h1^-1 o h2^-1.
template <CoefficientRing R>
FormalDiffeo1<R> commutator(const FormalDiffeo1<R>& h1, const FormalDiffeo1<R>& h2, int N);

// a h(x) = h(a x) coefficientwise to order N (within tolerance for Complex).
template <CoefficientRing R>
bool commutes_with_scaling(const FormalDiffeo1<R>& h, const R& a, int N);

template <CoefficientRing R>
bool periodicity(const FormalDiffeo1<R>& h, int q, int N);

Complex root_of_unity(int k, int n);

// -(2 pi i / m) x^(m+1) / (m + x^m) d/dx.
VectorField1<Complex> pd_model_field(int m, int N);

// e^(2 pi i / m) exp(Y_m).
FormalDiffeo1<Complex> pd_holonomy_model(int m, int N);

struct HolonomyGroupModel {
  int p;
  int m;
  Complex mu;
  Complex lambda;
  VectorField1<Complex> Y;
  FormalDiffeo1<Complex> h1;  // mu exp(Y)
  FormalDiffeo1<Complex> h2;  // (lambda / mu) exp(-Y)
};

// mu = e^(2 pi i/m), lambda = e^(2 pi i/p) unless given.
HolonomyGroupModel group_model(int p, int m, const VectorField1<Complex>& Y, int N,
                               std::optional<Complex> mu = std::nullopt,
                               std::optional<Complex> lambda = std::nullopt);

enum class GroupClass { Abelian, NonSolvable };
std::string group_class_name(GroupClass g);

GroupClass dichotomy(int p, int m);

struct SzLambda {
  Rational small;  // p / (m + p)
  Rational large;  // (m + p) / p
  bool integer;    // large is a natural number
};

SzLambda sz_lambda(int p, int m);

struct HolonomyLoop {
  cld center = 0;
  long double radius = 1;
  long double tolerance = 1e-10L;  // relative and absolute error per step
};

struct HolonomySample {
  cld x0;
  cld value;
  std::size_t steps;
};

// Transports each x0 along z = center + radius e^(i t), t in [0, 2 pi], on the
// leaf of w = A dx + B dz through (x0, center + radius): dx/dz = -B/A.
std::vector<HolonomySample> numeric_holonomy(const OneForm2<Complex>& w, const HolonomyLoop& loop,
                                             const std::vector<cld>& samples);
std::vector<HolonomySample> numeric_holonomy_serial(const OneForm2<Complex>& w, const HolonomyLoop& loop,
                                                    const std::vector<cld>& samples);

}  // namespace ff
