#pragma once

// Foliation generators in the plane: 1-forms a dx + b dy and their dual
// vector fields b d/dx - a d/dy, linear parts at singular points, the
// singularity type read off from eigenvalue ratios, and Camacho-Sad indices
// along the divisor {x = 0}.

#include <array>
#include <optional>
#include <string>
#include <variant>

#include "ff/series.hpp"

namespace ff {

template <CoefficientRing R>
class OneForm2 {
 public:
  // Precisions of a and b are met; a zero form is rejected.
  OneForm2(Series2<R> a, Series2<R> b);

  const Series2<R>& a() const { return a_; }
  const Series2<R>& b() const { return b_; }
  const VarNames& vars() const { return a_.vars(); }
  const Precision& precision() const { return a_.precision(); }
  int order() const { return a_.order(); }
  int valuation() const { return std::min(a_.valuation(), b_.valuation()); }

  OneForm2 multiplied(const Series2<R>& f) const { return {a_ * f, b_ * f}; }
  OneForm2 scaled(const R& c) const { return {a_.scaled(c), b_.scaled(c)}; }
  OneForm2 truncated(const Precision& p) const { return {a_.truncated(p), b_.truncated(p)}; }
  OneForm2 renamed(VarNames v) const { return {a_.renamed(v), b_.renamed(v)}; }

  // "(a)*dx + (b)*dy" with the form's variable names.
  std::string to_string(std::string_view param = "b") const;

  bool operator==(const OneForm2& o) const { return a_ == o.a_ && b_ == o.b_; }

 private:
  Series2<R> a_;
  Series2<R> b_;
};

template <CoefficientRing R>
struct PlaneVectorField {
  Series2<R> px;
  Series2<R> py;

  const VarNames& vars() const { return px.vars(); }
  std::string to_string(std::string_view param = "b") const;
  bool operator==(const PlaneVectorField&) const = default;
};

template <CoefficientRing R>
PlaneVectorField<R> dual(const OneForm2<R>& w) {
  return {w.b(), -w.a()};
}

// Inverse of dual: the form whose dual is X.
template <CoefficientRing R>
OneForm2<R> form_of(const PlaneVectorField<R>& X) {
  return {-X.py, X.px};
}

// dx^dy coefficient of w ^ e.
template <CoefficientRing R>
Series2<R> wedge(const OneForm2<R>& w, const OneForm2<R>& e) {
  return w.a() * e.b() - w.b() * e.a();
}

// Same foliation up to a unit: w ^ e = 0 and equal orders.
template <CoefficientRing R>
bool equal_up_to_unit(const OneForm2<R>& w, const OneForm2<R>& e) {
  return wedge(w, e).is_zero() && w.valuation() == e.valuation();
}

template <CoefficientRing To, CoefficientRing From, class Fn>
OneForm2<To> map_coefficients(const OneForm2<From>& w, Fn fn) {
  return {map_coefficients<To>(w.a(), fn), map_coefficients<To>(w.b(), fn)};
}

template <CoefficientRing R>
struct Matrix2 {
  std::array<std::array<R, 2>, 2> m;

  const R& operator()(int r, int c) const { return m[r][c]; }
  R trace() const { return m[0][0] + m[1][1]; }
  R det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
  Matrix2 scaled(const R& c) const {
    return {{{{m[0][0] * c, m[0][1] * c}, {m[1][0] * c, m[1][1] * c}}}};
  }
  bool is_zero() const;
  bool is_triangular() const { return ff::is_zero(m[0][1]) || ff::is_zero(m[1][0]); }
  std::string to_string(std::string_view param = "b") const;
  bool operator==(const Matrix2&) const = default;
};

// Equality of scalar classes: A = c B for some unit c.
template <CoefficientRing R>
bool projectively_equal(const Matrix2<R>& A, const Matrix2<R>& B);

// Eigenvalue ratio. Exact when it is rational.
struct Ratio {
  std::optional<Rational> exact;
  cld approx;
  std::string str() const;
};

struct Regular {};
struct ReducedHyperbolic {
  Ratio ratio;
};
struct Resonant {
  Rational ratio;  // negative
};
// Positive rational ratio that is neither m nor 1/m with m >= 2, including
// the Jordan block with ratio 1.
struct ResonantNode {
  Rational ratio;
};
struct SaddleNode {};
struct PoincareDulacCandidate {
  int m;
};
struct DicriticalCandidate {};
struct NonElementary {};

using SingularityType = std::variant<Regular, ReducedHyperbolic, Resonant, ResonantNode, SaddleNode,
                                     PoincareDulacCandidate, DicriticalCandidate, NonElementary>;

std::string type_name(const SingularityType& t);
// Name plus parameter, e.g. "PoincareDulacCandidate(m=6)".
std::string type_to_string(const SingularityType& t);

template <CoefficientRing R>
struct Eigenvalues {
  R trace;
  R det;
  // Roots in the ring, ordered: diagonal order for triangular matrices,
  // otherwise increasing modulus.
  std::optional<std::array<R, 2>> exact;
  std::optional<std::array<cld, 2>> approx;
  bool approximate() const { return !exact.has_value(); }
};

template <CoefficientRing R>
Eigenvalues<R> eigenvalues(const Matrix2<R>& L, long double tol = Complex::kDefaultTolerance);

// Total on matrices. Approximate rings decide zero and rationality within tol.
template <CoefficientRing R>
SingularityType classify_singularity(const Matrix2<R>& L, long double tol = Complex::kDefaultTolerance);

// X translated so that `at` becomes the origin.
template <CoefficientRing R>
PlaneVectorField<R> translate(const PlaneVectorField<R>& X, const R& x0, const R& y0);

// Jacobian at a singular point.
template <CoefficientRing R>
Matrix2<R> linear_part(const PlaneVectorField<R>& X, const R& x0, const R& y0);

template <CoefficientRing R>
struct SingularityReport {
  std::string chart;
  std::array<R, 2> location;
  Matrix2<R> linear;
  Eigenvalues<R> eigen;
  SingularityType type;
  std::optional<R> cs_index;
  bool approximate = false;
};

// Full report; Regular (no linear data needed) when X does not vanish at the point.
template <CoefficientRing R>
SingularityReport<R> analyze_point(const PlaneVectorField<R>& X, const R& x0, const R& y0,
                                   std::string chart, bool divisor_invariant,
                                   long double tol = Complex::kDefaultTolerance);

// Camacho-Sad index of the divisor {x = 0} at (0, z0).
template <CoefficientRing R>
R cs_index(const PlaneVectorField<R>& X, const R& z0);

}  // namespace ff
