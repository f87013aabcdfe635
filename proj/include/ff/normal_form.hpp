#pragma once

// Fibered Poincare-Dulac fields x d/dx + (m z + a(x,z)) d/dz and their
// reduction to x d/dx + (m u + eps x^m) d/du by fibered changes
// u = z + phi(x, z).

#include <vector>

#include "ff/foliation.hpp"

namespace ff {

template <CoefficientRing R>
struct FiberedField {
  int m;
  Series2<R> a;                          // valuation >= 2
  R shear = RingTraits<R>::zero();       // z was replaced by z - shear * x

  PlaneVectorField<R> field() const;
};

// From a form x*unit dz + (...) dx at a singular point with eigenvalue ratio m
// at the origin; the tail is computed to total order `order`.
template <CoefficientRing R>
FiberedField<R> to_fibered_field(const OneForm2<R>& w, int m, int order);

template <CoefficientRing R>
struct HomologicalStep {
  Series2<R> phi;
  Series2<R> b;  // only the unremovable x^m term survives
};

// Solves (i + m(j-1)) phi_ij = b_ij - a_ij on a homogeneous slice of degree k.
template <CoefficientRing R>
HomologicalStep<R> homological_step(const Series2<R>& ak, int m, int k);

template <CoefficientRing R>
struct NormalizationResult {
  R epsilon;
  Series2<R> phi;           // u = z + phi(x, z), valuation >= 2
  int order;                // N
  int residual_valuation;   // kInf when the residual vanishes to the precision
};

// (1 + phi_z)(m z + a) + x phi_x - m (z + phi) - eps x^m, to order N.
template <CoefficientRing R>
Series2<R> conjugacy_residual(const FiberedField<R>& X, const Series2<R>& phi, const R& eps, int N);

template <CoefficientRing R>
NormalizationResult<R> normalize(const FiberedField<R>& X, int N);

// Independent check: inverts the change of coordinates, pushes X forward by
// substitution and returns the valuation of the difference from
// x d/dx + (m u + eps x^m) d/du.
template <CoefficientRing R>
int verify_conjugation(const FiberedField<R>& X, const Series2<R>& phi, int m, const R& eps, int N);

struct BoundResult {
  Rational value;
  int i;
  int j;
};

// max j / (i + m(j-1)) over i, j >= 0 with m + 1 <= i + j <= radius.
BoundResult bound_bruteforce(int m, int radius);
BoundResult bound_bruteforce_serial(int m, int radius);

// All (i, j) with 2 <= i + j <= kmax and i + m(j-1) = 0.
std::vector<Exp2> obstructed_monomials(int m, int kmax);

}  // namespace ff
