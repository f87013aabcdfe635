#pragma once

// Point blow-ups of 1-forms at the origin.
//
// Chart 1 substitutes y = x z and keeps the first variable; the divisor is
// {x = 0}. Chart 2 substitutes x = w y; the divisor is {y = 0}. Both divide
// by the largest power of the divisor variable.

#include <string>
#include <vector>

#include "ff/foliation.hpp"

namespace ff {

enum class Chart { One, Two };

std::string chart_name(Chart c);

template <CoefficientRing R>
struct BlowupResult {
  OneForm2<R> transformed;
  int divided_power;
  bool dicritical;
  Chart chart;
};

template <CoefficientRing R>
BlowupResult<R> blowup_chart1(const OneForm2<R>& w, const std::string& new_var = "z");

template <CoefficientRing R>
BlowupResult<R> blowup_chart2(const OneForm2<R>& w, const std::string& new_var = "w");

// Translation z -> z + z0 of the second variable.
template <CoefficientRing R>
OneForm2<R> recenter(const OneForm2<R>& w, const R& z0);

// Exchanges the roles of the two variables.
template <CoefficientRing R>
OneForm2<R> swap_variables(const OneForm2<R>& w);

template <CoefficientRing R>
struct ChainStep {
  Chart chart;
  R center;  // point on the previous divisor that was blown up
  BlowupResult<R> result;
};

template <CoefficientRing R>
struct ReductionPath {
  OneForm2<R> start;
  std::vector<ChainStep<R>> steps;
  std::vector<std::string> components;  // D1 ... Dk
  std::vector<int> self_intersections;
  bool macro_agrees = true;             // iterated chain equals the one-shot substitution
  // Continuing point on the last divisor; zero unless pd_chain located it.
  R final_center = RingTraits<R>::zero();

  const OneForm2<R>& final_form() const { return steps.empty() ? start : steps.back().result.transformed; }
  OneForm2<R> centered_final_form() const { return recenter(final_form(), final_center); }
  // Form before the last blow-up, centered at the blown-up point.
  OneForm2<R> penultimate_form() const;
  int total_divided_power() const;
};

// p chart-1 blow-ups, each at the origin of the previous chart. Cross-checks
// the result against y = x^p z with maximal division.
template <CoefficientRing R>
ReductionPath<R> blowup_chain(const OneForm2<R>& w, int p);

// One-shot substitution y = x^p z, dy = p x^(p-1) z dx + x^p dz, divided by
// the largest power of x. Returns the form and the power.
template <CoefficientRing R>
std::pair<OneForm2<R>, int> macro_blowup(const OneForm2<R>& w, int p);

template <CoefficientRing R>
struct DivisorPoint {
  std::optional<R> exact;
  cld approx;
  int multiplicity = 1;
  bool approximate() const { return !exact.has_value(); }
};

template <CoefficientRing R>
struct DivisorPoints {
  std::vector<DivisorPoint<R>> points;
  // The last divisor meets the previous one at z = infinity of this chart;
  // that point is examined in corner_form().
  bool has_corner = false;
};

// Zeros of the dx-coefficient restricted to the invariant divisor {x = 0}.
template <CoefficientRing R>
DivisorPoints<R> singular_points_on_divisor(const OneForm2<R>& w, long double tol = Complex::kDefaultTolerance);

template <CoefficientRing R>
DivisorPoints<R> singular_points_on_divisor(const ReductionPath<R>& path,
                                            long double tol = Complex::kDefaultTolerance);

// The last blow-up of the path seen in chart 2, with variables ordered so that
// the last divisor is {first variable = 0} and the corner is the origin.
template <CoefficientRing R>
OneForm2<R> corner_form(const ReductionPath<R>& path);

// m - 1 chart-1 blow-ups at a Poincare-Dulac candidate of ratio m sitting at
// the origin, each recentered at the single continuing point on the new
// divisor. Returns the path; its final form has a linear part with equal
// eigenvalues.
template <CoefficientRing R>
ReductionPath<R> pd_chain(const OneForm2<R>& w, int m);

// Numeric roots of a polynomial with complex coefficients (Durand-Kerner).
std::vector<cld> polynomial_roots(const std::vector<cld>& coeffs_low_to_high);

}  // namespace ff
