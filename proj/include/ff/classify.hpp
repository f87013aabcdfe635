#pragma once

// Nilpotent singularities in Takens prenormal form
//   d(y^2 + x^n) + alpha x^p U(x) dy,   U(0) = 1,
// the case split on (n, p, alpha), and detection of a Poincare-Dulac point on
// the divisor D_p of the generalized saddle.

#include <optional>
#include <string>

#include "ff/blowup.hpp"
#include "ff/normal_form.hpp"

namespace ff {

template <CoefficientRing R>
struct PrenormalData {
  int n;
  int p;
  R alpha;
  Series1<R> U;
};

template <CoefficientRing R>
PrenormalData<R> parse_prenormal(const OneForm2<R>& w);

// d(y^2 + x^n) + alpha x^p U dy in the variables x, y.
template <CoefficientRing R>
OneForm2<R> prenormal_form(const PrenormalData<R>& d);

enum class TakensCase { Cusp, Saddle, SaddleNodeClass };
enum class SaddleSubcase { AlphaPm4, SimplePair, ResonantPair };

std::string case_name(TakensCase c);
std::string subcase_name(SaddleSubcase s);

TakensCase takens_case(int n, int p);

SaddleSubcase saddle_subcase(const Rational& alpha);
SaddleSubcase saddle_subcase(cld alpha, long double tol = Complex::kDefaultTolerance);

struct GpdAlpha {
  std::optional<Rational> exact;
  long double approx;
  bool irrational() const { return !exact; }
};

// alpha = -2(m + 2p) / sqrt(p(m + p)).
GpdAlpha gpd_condition(int p, int m);

template <class Z>
struct GpdDetection {
  int m;
  Z z1;
  Z z2;
};

// Roots of 2z^2 + alpha z + 2 ordered so that p(z1 - z2)/z2 is an integer >= 2.
std::optional<GpdDetection<Rational>> gpd_detect(int p, const Rational& alpha);
std::optional<GpdDetection<cld>> gpd_detect(int p, cld alpha, long double tol = Complex::kDefaultTolerance);

enum class Verdict { GeneralizedPD, Dicritical, NotApplicable };
enum class PdMethod { Homological, Chain };

// "Dicritical-to-order-N" for a dicritical verdict.
std::string verdict_string(Verdict v, int order);
std::string method_name(PdMethod m);

template <CoefficientRing R>
struct PdDecision {
  PdMethod method;
  Verdict verdict;
  // eps for the homological method, d/c of the final linear part
  // [[c, 0], [d, c]] for the chain method.
  R coefficient;
  int order;
  std::optional<Matrix2<R>> linear;
  int residual_valuation = kInf;
};

// At a Poincare-Dulac candidate of ratio m placed at the origin, with the
// invariant curve {x = 0}.
template <CoefficientRing R>
PdDecision<R> pd_vs_dicritical(const OneForm2<R>& local, int m, PdMethod method, int order,
                               long double tol = Complex::kDefaultTolerance);

template <CoefficientRing R>
struct GPDReport {
  PrenormalData<R> data;
  TakensCase tag;
  std::optional<SaddleSubcase> subcase;
  std::optional<R> z1;
  std::optional<R> z2;
  std::optional<int> m;
  bool gpd_alpha_check = false;
  std::optional<R> pd_point;  // z1 or z2, whichever carries the ratio m
  std::optional<R> epsilon;
  std::optional<R> chain_coefficient;
  bool methods_agree = true;
  Verdict verdict = Verdict::NotApplicable;
  int order;
  bool approximate = false;

  std::string verdict_str() const { return verdict_string(verdict, order); }
};

// The whole decision pipeline at truncation order N.
template <CoefficientRing R>
GPDReport<R> analyze(const OneForm2<R>& w, int order, long double tol = Complex::kDefaultTolerance);

// Default truncation order 2p + m + 8.
inline int default_order(int p, int m) { return 2 * p + m + 8; }

}  // namespace ff
