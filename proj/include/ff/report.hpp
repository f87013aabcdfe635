#pragma once

// JSON documents for the command line tool. Rationals are "num/den" strings,
// complex numbers [re, im], parametric values {"poly", "coefficients"}.

#include <json.hpp>

#include "ff/blowup.hpp"
#include "ff/classify.hpp"
#include "ff/holonomy.hpp"
#include "ff/normal_form.hpp"
#include "ff/parser.hpp"

namespace ff {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kToolVersion = "0.1.0";

json to_json(const Rational& q);
json to_json(const Complex& c);
json to_json(cld c);
json to_json(const ParamPoly& p, const std::string& param);

template <CoefficientRing R>
json value_json(const R& v, const std::string& param);

template <CoefficientRing R>
json matrix_json(const Matrix2<R>& m, const std::string& param);

template <CoefficientRing R>
json singularity_json(const SingularityReport<R>& r, const std::string& param);

template <CoefficientRing R>
json path_json(const ReductionPath<R>& path, const std::string& param);

template <CoefficientRing R>
json gpd_json(const GPDReport<R>& r, const std::string& param);

template <CoefficientRing R>
json normalization_json(const FiberedField<R>& X, const NormalizationResult<R>& r, bool verified,
                        const std::string& param);

json group_json(int p, int m);

json error_json(const Error& e);

// Every document starts with these fields.
json document(const std::string& command);

// Full pipeline report for a prenormal form: reduction path, singular points
// on the last divisor and the corner, the gPD decision, the normal form and
// holonomy summaries. Contains no timing.
template <CoefficientRing R>
json full_report(const InputExpression<R>& in, long double tol);

// Indented "key: value" view of a document.
std::string render_text(const json& doc);

}  // namespace ff
