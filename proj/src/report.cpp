#include "ff/report.hpp"

#include <numbers>
#include <sstream>

namespace ff {

json to_json(const Rational& q) { return q.fraction_str(); }

json to_json(cld c) { return json::array({static_cast<double>(c.real()), static_cast<double>(c.imag())}); }

json to_json(const Complex& c) { return to_json(c.v); }

json to_json(const ParamPoly& p, const std::string& param) {
  json coeffs = json::array();
  for (int k = 0; k <= p.degree(); ++k) coeffs.push_back(p.coeff(k).fraction_str());
  return {{"poly", p.str(param)}, {"param", param}, {"coefficients", coeffs}};
}

template <CoefficientRing R>
json value_json(const R& v, const std::string& param) {
  if constexpr (std::is_same_v<R, ParamPoly>)
    return to_json(v, param);
  else
    return to_json(v);
}

template <CoefficientRing R>
json matrix_json(const Matrix2<R>& m, const std::string& param) {
  json rows = json::array();
  for (int r = 0; r < 2; ++r) rows.push_back(json::array({value_json(m(r, 0), param), value_json(m(r, 1), param)}));
  return rows;
}

namespace {

json type_json(const SingularityType& t) {
  json j{{"name", type_name(t)}, {"text", type_to_string(t)}};
  if (auto* pd = std::get_if<PoincareDulacCandidate>(&t)) j["m"] = pd->m;
  return j;
}

template <CoefficientRing R>
json eigen_json(const Eigenvalues<R>& e, const std::string& param) {
  json j{{"trace", value_json(e.trace, param)}, {"det", value_json(e.det, param)}};
  if (e.exact) j["exact"] = json::array({value_json((*e.exact)[0], param), value_json((*e.exact)[1], param)});
  if (e.approx) j["approx"] = json::array({to_json((*e.approx)[0]), to_json((*e.approx)[1])});
  return j;
}

template <CoefficientRing R>
std::optional<cld> as_cld(const R& v) {
  return RingTraits<R>::as_complex(v);
}

cld exp_2pi_i(cld c) { return std::exp(cld(0, 2 * std::numbers::pi_v<long double>) * c); }

}  // namespace

template <CoefficientRing R>
json singularity_json(const SingularityReport<R>& r, const std::string& param) {
  json j{{"chart", r.chart},
         {"location", json::array({value_json(r.location[0], param), value_json(r.location[1], param)})},
         {"type", type_json(r.type)},
         {"approximate", r.approximate}};
  if (!std::holds_alternative<Regular>(r.type)) {
    j["linear_part"] = matrix_json(r.linear, param);
    j["eigenvalues"] = eigen_json(r.eigen, param);
  }
  j["cs_index"] = r.cs_index ? value_json(*r.cs_index, param) : json(nullptr);
  return j;
}

template <CoefficientRing R>
json path_json(const ReductionPath<R>& path, const std::string& param) {
  json steps = json::array();
  for (const auto& s : path.steps)
    steps.push_back({{"chart", chart_name(s.chart)},
                     {"center", value_json(s.center, param)},
                     {"divided_power", s.result.divided_power},
                     {"dicritical", s.result.dicritical},
                     {"form", s.result.transformed.to_string(param)}});
  return {{"start", path.start.to_string(param)},
          {"steps", steps},
          {"components", path.components},
          {"self_intersections", path.self_intersections},
          {"total_divided_power", path.total_divided_power()},
          {"macro_agrees", path.macro_agrees},
          {"final_form", path.final_form().to_string(param)}};
}

template <CoefficientRing R>
json gpd_json(const GPDReport<R>& r, const std::string& param) {
  auto opt = [&](const std::optional<R>& v) { return v ? value_json(*v, param) : json(nullptr); };
  return {{"n", r.data.n},
          {"p", r.data.p},
          {"alpha", value_json(r.data.alpha, param)},
          {"U", r.data.U.to_string(param)},
          {"case", case_name(r.tag)},
          {"subcase", r.subcase ? json(subcase_name(*r.subcase)) : json(nullptr)},
          {"z1", opt(r.z1)},
          {"z2", opt(r.z2)},
          {"m", r.m ? json(*r.m) : json(nullptr)},
          {"gpd_alpha_check", r.gpd_alpha_check},
          {"pd_point", opt(r.pd_point)},
          {"epsilon", opt(r.epsilon)},
          {"chain_coefficient", opt(r.chain_coefficient)},
          {"methods_agree", r.methods_agree},
          {"verdict", r.verdict_str()},
          {"order", r.order},
          {"approximate", r.approximate}};
}

template <CoefficientRing R>
json normalization_json(const FiberedField<R>& X, const NormalizationResult<R>& r, bool verified,
                        const std::string& param) {
  return {{"m", X.m},
          {"epsilon", value_json(r.epsilon, param)},
          {"order", r.order},
          {"residual_valuation", r.residual_valuation == kInf ? json("inf") : json(r.residual_valuation)},
          {"verified", verified},
          {"normalization", {{"z_linear_coefficient", X.m}, {"shear", value_json(X.shear, param)}}},
          {"tail", X.a.to_string(param)},
          {"phi", r.phi.to_string(param)}};
}

json group_json(int p, int m) {
  auto l = sz_lambda(p, m);
  return {{"p", p},
          {"m", m},
          {"dichotomy", group_class_name(dichotomy(p, m))},
          {"sz_lambda", {{"small", to_json(l.small)}, {"large", to_json(l.large)}, {"integer", l.integer}}},
          {"pd_multiplier", to_json(root_of_unity(1, m))}};
}

json error_json(const Error& e) {
  static const char* kinds[] = {"input", "precondition", "precision"};
  auto doc = document("error");
  doc["error"] = {{"kind", kinds[static_cast<int>(e.kind())]}, {"code", e.code()}, {"message", e.what()}};
  return doc;
}

json document(const std::string& command) {
  return {{"schema_version", kSchemaVersion}, {"tool", {{"name", "ff"}, {"version", kToolVersion}}}, {"command", command}};
}

template <CoefficientRing R>
json full_report(const InputExpression<R>& in, long double tol) {
  const auto& param = in.mode.param;
  auto doc = document("report");
  doc["input"] = {{"source", in.source}, {"canonical", in.canonical()}, {"mode", in.mode.str()}, {"order", in.order}};
  auto gpd = analyze(in.form, in.order, tol);
  doc["gpd"] = gpd_json(gpd, param);
  doc["reduction"] = nullptr;
  doc["singularities"] = json::array();
  doc["normal_form"] = nullptr;
  doc["holonomy"] = nullptr;
  if (gpd.tag != TakensCase::Saddle) return doc;

  auto path = blowup_chain(in.form, gpd.data.p);
  doc["reduction"] = path_json(path, param);

  auto X = dual(path.final_form());
  auto pts = singular_points_on_divisor(path, tol);
  json sing = json::array();
  json multipliers = json::array();
  std::optional<R> cs_sum = RingTraits<R>::zero();
  auto record = [&](const SingularityReport<R>& rep, int multiplicity) {
    auto j = singularity_json(rep, param);
    j["multiplicity"] = multiplicity;
    sing.push_back(j);
    if (!rep.cs_index) {
      cs_sum.reset();
      return;
    }
    if (cs_sum) cs_sum = *cs_sum + *rep.cs_index;
    if (auto c = as_cld(*rep.cs_index))
      multipliers.push_back({{"chart", rep.chart},
                             {"location", j["location"]},
                             {"cs_index", j["cs_index"]},
                             {"multiplier", to_json(exp_2pi_i(*c))}});
  };
  const std::string divisor = path.components.back();
  for (const auto& pt : pts.points) {
    std::optional<R> z = pt.exact;
    if constexpr (std::is_same_v<R, Complex>) {
      if (!z) z = Complex(pt.approx);
    }
    if (!z) {
      sing.push_back({{"chart", divisor}, {"approximate", true}, {"location", json::array({to_json(cld(0)), to_json(pt.approx)})},
                      {"multiplicity", pt.multiplicity}, {"type", nullptr}, {"cs_index", nullptr}});
      cs_sum.reset();
      continue;
    }
    record(analyze_point(X, RingTraits<R>::zero(), *z, divisor, true, tol), pt.multiplicity);
  }
  if (pts.has_corner)
    record(analyze_point(dual(corner_form(path)), RingTraits<R>::zero(), RingTraits<R>::zero(),
                         divisor + "/" + path.components[path.components.size() - 2] + " corner", true, tol),
           1);
  doc["singularities"] = sing;
  doc["camacho_sad"] = {{"divisor", divisor},
                        {"sum", cs_sum ? value_json(*cs_sum, param) : json(nullptr)},
                        {"self_intersection", path.self_intersections.back()}};

  if (gpd.m && gpd.pd_point) {
    auto local = recenter(path.final_form(), *gpd.pd_point);
    auto F = to_fibered_field(local, *gpd.m, in.order);
    auto res = normalize(F, in.order);
    bool verified = verify_conjugation(F, res.phi, *gpd.m, res.epsilon, in.order) > in.order;
    doc["normal_form"] = normalization_json(F, res, verified, param);
    auto h = group_json(gpd.data.p, *gpd.m);
    h["point_multipliers"] = multipliers;
    doc["holonomy"] = h;
  }
  return doc;
}

namespace {

void render(const json& j, const std::string& indent, std::ostringstream& os) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& v = it.value();
    std::string key = j.is_array() ? "-" : it.key() + ":";
    if (v.is_object() || (v.is_array() && !v.empty() && (v[0].is_object() || v[0].is_array()) && !(v.size() == 2 && v[0].is_number()))) {
      os << indent << key << "\n";
      render(v, indent + "  ", os);
    } else if (v.is_string()) {
      os << indent << key << " " << v.get<std::string>() << "\n";
    } else {
      os << indent << key << " " << v.dump() << "\n";
    }
  }
}

}  // namespace

std::string render_text(const json& doc) {
  std::ostringstream os;
  render(doc, "", os);
  return os.str();
}

#define FF_INSTANTIATE(R)                                                                         \
  template json value_json(const R&, const std::string&);                                         \
  template json matrix_json(const Matrix2<R>&, const std::string&);                               \
  template json singularity_json(const SingularityReport<R>&, const std::string&);                \
  template json path_json(const ReductionPath<R>&, const std::string&);                           \
  template json gpd_json(const GPDReport<R>&, const std::string&);                                \
  template json normalization_json(const FiberedField<R>&, const NormalizationResult<R>&, bool,   \
                                   const std::string&);                                           \
  template json full_report(const InputExpression<R>&, long double);

FF_INSTANTIATE(Rational)
FF_INSTANTIATE(Complex)
FF_INSTANTIATE(ParamPoly)

#undef FF_INSTANTIATE

}  // namespace ff
