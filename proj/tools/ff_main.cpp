#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "ff/report.hpp"

namespace fs = std::filesystem;
using namespace ff;

namespace {

constexpr int kDefaultOrder = 24;

struct Options {
  std::string expr;
  std::string input;
  std::string mode = "exact";
  std::optional<int> order;
  std::optional<int> precision;
  bool json = false;
  bool timing = false;

  int times = 1;
  int chart = 1;

  int p = 0;
  std::string alpha;
  std::optional<int> m;
  std::string u = "1";

  bool formal = false;
  bool numeric = false;
  long double radius = 1;
  std::string center = "0";
  std::string samples;

  std::string at;
};

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Input: return 2;
    case ErrorKind::Precondition: return 3;
    case ErrorKind::Precision: return 4;
  }
  return 1;
}

std::optional<int> env_int(const char* name, int lo, int hi) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  long k = std::strtol(v, &end, 10);
  if (*end || k < lo || k > hi)
    throw InputError("bad_environment", std::string(name) + " must be an integer in [" + std::to_string(lo) + ", " +
                                            std::to_string(hi) + "], got '" + v + "'");
  return static_cast<int>(k);
}

long double tolerance(const Options& o) {
  auto p = o.precision ? o.precision : env_int("FF_PRECISION", 1, 18);
  return p ? std::pow(10.0L, -*p) : Complex::kDefaultTolerance;
}

std::optional<int> requested_order(const Options& o) {
  if (o.order) {
    if (*o.order < 1) throw InputError("bad_order", "--order must be positive");
    return o.order;
  }
  return env_int("FF_ORDER", 1, 100000);
}

std::string fmt_ld(long double v, int digits = 8) {
  std::ostringstream os;
  os.precision(digits);
  os << static_cast<double>(v);
  return os.str();
}

template <CoefficientRing R>
R parse_constant(const std::string& text, const std::string& param, const char* what) {
  auto f = parse_function<R>(text, param);
  for (const auto& [e, c] : f.terms())
    if (e.i || e.j) throw InputError("not_a_constant", std::string(what) + " must be a constant");
  return f.constant_term();
}

// m and the two roots when alpha meets the gPD condition for p.
template <CoefficientRing R>
json detection_json(int p, const R& alpha, long double tol, std::optional<int>& m) {
  json j{{"m", nullptr}, {"z1", nullptr}, {"z2", nullptr}};
  if constexpr (std::is_same_v<R, Complex>) {
    if (auto d = gpd_detect(p, alpha.v, tol)) {
      m = d->m;
      j = {{"m", d->m}, {"z1", to_json(d->z1)}, {"z2", to_json(d->z2)}};
    }
  } else {
    auto q = RingTraits<R>::as_rational(alpha);
    if (!q) return j;
    if (auto d = gpd_detect(p, *q)) {
      m = d->m;
      j = {{"m", d->m}, {"z1", to_json(d->z1)}, {"z2", to_json(d->z2)}};
    }
  }
  return j;
}

template <CoefficientRing R>
int default_order_for(const OneForm2<R>& w, long double tol) {
  try {
    auto d = parse_prenormal(w);
    std::optional<int> m;
    detection_json(d.p, d.alpha, tol, m);
    if (m) return default_order(d.p, *m);
  } catch (const Error&) {
  }
  return kDefaultOrder;
}

template <CoefficientRing R>
InputExpression<R> read_expr(const Options& o, const ModeSpec& mode, long double tol) {
  if (o.expr.empty()) throw InputError("missing_expression", "this command needs --expr or --input");
  auto in = parse_expr<R>(o.expr, mode, 0);
  auto N = requested_order(o);
  in.order = N ? *N : default_order_for(in.form, tol);
  return in;
}

json input_json(const std::string& source, const std::string& canonical, const ModeSpec& mode, int order) {
  return {{"source", source}, {"canonical", canonical}, {"mode", mode.str()}, {"order", order}};
}

template <CoefficientRing R>
json input_json(const InputExpression<R>& in) {
  return input_json(in.source, in.canonical(), in.mode, in.order);
}

template <CoefficientRing R>
json cmd_classify(const Options& o, const ModeSpec& mode, long double tol) {
  auto in = read_expr<R>(o, mode, tol);
  auto doc = document("classify");
  doc["input"] = input_json(in);
  doc["gpd"] = gpd_json(analyze(in.form, in.order, tol), mode.param);
  return doc;
}

template <CoefficientRing R>
json cmd_blowup(const Options& o, const ModeSpec& mode, long double tol) {
  if (o.times < 1) throw InputError("bad_times", "--times must be positive");
  auto in = read_expr<R>(o, mode, tol);
  auto doc = document("blowup");
  doc["input"] = input_json(in);
  json steps = json::array();
  auto w = in.form;
  for (int k = 1; k <= o.times; ++k) {
    auto r = o.chart == 1 ? blowup_chart1(w, "z") : blowup_chart2(w, "w");
    steps.push_back({{"step", k},
                     {"chart", chart_name(r.chart)},
                     {"divided_power", r.divided_power},
                     {"dicritical", r.dicritical},
                     {"form", r.transformed.to_string(mode.param)}});
    w = r.transformed;
  }
  doc["steps"] = steps;
  return doc;
}

template <CoefficientRing R>
json cmd_gpd(const Options& o, const ModeSpec& mode, long double tol) {
  if (o.p < 1) throw InputError("bad_p", "--p must be a positive integer");
  auto doc = document("gpd");
  R alpha;
  std::optional<int> m = o.m;
  if (o.m) {
    if (*o.m < 1) throw InputError("bad_m", "--m must be a positive integer");
    auto g = gpd_condition(o.p, *o.m);
    doc["condition"] = {{"p", o.p}, {"m", *o.m}, {"alpha_approx", static_cast<double>(g.approx)},
                        {"alpha", g.exact ? json(g.exact->fraction_str()) : json(nullptr)}};
    if (g.exact) {
      alpha = RingTraits<R>::from_rational(*g.exact);
    } else if constexpr (std::is_same_v<R, Complex>) {
      alpha = Complex(g.approx);
    } else {
      throw PreconditionError("alpha_irrational", "alpha irrational in exact mode (float value " + fmt_ld(g.approx) + ")");
    }
  } else {
    alpha = parse_constant<R>(o.alpha, mode.param, "--alpha");
  }
  std::optional<int> detected;
  auto det = detection_json(o.p, alpha, tol, detected);
  if (o.m && detected != o.m)
    throw PreconditionError("not_gpd", "alpha does not realize m = " + std::to_string(*o.m));
  det["p"] = o.p;
  det["alpha"] = value_json(alpha, mode.param);
  doc["detection"] = det;

  auto U = parse_function<R>(o.u, mode.param);
  for (const auto& [e, c] : U.terms())
    if (e.j) throw InputError("bad_u", "U must depend on x only");
  if (!(U.constant_term() == RingTraits<R>::one())) throw PreconditionError("bad_u", "U(0) must be 1");
  PrenormalData<R> d{2 * o.p, o.p, alpha, U.restrict_zero(1)};
  auto w = prenormal_form(d);
  auto N = requested_order(o);
  int order = N ? *N : (detected ? default_order(o.p, *detected) : kDefaultOrder);
  doc["input"] = input_json(o.u, w.to_string(mode.param), mode, order);
  doc["gpd"] = gpd_json(analyze(w, order, tol), mode.param);
  return doc;
}

template <CoefficientRing R>
json cmd_normal_form(const Options& o, const ModeSpec& mode, long double tol) {
  auto in = read_expr<R>(o, mode, tol);
  auto doc = document("normal-form");
  doc["input"] = input_json(in);
  OneForm2<R> local = in.form;
  int m = 0;
  if (o.m) {
    m = *o.m;
  } else {
    auto gpd = analyze(in.form, in.order, tol);
    if (!gpd.m || !gpd.pd_point)
      throw PreconditionError("not_pd_candidate", "no Poincare-Dulac point on the last divisor; pass --m for a local form");
    m = *gpd.m;
    auto path = blowup_chain(in.form, gpd.data.p);
    local = recenter(path.final_form(), *gpd.pd_point);
    doc["pd_point"] = value_json(*gpd.pd_point, mode.param);
  }
  auto F = to_fibered_field(local, m, in.order);
  auto res = normalize(F, in.order);
  bool verified = verify_conjugation(F, res.phi, m, res.epsilon, in.order) > in.order;
  doc["normal_form"] = normalization_json(F, res, verified, mode.param);
  bool vanishes;
  if constexpr (std::is_same_v<R, Complex>)
    vanishes = res.epsilon.is_zero(tol);
  else
    vanishes = is_zero(res.epsilon);
  doc["verdict"] = verdict_string(vanishes ? Verdict::Dicritical : Verdict::GeneralizedPD, in.order);
  return doc;
}

std::vector<cld> parse_samples(const std::string& text) {
  std::vector<cld> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');)
    out.push_back(parse_constant<Complex>(item, "b", "sample").v);
  if (out.empty()) throw InputError("bad_samples", "--samples needs at least one value");
  return out;
}

OneForm2<Complex> pd_model_form(int m) {
  VarNames v{"x", "y"};
  auto A = -(Series2<Complex>::monomial(v, 0, 1, Complex(m)) + Series2<Complex>::monomial(v, m, 0, Complex(1)));
  return {A, Series2<Complex>::variable(v, 0)};
}

json cmd_holonomy(const Options& o, const ModeSpec& mode) {
  if (o.formal == o.numeric && !o.formal) throw InputError("bad_holonomy_mode", "choose --formal and/or --numeric");
  auto doc = document("holonomy");
  auto N = requested_order(o);
  int order = N ? *N : kDefaultOrder;
  std::optional<FormalDiffeo1<Complex>> h;
  if (o.formal) {
    if (!o.m || *o.m < 1) throw InputError("missing_m", "--formal needs --m M");
    h = pd_holonomy_model(*o.m, order);
    json coeffs = json::array();
    for (int k = 1; k <= order; ++k) coeffs.push_back(to_json(h->coeff(k)));
    doc["formal"] = {{"m", *o.m}, {"order", order}, {"multiplier", to_json(h->multiplier)}, {"coefficients", coeffs}};
  }
  if (o.numeric) {
    OneForm2<Complex> w = pd_model_form(1);
    if (!o.expr.empty()) {
      w = parse_form<Complex>(o.expr, mode.param);
      doc["input"] = input_json(o.expr, w.to_string(), ModeSpec{RingMode::Float, mode.param}, order);
    } else if (o.m && *o.m >= 1) {
      w = pd_model_form(*o.m);
    } else {
      throw InputError("missing_expression", "--numeric needs --expr or --m");
    }
    if (!(o.radius > 0)) throw InputError("bad_radius", "--radius must be positive");
    HolonomyLoop loop{parse_constant<Complex>(o.center, mode.param, "--center").v, o.radius};
    auto samples = numeric_holonomy(w, loop, parse_samples(o.samples));
    json out = json::array();
    long double worst = 0;
    for (const auto& s : samples) {
      json j{{"x0", to_json(s.x0)}, {"value", to_json(s.value)}, {"steps", s.steps}};
      if (h) {
        long double diff = std::abs((*h)(Complex(s.x0)).v - s.value);
        worst = std::max(worst, diff);
        j["formal_value"] = to_json((*h)(Complex(s.x0)).v);
        j["difference"] = static_cast<double>(diff);
      }
      out.push_back(j);
    }
    doc["numeric"] = {{"center", to_json(loop.center)},
                      {"radius", static_cast<double>(loop.radius)},
                      {"form", w.to_string()},
                      {"samples", out}};
    if (h) doc["max_difference"] = static_cast<double>(worst);
  }
  return doc;
}

template <CoefficientRing R>
json cmd_cs_index(const Options& o, const ModeSpec& mode, long double tol) {
  auto in = read_expr<R>(o, mode, tol);
  auto doc = document("cs-index");
  doc["input"] = input_json(in);
  auto X = dual(in.form);
  const R zero = RingTraits<R>::zero();
  json points = json::array();
  std::optional<R> sum = zero;
  auto add = [&](const R& z) {
    auto rep = analyze_point(X, zero, z, "x=0", true, tol);
    points.push_back(singularity_json(rep, mode.param));
    if (sum && rep.cs_index)
      sum = *sum + *rep.cs_index;
    else
      sum.reset();
  };
  if (!o.at.empty()) {
    add(parse_constant<R>(o.at, mode.param, "--at"));
  } else {
    for (const auto& pt : singular_points_on_divisor(in.form, tol).points) {
      if (pt.exact)
        add(*pt.exact);
      else if constexpr (std::is_same_v<R, Complex>)
        add(Complex(pt.approx));
      else
        throw PreconditionError("irrational_point", "singular point " + Complex(pt.approx).str() +
                                                        " is not exact; use --mode float");
    }
  }
  doc["points"] = points;
  doc["sum"] = sum ? value_json(*sum, mode.param) : json(nullptr);
  return doc;
}

template <CoefficientRing R>
json cmd_report(const Options& o, const ModeSpec& mode, long double tol) {
  return full_report(read_expr<R>(o, mode, tol), tol);
}

template <CoefficientRing R>
json dispatch_ring(const std::string& cmd, const Options& o, const ModeSpec& mode, long double tol) {
  if (cmd == "classify") return cmd_classify<R>(o, mode, tol);
  if (cmd == "blowup") return cmd_blowup<R>(o, mode, tol);
  if (cmd == "gpd") return cmd_gpd<R>(o, mode, tol);
  if (cmd == "normal-form") return cmd_normal_form<R>(o, mode, tol);
  if (cmd == "cs-index") return cmd_cs_index<R>(o, mode, tol);
  if (cmd == "report") return cmd_report<R>(o, mode, tol);
  if (cmd == "holonomy") return cmd_holonomy(o, mode);
  throw InputError("unknown_command", "unknown command '" + cmd + "'");
}

json run(const std::string& cmd, const Options& o) {
  auto mode = ModeSpec::parse(o.mode);
  auto tol = tolerance(o);
  switch (mode.mode) {
    case RingMode::Exact: return dispatch_ring<Rational>(cmd, o, mode, tol);
    case RingMode::Float: return dispatch_ring<Complex>(cmd, o, mode, tol);
    case RingMode::Param: return dispatch_ring<ParamPoly>(cmd, o, mode, tol);
  }
  return {};
}

struct Outcome {
  json doc;
  int code = 0;
  std::string message;
};

Outcome run_safely(const std::string& cmd, const Options& o) {
  try {
    auto t0 = std::chrono::steady_clock::now();
    auto doc = run(cmd, o);
    if (o.timing)
      doc["timing"] = {{"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
    return {doc, 0, {}};
  } catch (const Error& e) {
    return {error_json(e), exit_code(e), "error[" + e.code() + "]: " + e.what()};
  } catch (const std::exception& e) {
    auto doc = document("error");
    doc["error"] = {{"kind", "internal"}, {"code", "internal"}, {"message", e.what()}};
    return {doc, 1, std::string("error[internal]: ") + e.what()};
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw InputError("unreadable_input", "cannot read " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  auto s = ss.str();
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

int emit(const Outcome& out, bool as_json) {
  if (out.code != 0) std::cerr << out.message << "\n";
  if (as_json)
    std::cout << out.doc.dump(2) << "\n";
  else if (out.code == 0)
    std::cout << render_text(out.doc);
  return out.code;
}

int run_batch(const std::string& cmd, const Options& o) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(o.input))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<Outcome> outs(files.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < files.size(); ++k) {
    Options local = o;
    try {
      local.expr = read_file(files[k]);
      outs[k] = run_safely(cmd, local);
    } catch (const Error& e) {
      outs[k] = {error_json(e), exit_code(e), "error[" + e.code() + "]: " + e.what()};
    }
  }
  auto doc = document("batch");
  doc["results"] = json::array();
  int code = 0;
  for (std::size_t k = 0; k < files.size(); ++k) {
    doc["results"].push_back({{"file", files[k].filename().string()}, {"exit_code", outs[k].code}, {"document", outs[k].doc}});
    if (outs[k].code != 0) {
      std::cerr << files[k].filename().string() << ": " << outs[k].message << "\n";
      if (code == 0) code = outs[k].code;
    }
  }
  if (o.json)
    std::cout << doc.dump(2) << "\n";
  else
    std::cout << render_text(doc);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nilpotent foliation singularities: reduction, generalized Poincare-Dulac test, normal forms, holonomy"};
  app.require_subcommand(1);
  Options o;

  app.add_option("--expr", o.expr, "1-form, e.g. \"d(y^2+x^4) - 5*x^2*(1+x)*dy\"");
  app.add_option("--input", o.input, "file holding one expression, or a directory processed as a batch");
  app.add_option("--mode", o.mode, "exact | float | param:NAME");
  app.add_option("--order", o.order, "truncation order N (default 2p+m+8, else 24; env FF_ORDER)");
  app.add_option("--precision", o.precision, "float tolerance 10^-P (env FF_PRECISION)");
  app.add_flag("--json", o.json, "print the JSON document");
  app.add_flag("--timing", o.timing, "add wall-clock timing to the document");

  auto* classify = app.add_subcommand("classify", "Takens case, gPD data and the PD/dicritical verdict");
  auto* blowup = app.add_subcommand("blowup", "repeated blow-ups at the origin");
  blowup->add_option("--times", o.times, "number of blow-ups");
  blowup->add_option("--chart", o.chart, "1 (y = xz) or 2 (x = wy)")->check(CLI::IsMember({1, 2}));
  auto* gpd = app.add_subcommand("gpd", "gPD arithmetic for d(y^2+x^2p) + alpha x^p U dy");
  gpd->add_option("--p", o.p, "p")->required();
  auto* alpha = gpd->add_option("--alpha", o.alpha, "alpha");
  gpd->add_option("--m", o.m, "target ratio m")->excludes(alpha);
  gpd->add_option("--u", o.u, "U(x) with U(0) = 1 (default 1)");
  auto* nf = app.add_subcommand("normal-form", "resonant normal form at the PD point");
  nf->add_option("--m", o.m, "treat the input as a local field of ratio m at the origin");
  auto* hol = app.add_subcommand("holonomy", "formal model and numeric transport");
  hol->add_flag("--formal", o.formal, "formal holonomy model");
  hol->add_flag("--numeric", o.numeric, "numeric transport along a circle");
  hol->add_option("--m", o.m, "ratio of the model");
  hol->add_option("--radius", o.radius, "loop radius");
  hol->add_option("--center", o.center, "loop center");
  hol->add_option("--samples", o.samples, "comma separated starting points");
  auto* cs = app.add_subcommand("cs-index", "Camacho-Sad indices along x = 0");
  cs->add_option("--at", o.at, "single point z0 on the divisor");
  auto* report = app.add_subcommand("report", "full pipeline report");
  for (auto* s : {classify, blowup, gpd, nf, hol, cs, report}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  if (!o.expr.empty() && !o.input.empty()) {
    std::cerr << "error[bad_arguments]: --expr and --input are exclusive\n";
    return 2;
  }
  if (!o.input.empty()) {
    std::error_code ec;
    if (fs::is_directory(o.input, ec)) {
      try {
        return run_batch(cmd, o);
      } catch (const std::exception& e) {
        std::cerr << "error[unreadable_input]: " << e.what() << "\n";
        return 2;
      }
    }
    try {
      o.expr = read_file(o.input);
    } catch (const Error& e) {
      return emit({error_json(e), 2, "error[" + e.code() + "]: " + e.what()}, o.json);
    }
  }
  return emit(run_safely(cmd, o), o.json);
}
