#pragma once

// Batch runner behind the command-line tool: config validation, dispatch,
// report assembly (JSON + CSV + provenance sidecar).

#include <cctype>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hardylab/parallel.hpp"
#include "hardylab/presets.hpp"
#include "hardylab/probes.hpp"
#include "hardylab/serialize.hpp"

namespace hardylab {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kVersion = "1.0.0";

enum ExitCode { kExitPass = 0, kExitFail = 1, kExitConfig = 2 };

struct RunConfig {
  std::string command;               // factor | model | theta | probe | suite
  std::string probe;                 // probe kind when command == probe
  std::optional<std::string> preset;
  json params = json::object();
  std::string out;                   // output path stem; empty writes nothing
};

struct RunResult {
  int exit_code = kExitPass;
  std::vector<Check> checks;
  json result = json::object();
  json report;
};

namespace detail {

[[noreturn]] inline void config_error(const std::string& msg) { throw Error(ErrorKind::Config, msg); }

// "1", "-2.5", "0.5i", "0.3+0.2i", "i", "-i"
inline cplx parse_complex(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (s.empty()) config_error("empty number");
  const char* p = s.c_str();
  char* end = nullptr;
  auto imag_only = [&](const char* q) -> std::optional<double> {
    if (std::string(q) == "i" || std::string(q) == "+i") return 1.0;
    if (std::string(q) == "-i") return -1.0;
    return std::nullopt;
  };
  if (auto v = imag_only(p)) return {0.0, *v};
  const double a = std::strtod(p, &end);
  if (end == p) config_error("cannot parse number '" + s + "'");
  if (*end == '\0') return {a, 0.0};
  if (std::string(end) == "i") return {0.0, a};
  if (auto v = imag_only(end)) return {a, *v};
  const char* q = end;
  const double b = std::strtod(q, &end);
  if (end == q || std::string(end) != "i") config_error("cannot parse number '" + s + "'");
  return {a, b};
}

inline std::vector<cplx> complex_list(const json& j, const std::string& key) {
  std::vector<cplx> out;
  if (j.is_string()) {
    std::stringstream ss(j.get<std::string>());
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_complex(tok));
  } else if (j.is_array()) {
    for (const auto& v : j) out.push_back(v.is_string() ? parse_complex(v.get<std::string>()) : complex_from_json(v));
  } else {
    config_error("'" + key + "' must be a list or a comma-separated string");
  }
  return out;
}

inline json complex_list_json(const std::vector<cplx>& v) {
  json a = json::array();
  for (const cplx& z : v) a.push_back(complex_to_json(z));
  return a;
}

enum class Kind { Int, Pow2, Positive, String, ComplexList, IntList, Object, Any };

struct ParamSpec {
  Kind kind;
  json fallback;  // null = required unless noted by the command
};

using Schema = std::map<std::string, ParamSpec>;

inline Schema schema_for(const RunConfig& c) {
  const json theta_tols = {{"inner_tol", 1e-10}, {"angle_tol", 1e-6}, {"orth_tol", 1e-8},
                           {"krylov_tol", 1e-4}, {"intertwining_tol", 1e-8}, {"corona_tol", 1e-10}};
  Schema s;
  if (c.command == "factor") {
    s = {{"poly", {Kind::ComplexList, nullptr}}, {"cap", {Kind::Int, 64}}, {"M", {Kind::Pow2, 256}},
         {"tol", {Kind::Positive, 1e-8}}};
  } else if (c.command == "model") {
    s = {{"zeros", {Kind::ComplexList, nullptr}}, {"N", {Kind::Pow2, 256}},
         {"annihilation_tol", {Kind::Positive, 1e-11}}, {"divisor_tol", {Kind::Positive, 1e-4}}};
  } else if (c.command == "theta") {
    s = {{"N", {Kind::Pow2, 256}}, {"M", {Kind::Pow2, 1024}}, {"checks", {Kind::String, "all"}},
         {"theta", {Kind::Object, nullptr}}};
    for (const auto& [k, v] : theta_tols.items()) s[k] = {Kind::Positive, v};
  } else if (c.command == "probe") {
    if (c.probe == "closability") {
      s = {{"scenario", {Kind::String, "poly-vs-outer"}}, {"eps", {Kind::Positive, 1e-2}}, {"g", {Kind::String, "auto"}},
           {"cap", {Kind::Int, 40}}, {"N", {Kind::Pow2, 256}}, {"M", {Kind::Pow2, 1024}}};
    } else if (c.probe == "biorthogonality") {
      s = {{"N", {Kind::Pow2, 256}}, {"K", {Kind::Int, 10}}, {"tol", {Kind::Positive, 1e-6}}, {"theta", {Kind::Object, nullptr}}};
    } else if (c.probe == "spectral") {
      s = {{"lambdas", {Kind::ComplexList, "0,0.3,0.5i,-0.7"}}, {"ladder", {Kind::IntList, {64, 128, 256}}},
           {"counts", {Kind::IntList, {10, 20, 40, 80}}}, {"radius", {Kind::Positive, 0.5}},
           {"density_N", {Kind::Pow2, 64}}, {"density_tol", {Kind::Positive, 0.02}}, {"theta", {Kind::Object, nullptr}}};
    } else if (c.probe == "rsc") {
      s = {{"model", {Kind::String, "shift"}}, {"zeros", {Kind::ComplexList, json::array()}},
           {"h", {Kind::ComplexList, "1,-0.5"}}, {"d", {Kind::Int, 8}}, {"N", {Kind::Pow2, 64}},
           {"tol", {Kind::Positive, 1e-10}}};
    } else {
      config_error("unknown probe '" + c.probe + "' (expected closability, biorthogonality, spectral or rsc)");
    }
  } else if (c.command == "suite") {
    s = {{"N", {Kind::Pow2, 256}}};
  } else {
    config_error("unknown command '" + c.command + "'");
  }
  return s;
}

inline json check_value(const std::string& key, Kind kind, const json& v) {
  auto fail = [&](const std::string& what) { config_error("parameter '" + key + "' " + what); };
  switch (kind) {
    case Kind::Int:
      if (!v.is_number_integer() || v.get<long>() < 0) fail("must be a non-negative integer");
      return v;
    case Kind::Pow2:
      if (!v.is_number_integer() || v.get<long>() <= 0 || !is_power_of_two(v.get<std::size_t>())) fail("must be a power of two");
      return v;
    case Kind::Positive:
      if (!v.is_number() || !(v.get<double>() > 0.0) || !std::isfinite(v.get<double>())) fail("must be positive");
      return v;
    case Kind::String:
      if (!v.is_string()) fail("must be a string");
      return v;
    case Kind::ComplexList:
      return complex_list_json(complex_list(v, key));
    case Kind::IntList:
      if (!v.is_array() || v.empty()) fail("must be a non-empty integer list");
      for (const auto& x : v)
        if (!x.is_number_integer() || x.get<long>() <= 0) fail("must hold positive integers");
      return v;
    case Kind::Object:
      if (!v.is_object()) fail("must be an object");
      return v;
    case Kind::Any:
      return v;
  }
  return v;
}

}  // namespace detail

inline json to_json(const RunConfig& c) {
  json j = {{"schema", kSchemaVersion}, {"command", c.command}, {"params", c.params}};
  if (!c.probe.empty()) j["probe"] = c.probe;
  if (c.preset) j["preset"] = *c.preset;
  if (!c.out.empty()) j["out"] = c.out;
  return j;
}

inline RunConfig config_from_json(const json& j) {
  if (!j.is_object()) detail::config_error("config must be a JSON object");
  RunConfig c;
  for (const auto& [key, val] : j.items()) {
    if (key == "schema") {
      if (!val.is_number_integer() || val.get<int>() != kSchemaVersion) detail::config_error("unsupported schema version");
    } else if (key == "command") {
      if (!val.is_string()) detail::config_error("'command' must be a string");
      c.command = val.get<std::string>();
    } else if (key == "probe") {
      if (!val.is_string()) detail::config_error("'probe' must be a string");
      c.probe = val.get<std::string>();
    } else if (key == "preset") {
      if (!val.is_string()) detail::config_error("'preset' must be a string");
      c.preset = val.get<std::string>();
    } else if (key == "params") {
      if (!val.is_object()) detail::config_error("'params' must be an object");
      c.params = val;
    } else if (key == "out") {
      if (!val.is_string()) detail::config_error("'out' must be a string");
      c.out = val.get<std::string>();
    } else {
      detail::config_error("unknown key '" + key + "'");
    }
  }
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) detail::config_error("cannot read config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    detail::config_error(std::string("invalid JSON: ") + e.what());
  }
  return config_from_json(j);
}

// Canonical config for a catalog entry.
inline RunConfig preset_config(const std::string& name) {
  RunConfig c;
  c.preset = name;
  if (name == "poly-vs-outer-exp") {
    c.command = "probe";
    c.probe = "closability";
  } else if (is_theta_preset(name)) {
    c.command = "theta";
  } else {
    detail::config_error("unknown preset '" + name + "'");
  }
  return c;
}

// Validates a config and fills every default; the result is what reports echo.
inline RunConfig resolve(RunConfig c) {
  if (c.command.empty()) {
    if (!c.preset) detail::config_error("missing 'command'");
    const RunConfig p = preset_config(*c.preset);
    c.command = p.command;
    if (c.probe.empty()) c.probe = p.probe;
  }
  if (c.command != "probe" && !c.probe.empty()) detail::config_error("'probe' is only valid with the probe command");
  if (c.command == "probe" && c.probe.empty()) detail::config_error("probe command needs a probe kind");
  const detail::Schema schema = detail::schema_for(c);

  if (c.preset) {
    const std::string& p = *c.preset;
    const bool theta_ok = c.command == "theta" || (c.command == "probe" && (c.probe == "biorthogonality" || c.probe == "spectral"));
    if (p == "poly-vs-outer-exp") {
      if (!(c.command == "probe" && c.probe == "closability")) detail::config_error("preset '" + p + "' belongs to probe closability");
      if (c.params.contains("scenario") && c.params["scenario"] != "poly-vs-outer")
        detail::config_error("preset '" + p + "' fixes scenario poly-vs-outer");
    } else if (is_theta_preset(p)) {
      if (!theta_ok) detail::config_error("preset '" + p + "' is a Theta preset");
      if (c.params.contains("theta")) detail::config_error("give either a preset or params.theta, not both");
    } else {
      detail::config_error("unknown preset '" + p + "'");
    }
  }

  json out = json::object();
  for (const auto& [key, val] : c.params.items()) {
    const auto it = schema.find(key);
    if (it == schema.end()) detail::config_error("unknown parameter '" + key + "' for " + c.command + (c.probe.empty() ? "" : " " + c.probe));
    out[key] = detail::check_value(key, it->second.kind, val);
  }
  for (const auto& [key, spec] : schema) {
    if (out.contains(key)) continue;
    if (!spec.fallback.is_null()) out[key] = detail::check_value(key, spec.kind, spec.fallback);
  }
  if (c.command == "factor" && !out.contains("poly")) detail::config_error("factor needs 'poly'");
  if (c.command == "model" && !out.contains("zeros")) detail::config_error("model needs 'zeros'");
  const bool wants_theta = c.command == "theta" || (c.command == "probe" && (c.probe == "biorthogonality" || c.probe == "spectral"));
  if (wants_theta && !c.preset && !out.contains("theta")) c.preset = "paper-example";
  if (out.contains("theta")) theta_from_json(out["theta"]);  // shape check
  if (c.command == "probe" && c.probe == "closability") {
    const std::string sc = out["scenario"];
    if (sc != "poly-vs-outer" && sc != "poly-vs-kernels" && sc != "bilateral-arcs") detail::config_error("unknown scenario '" + sc + "'");
    const std::string g = out["g"];
    if (g != "auto" && g != "one" && g != "zero" && g != "arcs") detail::config_error("'g' must be one, zero, arcs or auto");
    if (g == "arcs" && sc != "bilateral-arcs") detail::config_error("g = arcs only applies to bilateral-arcs");
    if (g == "one" && sc == "bilateral-arcs") detail::config_error("bilateral-arcs needs g = arcs or zero");
  }
  if (c.command == "probe" && c.probe == "rsc") {
    const std::string m = out["model"];
    if (m != "shift" && m != "blaschke") detail::config_error("rsc model must be shift or blaschke");
    if (m == "blaschke" && out["zeros"].empty()) detail::config_error("rsc model blaschke needs 'zeros'");
  }
  if (c.command == "theta" && out["checks"] != "all" && out["checks"].get<std::string>().empty())
    detail::config_error("'checks' must be 'all' or a comma-separated list");
  c.params = out;
  return c;
}

namespace detail {

inline std::vector<cplx> cparam(const RunConfig& c, const std::string& key) { return complex_list(c.params.at(key), key); }

inline std::size_t uparam(const RunConfig& c, const std::string& key) { return c.params.at(key).get<std::size_t>(); }

inline double dparam(const RunConfig& c, const std::string& key) { return c.params.at(key).get<double>(); }

inline Theta config_theta(const RunConfig& c) {
  if (c.params.contains("theta")) return theta_from_json(c.params["theta"]);
  return theta_preset(c.preset.value_or("paper-example"));
}

// Runs fn; library errors become a failed check instead of aborting the run.
template <class F>
void guarded(std::vector<Check>& out, const std::string& name, F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    out.push_back(Check::failed(name, e.what()));
  } catch (const std::exception& e) {
    out.push_back(Check::failed(name, e.what()));
  }
}

inline void run_factor(const RunConfig& c, RunResult& r) {
  const auto coeffs = cparam(c, "poly");
  CoefSeries p(coeffs.size());
  for (std::size_t k = 0; k < coeffs.size(); ++k) p[k] = coeffs[k];
  const std::size_t M = uparam(c, "M");
  guarded(r.checks, "factor", [&] {
    const PolyFactorization f = poly_inner_outer(p, uparam(c, "cap"));
    double recon = 0.0, unimod = 0.0;
    const CoefSeries pt = poly_trim(p);
    for (std::size_t j = 0; j < M; ++j) {
      const cplx z = BoundarySamples::grid_point(j, M);
      const cplx mi = f.inner(z);
      recon = std::max(recon, std::abs(mi * eval_poly(f.outer.coeffs(), z) - eval_poly(pt.coeffs(), z)));
      unimod = std::max(unimod, std::abs(std::abs(mi) - 1.0));
    }
    const double scale = std::max(1.0, pt.coeffs().cwiseAbs().maxCoeff());
    r.checks.push_back(Check::at_most("factor_reconstruction", recon / scale, dparam(c, "tol")));
    r.checks.push_back(Check::at_most("inner_unimodular", unimod, 1e-12));
    r.checks.push_back(Check::at_most("root_backward_error", f.roots.max_backward_error, 1e-8));
    r.result["inner"] = to_json(f.inner);
    r.result["outer"] = to_json(f.outer);
    r.result["roots"] = complex_list_json(f.roots.roots);
  });
}

inline void run_model(const RunConfig& c, RunResult& r) {
  const auto zeros = cparam(c, "zeros");
  const std::size_t N = uparam(c, "N");
  const long n = static_cast<long>(N);
  guarded(r.checks, "model", [&] {
    for (const cplx& a : zeros)
      if (!(std::abs(a) < 1.0)) config_error("Blaschke zeros must lie in the open disk");
    const InnerFunction m = InnerFunction::from_zeros(zeros);
    const ModelBasis B = model_basis(m, N);
    const CMat G = B.vectors.adjoint() * B.vectors;
    r.checks.push_back(Check::at_most("basis_orthonormality", (G - CMat::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff(), 1e-12, n));
    const OperatorMatrix A = functional_calculus(m.series(N), B);
    r.checks.push_back(Check::at_most("minimal_annihilation", A.entries.cwiseAbs().maxCoeff(), dparam(c, "annihilation_tol"), n));
    // proper divisors must not annihilate
    double weakest = INFINITY;
    const std::size_t d = zeros.size();
    if (d <= 12) {
      for (std::size_t mask = 0; mask + 1 < (std::size_t{1} << d); ++mask) {
        std::vector<cplx> sub;
        for (std::size_t i = 0; i < d; ++i)
          if (mask & (std::size_t{1} << i)) sub.push_back(zeros[i]);
        weakest = std::min(weakest, operator_norm(functional_calculus(InnerFunction::from_zeros(sub).series(N), B).entries));
      }
      r.checks.push_back(Check::at_least("proper_divisor_norm", weakest, dparam(c, "divisor_tol"), n));
    }
    const OperatorMatrix S = compress(shift_matrix(N), B);
    // every zero a is an eigenvalue of geometric multiplicity one
    double dim = 1.0;
    for (const cplx& a : zeros) {
      const KernelResult k = numeric_kernel(CMat(shifted(S, a).entries.adjoint()));
      if (k.dim() != 1 || !k.determinate) dim = static_cast<double>(k.dim());
    }
    r.checks.push_back(Check::equals("adjoint_kernel_dim", dim, 1.0, n));
    r.result["dim"] = B.dim();
    r.result["inner"] = to_json(m);
  });
}

inline std::vector<Check> generic_theta_checks(const Theta& th, const RunConfig& c, json& result) {
  std::vector<Check> out;
  const std::size_t N = uparam(c, "N");
  const long n = static_cast<long>(N);
  guarded(out, "inner_column_deviation", [&] {
    out.push_back(Check::at_most("inner_column_deviation", check_inner_column(th, uparam(c, "M")).max_deviation, dparam(c, "inner_tol"), n));
  });
  guarded(out, "basis", [&] {
    const ThetaBasis B = theta_basis(th, N);
    out.push_back(Check::at_most("s_theta_invariance", s_theta_invariance_residual(B), 1e-10, n));
    out.push_back(Check::at_most("q_intertwining", intertwining(B).residual, dparam(c, "intertwining_tol"), n));
    result["dim"] = B.dim();
    result["exact_dim"] = B.exact_dim;
    result["trusted"] = B.trusted();
    result["d"] = B.cleared.d;
  });
  guarded(out, "confluence_certificate", [&] {
    const ConfluenceReport rep = confluence_test(th, std::min<std::size_t>(N, 128));
    result["confluent"] = rep.confluent;
    if (rep.confluent) {
      double smin = INFINITY;
      for (const auto& [name, s] : rep.sigma_certificates) smin = std::min(smin, s);
      out.push_back(Check::at_least("confluence_certificate", smin, 1e-4, n));
    } else {
      out.push_back(Check::at_most("confluence_certificate", rep.witness_residual.value_or(INFINITY), 1e-7, n));
    }
  });
  guarded(out, "corona", [&] {
    const CoronaResult cr = corona_similarity(th, 8, 512, dparam(c, "corona_tol"));
    result["corona_feasible"] = cr.feasible;
    if (cr.feasible) {
      result["corona_degree"] = cr.degree;
      result["corona_f1"] = to_json(cr.f1);
      result["corona_f2"] = to_json(cr.f2);
      out.push_back(Check::at_most("corona_residual", cr.boundary_residual, dparam(c, "corona_tol"), n));
    }
  });
  return out;
}

inline std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(std::remove_if(tok.begin(), tok.end(), [](unsigned char ch) { return std::isspace(ch); }), tok.end());
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

inline void run_theta(const RunConfig& c, RunResult& r) {
  const Theta th = config_theta(c);
  std::vector<Check> all;
  if (!c.params.contains("theta") && c.preset == "paper-example") {
    PaperSuiteOptions o;
    o.N = uparam(c, "N");
    o.M = uparam(c, "M");
    o.inner_tol = dparam(c, "inner_tol");
    o.angle_tol = dparam(c, "angle_tol");
    o.orth_tol = dparam(c, "orth_tol");
    o.krylov_tol = dparam(c, "krylov_tol");
    o.intertwining_tol = dparam(c, "intertwining_tol");
    o.corona_tol = dparam(c, "corona_tol");
    all = paper_example_suite(o);
  } else {
    all = generic_theta_checks(th, c, r.result);
  }
  const std::string sel = c.params["checks"];
  if (sel == "all") {
    r.checks = all;
    return;
  }
  std::set<std::string> known;
  for (const auto& ch : all) known.insert(ch.name);
  for (const auto& want : split_names(sel)) {
    if (!known.count(want)) config_error("unknown check '" + want + "'");
    for (const auto& ch : all)
      if (ch.name == want) r.checks.push_back(ch);
  }
}

inline CVec closability_target(const std::string& g, ScenarioKind kind, std::size_t n, std::size_t M) {
  if (kind == ScenarioKind::BilateralArcs) return g == "zero" ? CVec(CVec::Zero(static_cast<Eigen::Index>(M))) : arcs_target(M);
  CVec t = CVec::Zero(static_cast<Eigen::Index>(n));
  if (g != "zero") t[0] = 1.0;
  return t;
}

inline void run_closability(const RunConfig& c, RunResult& r) {
  const std::string sc = c.params["scenario"];
  ClosabilityScenario s;
  s.kind = sc == "poly-vs-kernels" ? ScenarioKind::PolyVsKernels : sc == "bilateral-arcs" ? ScenarioKind::BilateralArcs : ScenarioKind::PolyVsOuter;
  s.N = uparam(c, "N");
  s.M = uparam(c, "M");
  const double eps = dparam(c, "eps");
  const int cap = static_cast<int>(uparam(c, "cap"));
  guarded(r.checks, "witness", [&] {
    const CVec g = closability_target(c.params["g"], s.kind, s.N, s.M);
    const Witness w = nonclosability_search(s, g, eps, cap);
    r.checks.push_back(Check::flag("witness_found", w.found));
    r.checks.push_back(Check::at_most("witness_eps", w.eps, eps));
    r.checks.push_back(Check::flag("eps_monotone", std::is_sorted(w.eps_by_cap.rbegin(), w.eps_by_cap.rend())));
    r.result["scenario"] = to_string(s.kind);
    r.result["eps_achieved"] = w.eps;
    r.result["h_norm"] = w.h_norm;
    r.result["target_distance"] = w.target_dist;
    r.result["degree_n"] = w.degree_n;
    r.result["degree_m"] = w.degree_m;
    r.result["eps_by_cap"] = w.eps_by_cap;
  });
}

inline void run_biorthogonality(const RunConfig& c, RunResult& r) {
  const std::size_t N = uparam(c, "N");
  guarded(r.checks, "pairing_deviation", [&] {
    const ThetaModel mdl = theta_model(config_theta(c), N);
    const BiorthogonalityReport rep = biorthogonality_suite(mdl.T, mdl.f0, static_cast<int>(uparam(c, "K")));
    r.checks.push_back(Check::at_most("pairing_deviation", rep.deviation, dparam(c, "tol"), static_cast<long>(N)));
  });
}

inline std::string lambda_label(cplx z) {
  std::ostringstream os;
  os << "fredholm_index[" << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i]";
  return os.str();
}

inline void run_spectral(const RunConfig& c, RunResult& r) {
  const auto lambdas = cparam(c, "lambdas");
  const auto ladder = c.params["ladder"].get<std::vector<std::size_t>>();
  const auto counts = c.params["counts"].get<std::vector<std::size_t>>();
  for (const cplx& z : lambdas)
    if (!(std::abs(z) < 1.0)) config_error("spectral lambdas must lie in the open disk");
  guarded(r.checks, "spectral", [&] {
    const SpectralPicture sp = spectral_picture_suite(config_theta(c), lambdas, ladder, counts, dparam(c, "radius"), uparam(c, "density_N"));
    json pts = json::array();
    for (const auto& p : sp.points) {
      // value is the stable index; a stable -1 with a nonzero kernel is reported as NaN
      double idx = p.fredholm.index ? static_cast<double>(*p.fredholm.index) : NAN;
      if (idx == -1.0 && !(p.fredholm.kernel == 0u && p.fredholm.cokernel == 1u)) idx = NAN;
      r.checks.push_back(Check::equals(lambda_label(p.lambda), idx, -1.0));
      json rungs = json::array();
      for (const auto& g : p.fredholm.rungs)
        rungs.push_back({{"N", g.N}, {"kernel", g.kernel}, {"cokernel", g.cokernel}, {"sigma_min", g.sigma_min}});
      pts.push_back({{"lambda", complex_to_json(p.lambda)}, {"stable", p.fredholm.stable}, {"rungs", rungs}});
    }
    r.result["points"] = pts;
    json dens = json::array();
    std::vector<double> errs;
    for (const auto& [cnt, e] : sp.density) {
      dens.push_back({{"count", cnt}, {"max_projection_error", e}});
      errs.push_back(e);
    }
    r.result["density"] = dens;
    if (!errs.empty()) {
      r.checks.push_back(Check::flag("density_monotone", std::is_sorted(errs.rbegin(), errs.rend())));
      r.checks.push_back(Check::at_most("density_projection", errs.back(), dparam(c, "density_tol"), static_cast<long>(sp.density.back().first)));
    }
  });
}

inline void run_rsc(const RunConfig& c, RunResult& r) {
  const std::size_t N = uparam(c, "N");
  const auto hc = cparam(c, "h");
  guarded(r.checks, "rsc", [&] {
    CoefSeries h(N);
    for (std::size_t k = 0; k < std::min(N, hc.size()); ++k) h[k] = hc[k];
    OperatorMatrix T;
    CVec hv, h0;
    if (c.params["model"] == "shift") {
      T = shift_matrix(N);
      hv = h.coeffs();
      h0 = CVec::Zero(static_cast<Eigen::Index>(N));
      h0[0] = 1.0;
    } else {
      const ModelBasis B = model_basis(InnerFunction::from_zeros(cparam(c, "zeros")), N);
      T = compress(shift_matrix(N), B);
      hv = B.vectors.adjoint() * h.coeffs();
      CVec e0 = CVec::Zero(static_cast<Eigen::Index>(N));
      e0[0] = 1.0;
      h0 = B.vectors.adjoint() * e0;
      r.checks.push_back(Check::at_most("unit_projection_gap", model_unit_projection_gap(B.m, N), 1e-10, static_cast<long>(N)));
    }
    const RscResult rs = rsc_witness(T, h0, hv, static_cast<int>(uparam(c, "d")), dparam(c, "tol"));
    r.checks.push_back(Check::flag("rsc_found", rs.q.found));
    r.checks.push_back(Check::flag("rsc_injective", rs.injective));
    r.result["u"] = to_json(rs.q.u);
    r.result["v"] = to_json(rs.q.v);
    r.result["degree"] = rs.q.degree;
    r.result["residual"] = rs.q.residual;
    r.result["sigma_min_v"] = rs.sigma_min_v;
  });
}

inline void prefix_checks(std::vector<Check>& cs, const std::string& p) {
  for (auto& c : cs) c.name = p + "." + c.name;
}

inline void run_suite(const RunConfig& c, RunResult& r) {
  const std::size_t N = uparam(c, "N");
  std::vector<std::function<std::vector<Check>()>> jobs = {
      [&] {
        PaperSuiteOptions o;
        o.N = N;
        auto cs = paper_example_suite(o);
        prefix_checks(cs, "paper-example");
        return cs;
      },
      [&] {
        RunConfig k = resolve(preset_config("common-factor-z"));
        k.params["N"] = std::min<std::size_t>(N, 128);
        json ignored;
        auto cs = generic_theta_checks(theta_preset("common-factor-z"), k, ignored);
        prefix_checks(cs, "common-factor-z");
        return cs;
      },
      [&] {
        RunResult rr;
        run_closability(resolve(preset_config("poly-vs-outer-exp")), rr);
        prefix_checks(rr.checks, "poly-vs-outer-exp");
        return rr.checks;
      },
      [&] {
        RunConfig k;
        k.command = "probe";
        k.probe = "closability";
        k.params = {{"scenario", "poly-vs-kernels"}, {"eps", 0.1}, {"cap", 30}};
        RunResult rr;
        run_closability(resolve(k), rr);
        prefix_checks(rr.checks, "poly-vs-kernels");
        return rr.checks;
      },
  };
  const auto parts = parallel_map(jobs.size(), [&](std::size_t i) { return jobs[i](); });
  for (const auto& p : parts) r.checks.insert(r.checks.end(), p.begin(), p.end());
}

}  // namespace detail

// Validates, executes and assembles the report. Configuration problems
// throw Error(ErrorKind::Config); everything else lands in the checks.
inline RunResult run(const RunConfig& raw) {
  const RunConfig c = resolve(raw);
  RunResult r;
  if (c.command == "factor") detail::run_factor(c, r);
  else if (c.command == "model") detail::run_model(c, r);
  else if (c.command == "theta") detail::run_theta(c, r);
  else if (c.command == "suite") detail::run_suite(c, r);
  else if (c.probe == "closability") detail::run_closability(c, r);
  else if (c.probe == "biorthogonality") detail::run_biorthogonality(c, r);
  else if (c.probe == "spectral") detail::run_spectral(c, r);
  else detail::run_rsc(c, r);
  sort_checks(r.checks);
  r.exit_code = all_pass(r.checks) ? kExitPass : kExitFail;

  json checks = json::array();
  for (const auto& ch : r.checks) checks.push_back(to_json(ch));
  std::size_t passed = 0;
  for (const auto& ch : r.checks) passed += ch.pass ? 1 : 0;
  RunConfig echo = c;
  echo.out.clear();
  r.report = {{"schema", kSchemaVersion},
              {"config", to_json(echo)},
              {"checks", checks},
              {"result", r.result},
              {"summary", {{"total", r.checks.size()}, {"passed", passed}, {"failed", r.checks.size() - passed}}}};
  return r;
}

inline json error_object(const Error& e) {
  const std::string what = e.what();
  const std::string prefix = std::string(to_string(e.kind())) + ": ";
  return {{"schema", kSchemaVersion},
          {"error", {{"kind", to_string(e.kind())}, {"message", what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what}}}};
}

inline json provenance() {
  char stamp[32];
  const std::time_t now = std::time(nullptr);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return {{"tool", "hardylab"}, {"version", kVersion}, {"generated_at", stamp}, {"threads", thread_cap()},
#ifdef __VERSION__
          {"compiler", __VERSION__},
#endif
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." + std::to_string(EIGEN_MINOR_VERSION)}};
}

// Writes <stem>.json, <stem>.csv and <stem>.provenance.json.
inline void write_outputs(const RunResult& r, const std::string& stem) {
  auto put = [](const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::Config, "cannot write '" + path + "'");
    f << text;
  };
  put(stem + ".json", r.report.dump(2) + "\n");
  if (!r.checks.empty()) put(stem + ".csv", to_csv(r.checks));
  put(stem + ".provenance.json", provenance().dump(2) + "\n");
}

}  // namespace hardylab
