#pragma once

// JSON forms of the library types (nlohmann::json).

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "hardylab/inner_outer.hpp"
#include "hardylab/operator_matrix.hpp"
#include "hardylab/report.hpp"
#include "hardylab/theta_models.hpp"

namespace hardylab {

using json = nlohmann::json;

inline json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

// Accepts a real number or a [re, im] pair.
inline cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  throw Error(ErrorKind::Config, "expected a number or a [re, im] pair, got " + j.dump());
}

inline json to_json(const CVec& v) {
  json a = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(complex_to_json(v[k]));
  return a;
}

inline json to_json(const CoefSeries& c) { return to_json(c.coeffs()); }

inline CoefSeries coef_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::Config, "coefficient list must be an array");
  CoefSeries c(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) c[k] = complex_from_json(j[k]);
  return c;
}

inline json to_json(const BoundarySamples& s) { return {{"M", s.M()}, {"values", to_json(s.values)}}; }

inline BoundarySamples samples_from_json(const json& j) {
  const auto M = j.at("M").get<std::size_t>();
  BoundarySamples s{coef_from_json(j.at("values")).coeffs()};
  if (s.M() != M) throw Error(ErrorKind::Config, "sample count does not match M");
  if (!is_power_of_two(M)) throw Error(ErrorKind::InvalidGrid, "M must be a power of two");
  return s;
}

inline json to_json(const InnerFunction& m) {
  json zeros = json::array(), atoms = json::array();
  for (const cplx& a : m.blaschke().zeros()) zeros.push_back(complex_to_json(a));
  for (const auto& at : m.singular().atoms()) atoms.push_back({{"zeta", complex_to_json(at.zeta)}, {"mass", at.mass}});
  return {{"constant", complex_to_json(m.blaschke().constant())}, {"zeros", zeros}, {"atoms", atoms}};
}

inline InnerFunction inner_from_json(const json& j) {
  std::vector<cplx> zeros;
  std::vector<SingularAtom> atoms;
  cplx c = 1.0;
  for (const auto& [key, val] : j.items()) {
    if (key == "constant") c = complex_from_json(val);
    else if (key == "zeros") for (const auto& z : val) zeros.push_back(complex_from_json(z));
    else if (key == "atoms") for (const auto& a : val) atoms.push_back({complex_from_json(a.at("zeta")), a.at("mass").get<double>()});
    else throw Error(ErrorKind::Config, "unknown inner-function key '" + key + "'");
  }
  return InnerFunction(BlaschkeProduct(std::move(zeros), c), SingularInner(std::move(atoms)));
}

inline json to_json(const OuterFunction& o) { return {{"M", o.M()}, {"coef", to_json(o.coef())}}; }

inline json to_json(const OperatorMatrix& A) {
  json e = json::array();
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) e.push_back(complex_to_json(A.entries(i, j)));
  return {{"rows", A.rows()}, {"cols", A.cols()}, {"basis", A.basis.str()}, {"trust", A.trust}, {"entries", e}};
}

inline OperatorMatrix operator_from_json(const json& j) {
  const auto r = j.at("rows").get<Eigen::Index>();
  const auto c = j.at("cols").get<Eigen::Index>();
  const json& e = j.at("entries");
  if (static_cast<Eigen::Index>(e.size()) != r * c) throw Error(ErrorKind::Config, "entry count does not match rows*cols");
  CMat m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index k = 0; k < c; ++k) m(i, k) = complex_from_json(e[static_cast<std::size_t>(i * c + k)]);
  return OperatorMatrix(std::move(m), {}, j.at("trust").get<std::size_t>());
}

inline RationalFunction rational_from_json(const json& j) {
  if (j.is_array()) return {coef_from_json(j), CoefSeries{1.0}};
  RationalFunction r;
  for (const auto& [key, val] : j.items()) {
    if (key == "num") r.num = coef_from_json(val);
    else if (key == "den") r.den = coef_from_json(val);
    else throw Error(ErrorKind::Config, "unknown rational key '" + key + "'");
  }
  if (r.num.empty() || r.den.empty()) throw Error(ErrorKind::Config, "rational function needs non-empty num and den");
  return r;
}

inline json to_json(const RationalFunction& r) { return {{"num", to_json(r.num)}, {"den", to_json(r.den)}}; }

inline Theta theta_from_json(const json& j) {
  Theta t;
  bool have1 = false, have2 = false;
  for (const auto& [key, val] : j.items()) {
    if (key == "theta1") t.theta1 = rational_from_json(val), have1 = true;
    else if (key == "theta2") t.theta2 = rational_from_json(val), have2 = true;
    else if (key == "inner1") t.inner1 = inner_from_json(val);
    else if (key == "inner2") t.inner2 = inner_from_json(val);
    else if (key == "label") t.label = val.get<std::string>();
    else throw Error(ErrorKind::Config, "unknown theta key '" + key + "'");
  }
  if (!have1 || !have2) throw Error(ErrorKind::Config, "theta needs theta1 and theta2");
  return t;
}

inline json to_json(const Theta& t) {
  json j = {{"theta1", to_json(t.theta1)}, {"theta2", to_json(t.theta2)}};
  if (!t.label.empty()) j["label"] = t.label;
  return j;
}

inline json to_json(const Check& c) {
  json j = {{"name", c.name}, {"value", std::isfinite(c.value) ? json(c.value) : json(nullptr)}, {"tol", c.tol}, {"pass", c.pass}};
  j["relation"] = c.rel == Relation::AtMost ? "<=" : c.rel == Relation::AtLeast ? ">=" : "==";
  if (c.N) j["N"] = *c.N;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline std::string format_double(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// CSV projection: name,N,value,tolerance,pass
inline std::string to_csv(const std::vector<Check>& checks) {
  std::string out = "name,N,value,tolerance,pass\n";
  for (const auto& c : checks) {
    out += c.name + "," + (c.N ? std::to_string(*c.N) : std::string()) + "," + format_double(c.value) + "," +
           format_double(c.tol) + "," + (c.pass ? "true" : "false") + "\n";
  }
  return out;
}

}  // namespace hardylab
