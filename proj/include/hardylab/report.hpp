#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace hardylab {

enum class Relation { AtMost, AtLeast, Equal };

// One named numerical claim: value compared against tol.
struct Check {
  std::string name;
  std::optional<long> N;
  double value = 0.0;
  double tol = 0.0;
  Relation rel = Relation::AtMost;
  bool pass = false;
  std::string note;

  static Check at_most(std::string name, double value, double tol, std::optional<long> N = {}) {
    return make(std::move(name), value, tol, Relation::AtMost, N);
  }
  static Check at_least(std::string name, double value, double tol, std::optional<long> N = {}) {
    return make(std::move(name), value, tol, Relation::AtLeast, N);
  }
  static Check equals(std::string name, double value, double expected, std::optional<long> N = {}) {
    return make(std::move(name), value, expected, Relation::Equal, N);
  }
  static Check flag(std::string name, bool ok, std::optional<long> N = {}) {
    return make(std::move(name), ok ? 1.0 : 0.0, 1.0, Relation::Equal, N);
  }
  static Check failed(std::string name, const std::string& why, std::optional<long> N = {}) {
    Check c = make(std::move(name), NAN, 0.0, Relation::AtMost, N);
    c.note = why;
    return c;
  }

 private:
  static Check make(std::string name, double value, double tol, Relation rel, std::optional<long> N) {
    Check c;
    c.name = std::move(name);
    c.N = N;
    c.value = value;
    c.tol = tol;
    c.rel = rel;
    if (std::isnan(value)) c.pass = false;
    else if (rel == Relation::AtMost) c.pass = value <= tol;
    else if (rel == Relation::AtLeast) c.pass = value >= tol;
    else c.pass = value == tol;
    return c;
  }
};

inline bool all_pass(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

inline void sort_checks(std::vector<Check>& checks) {
  std::stable_sort(checks.begin(), checks.end(), [](const Check& a, const Check& b) {
    if (a.name != b.name) return a.name < b.name;
    return a.N.value_or(-1) < b.N.value_or(-1);
  });
}

}  // namespace hardylab
