#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "hardylab/theta_models.hpp"

namespace hardylab {

struct PresetInfo {
  std::string name;
  std::string command;  // the command the preset is meant for
  std::string description;
};

// theta1 = 3z/5, theta2 = 4(2z-1)/(5(2-z))
inline Theta paper_example_theta() {
  Theta t;
  t.theta1 = {CoefSeries{0.0, 0.6}, CoefSeries{1.0}};
  t.theta2 = {CoefSeries{-4.0, 8.0}, CoefSeries{10.0, -5.0}};
  t.inner1 = InnerFunction::from_zeros({0.0});
  t.inner2 = InnerFunction::from_zeros({0.5});
  t.label = "paper-example";
  return t;
}

inline Theta shift_theta() {
  Theta t;
  t.theta1 = {CoefSeries{1.0}, CoefSeries{1.0}};
  t.theta2 = {CoefSeries{0.0}, CoefSeries{1.0}};
  t.label = "shift";
  return t;
}

// The worked example multiplied by z in both components.
inline Theta common_factor_z_theta() {
  Theta t;
  t.theta1 = {CoefSeries{0.0, 0.0, 0.6}, CoefSeries{1.0}};
  t.theta2 = {CoefSeries{0.0, -4.0, 8.0}, CoefSeries{10.0, -5.0}};
  t.inner1 = InnerFunction::from_zeros({0.0, 0.0});
  t.inner2 = InnerFunction::from_zeros({0.0, 0.5});
  t.label = "common-factor-z";
  return t;
}

inline Theta z_pair_theta() {
  const double s = 1.0 / std::sqrt(2.0);
  Theta t;
  t.theta1 = {CoefSeries{0.0, s}, CoefSeries{1.0}};
  t.theta2 = {CoefSeries{0.0, s}, CoefSeries{1.0}};
  t.label = "z-pair";
  return t;
}

inline Theta z_z2_theta() {
  const double s = 1.0 / std::sqrt(2.0);
  Theta t;
  t.theta1 = {CoefSeries{0.0, s}, CoefSeries{1.0}};
  t.theta2 = {CoefSeries{0.0, 0.0, s}, CoefSeries{1.0}};
  t.label = "z-z2";
  return t;
}

inline std::vector<PresetInfo> list_presets() {
  return {
      {"common-factor-z", "theta", "non-confluent pair: the worked example times z"},
      {"paper-example", "theta", "theta1 = 3z/5, theta2 = 4(2z-1)/(5(2-z))"},
      {"poly-vs-outer-exp", "probe", "polynomials against polynomial multiples of exp(z)"},
      {"shift", "theta", "Theta = [1; 0], S(Theta) is the unilateral shift"},
      {"z-pair", "theta", "theta1 = theta2 = z/sqrt(2)"},
      {"z-z2", "theta", "theta1 = z/sqrt(2), theta2 = z^2/sqrt(2)"},
  };
}

inline bool is_theta_preset(const std::string& name) {
  return name == "paper-example" || name == "shift" || name == "common-factor-z" || name == "z-pair" || name == "z-z2";
}

inline Theta theta_preset(const std::string& name) {
  if (name == "paper-example") return paper_example_theta();
  if (name == "shift") return shift_theta();
  if (name == "common-factor-z") return common_factor_z_theta();
  if (name == "z-pair") return z_pair_theta();
  if (name == "z-z2") return z_z2_theta();
  throw Error(ErrorKind::Config, "unknown theta preset '" + name + "'");
}

}  // namespace hardylab
