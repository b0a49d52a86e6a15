#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hardylab {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

enum class ErrorKind {
  InvalidGrid,
  InvalidOrder,
  Domain,
  Degenerate,
  NumericalFailure,
  Singularity,
  TrustViolation,
  Conditioning,
  NotLeftInvertible,
  Multiplicity,
  IndeterminateKernel,
  Config,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidGrid: return "invalid-grid";
    case ErrorKind::InvalidOrder: return "invalid-order";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Degenerate: return "degenerate-input";
    case ErrorKind::NumericalFailure: return "numerical-failure";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::TrustViolation: return "trust-violation";
    case ErrorKind::Conditioning: return "conditioning";
    case ErrorKind::NotLeftInvertible: return "not-left-invertible";
    case ErrorKind::Multiplicity: return "multiplicity";
    case ErrorKind::IndeterminateKernel: return "indeterminate-kernel";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline bool is_power_of_two(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

}  // namespace hardylab
