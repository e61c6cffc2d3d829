#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace chyp {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// Input that violates a documented precondition (bad dimension, bad domain,
// unsupported configuration). The CLI maps it to exit code 2.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A numerical check failed on otherwise well-formed input, e.g. a matrix that
// is not J-unitary. The CLI maps it to exit code 3.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class UnsupportedGroupClass : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class DegenerateQuad : public ValidationError {
public:
  using ValidationError::ValidationError;
};

// Scale of the Bergman distance d = kappa * arccosh(...).
inline constexpr double kDefaultKappa = 4.0;
// Relative tolerance on <z,z>/|z|^2 separating interior, boundary, exterior.
inline constexpr double kDefaultLocationTol = 1e-9;

}  // namespace chyp
