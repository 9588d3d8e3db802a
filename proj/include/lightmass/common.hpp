#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace lightmass {

// Covariance assembly and the symplectic analysis run in extended precision:
// the oscillator block is ~1e8 larger than the vacuum scale near the
// transition, and nu_min is needed to ~1e-6 absolute.
using Real = long double;
using Complex = std::complex<Real>;
using MatrixR = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using MatrixC = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using VectorR = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using VectorC = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

// Bad parameters or configuration. CLI exit code 2.
class InvalidInput : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Numerics could not deliver a trustworthy answer. CLI exit code 3.
class NumericalFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Bracket endpoints give the same verdict. CLI exit code 4.
class NoTransition : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace lightmass
