#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cqed {

using Real = double;
using Complex = std::complex<Real>;

inline constexpr int kLevels = 4;
inline constexpr int kStateDim = kLevels * kLevels;

// Fixed-size dense types, templated on the real scalar so the same
// expressions can be evaluated in extended precision when needed.
template <typename Scalar>
using LevelMatrixT = Eigen::Matrix<std::complex<Scalar>, kLevels, kLevels>;
template <typename Scalar>
using StateVectorT = Eigen::Matrix<std::complex<Scalar>, kStateDim, 1>;
template <typename Scalar>
using SuperMatrixT = Eigen::Matrix<std::complex<Scalar>, kStateDim, kStateDim>;

using LevelMatrix = LevelMatrixT<Real>;
using StateVector = StateVectorT<Real>;
using SuperMatrix = SuperMatrixT<Real>;

// Levels are numbered 1..4 everywhere in the public API. The element
// sigma_mn = <m|rho|n> lives at matrix position (m-1, n-1) and at index
// (m-1) + 4*(n-1) of the column-major vectorization.
constexpr int state_index(int m, int n) { return (m - 1) + kLevels * (n - 1); }

template <typename Scalar>
StateVectorT<Scalar> vectorize(const LevelMatrixT<Scalar>& sigma)
{
    return Eigen::Map<const StateVectorT<Scalar>>(sigma.data());
}

template <typename Scalar>
LevelMatrixT<Scalar> unvectorize(const StateVectorT<Scalar>& v)
{
    return Eigen::Map<const LevelMatrixT<Scalar>>(v.data());
}

template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& m)
{
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Base for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace cqed
