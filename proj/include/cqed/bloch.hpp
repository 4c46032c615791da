#pragma once

#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "cqed/model.hpp"

namespace cqed {

/// Linear generator of the atomic state for a fixed intracavity field:
/// d vec(sigma)/dt = matrix * vec(sigma).
struct Generator {
    SuperMatrix matrix;
    Real field_rabi = 0.0;
    SystemConfig config;

    LevelMatrix apply(const LevelMatrix& sigma) const
    {
        return unvectorize<Real>(matrix * vectorize<Real>(sigma));
    }
};

// Superoperator building blocks (column-major vectorization).

/// vec(-i[H, rho])
template <typename Scalar>
SuperMatrixT<Scalar> commutator_superop(const LevelMatrixT<Scalar>& hamiltonian)
{
    using C = std::complex<Scalar>;
    const LevelMatrixT<Scalar> id = LevelMatrixT<Scalar>::Identity();
    SuperMatrixT<Scalar> out = Eigen::kroneckerProduct(id, hamiltonian).eval();
    out -= Eigen::kroneckerProduct(hamiltonian.transpose(), id).eval();
    return C(0, -1) * out;
}

/// vec(rate * (L rho L^+ - {L^+ L, rho}/2)) for the jump |lower><upper|.
template <typename Scalar>
SuperMatrixT<Scalar> decay_superop(int upper, int lower, Scalar rate)
{
    LevelMatrixT<Scalar> jump = LevelMatrixT<Scalar>::Zero();
    jump(lower - 1, upper - 1) = 1;
    const LevelMatrixT<Scalar> id = LevelMatrixT<Scalar>::Identity();
    const LevelMatrixT<Scalar> n = jump.adjoint() * jump;
    SuperMatrixT<Scalar> out = Eigen::kroneckerProduct(jump.conjugate(), jump).eval();
    out -= Scalar(0.5) * Eigen::kroneckerProduct(id, n).eval();
    out -= Scalar(0.5) * Eigen::kroneckerProduct(n.transpose(), id).eval();
    return rate * out;
}

/// Rotating-frame Hamiltonian (hbar = 1, units of Gamma). Diagonal entries
/// are minus the drive detunings; cavity couplings are -w_j x on (j, 1) and
/// the control coupling is -Omega_c on (3, 4).
LevelMatrix rotating_frame_hamiltonian(const SystemConfig& config, Real x);

/// Throws ConfigError on invalid config or negative x.
Generator build_generator(const SystemConfig& config, Real x);

/// Per row of the literal equation table, |literal rhs - Lindblad rhs| at sigma.
struct EquationResidual {
    int equation; // row label of the literal table
    int m;        // the equation governs d sigma_mn / dt
    int n;
    Real residual;
};

std::vector<EquationResidual> printed_equation_residuals(const SystemConfig& config,
                                                         Real x,
                                                         const LevelMatrix& sigma);

/// Sum of the population rows of A vec(sigma), i.e. d(trace)/dt.
inline Complex trace_rate(const Generator& gen, const LevelMatrix& sigma)
{
    return gen.apply(sigma).trace();
}

} // namespace cqed
