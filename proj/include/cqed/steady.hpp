#pragma once

#include <utility>

#include "cqed/bloch.hpp"

namespace cqed {

/// Atomic state sigma_mn = <m|rho|n>, levels numbered 1..4.
struct DensityMatrix {
    LevelMatrix sigma = LevelMatrix::Zero();

    static DensityMatrix ground()
    {
        DensityMatrix d;
        d.sigma(0, 0) = 1.0;
        return d;
    }

    Complex operator()(int m, int n) const { return sigma(m - 1, n - 1); }
    Real population(int level) const { return sigma(level - 1, level - 1).real(); }

    Real hermiticity_defect() const { return cqed::hermiticity_defect(sigma); }
    Real trace_defect() const { return std::abs(sigma.trace() - Complex(1.0)); }
    /// Smallest eigenvalue of the Hermitian part.
    Real min_eigenvalue() const;
};

struct StateTolerances {
    Real hermiticity = 1e-10;
    Real trace = 1e-10;
    Real positivity = 1e-8;
};

bool is_physical(const DensityMatrix& d, const StateTolerances& tol = {});

class SolverError : public Error {
public:
    SolverError(const std::string& what, Real field_rabi, Real condition, Real residual)
        : Error(what), field_rabi_(field_rabi), condition_(condition), residual_(residual)
    {
    }

    Real field_rabi() const { return field_rabi_; }
    Real condition() const { return condition_; }
    Real residual() const { return residual_; }

private:
    Real field_rabi_;
    Real condition_;
    Real residual_;
};

struct SteadyState {
    DensityMatrix state;
    Real residual = 0.0;  // max-norm of A vec(sigma) over the kept rows
    Real condition = 1.0; // condition estimate of the closed system
    bool from_printed_generator = false;
};

inline constexpr Real kConditionLimit = 1e12;

/// Steady state with the population row of `closure_level` replaced by the
/// trace condition. Throws SolverError when the closed system is singular or
/// its condition estimate exceeds kConditionLimit.
SteadyState solve_steady(const Generator& gen, int closure_level = 1);

struct RelaxOptions {
    Real t_max = 500.0;
    Real tol = 1e-9;          // stop when max |d sigma/dt| < tol
    Real abs_tol = 1e-10;     // per-step error control
    Real initial_step = 1e-3;
};

struct RelaxResult {
    DensityMatrix state;
    Real time = 0.0;
    Real rate = 0.0; // final max |d sigma/dt|
    bool converged = false;
    long steps = 0;
};

/// Integrates from the ground state with an explicit Dormand-Prince 5(4)
/// scheme until the state stops moving. Requires the Lindblad generator;
/// throws SolverError if t_max is reached first.
RelaxResult relax_to_steady(const SystemConfig& config, Real x, const RelaxOptions& opts = {});

/// Closed-form two-level steady state for H = -Delta|e><e| - Omega(|e><g| + h.c.)
/// and decay gamma: (sigma_ee, sigma_eg). Requires gamma > 0.
std::pair<Real, Complex> two_level_steady(Real omega, Real delta, Real gamma);

} // namespace cqed
