#pragma once

#include <random>

#include "cqed/model.hpp"
#include "cqed/types.hpp"

namespace cqed::test {

inline LevelMatrix random_hermitian(std::mt19937_64& rng)
{
    std::normal_distribution<Real> n;
    LevelMatrix m;
    for (int i = 0; i < kLevels; ++i)
        for (int j = 0; j < kLevels; ++j) m(i, j) = Complex(n(rng), n(rng));
    return (m + m.adjoint()) / 2.0;
}

/// Random density matrix: normalized A A^+.
inline LevelMatrix random_state(std::mt19937_64& rng)
{
    const LevelMatrix a = random_hermitian(rng) + Complex(0, 1) * random_hermitian(rng);
    LevelMatrix rho = a * a.adjoint();
    return rho / rho.trace();
}

/// Draw over the ranges C in [0,400], separations in [0,15], delta_p in
/// [-15,15], omega_c in [0,0.2]; scheme A or B with equal probability.
inline SystemConfig random_config(std::mt19937_64& rng)
{
    std::uniform_real_distribution<Real> u(0.0, 1.0);
    SystemConfig c;
    c.scheme.id = u(rng) < 0.5 ? SchemeId::A : SchemeId::B;
    c.cooperativity = 400.0 * u(rng);
    c.scheme.delta_23 = 15.0 * u(rng);
    c.delta_p = -15.0 + 30.0 * u(rng);
    c.delta_c = -15.0 + 30.0 * u(rng);
    if (c.scheme.id == SchemeId::A) {
        c.omega_c = 0.2 * u(rng);
        c.delta_control = -15.0 + 30.0 * u(rng);
    } else {
        c.scheme.delta_34 = 15.0 * u(rng);
    }
    return c;
}

/// Scheme A with the 1->3 transition switched off: a driven two-level atom
/// on 1->2 at detuning delta (delta_23 = 0, delta_p = delta).
inline SystemConfig two_level(Real delta, Real cooperativity = 0.0)
{
    SystemConfig c;
    c.scheme.id = SchemeId::A;
    c.delta_p = delta;
    c.cooperativity = cooperativity;
    c.dipole_weights = {1.0, 0.0, 1.0};
    return c;
}

} // namespace cqed::test
