#include "cqed/steady.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cqed {

Real DensityMatrix::min_eigenvalue() const
{
    const LevelMatrix h = (sigma + sigma.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<LevelMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

bool is_physical(const DensityMatrix& d, const StateTolerances& tol)
{
    return d.hermiticity_defect() <= tol.hermiticity && d.trace_defect() <= tol.trace &&
           d.min_eigenvalue() >= -tol.positivity;
}

SteadyState solve_steady(const Generator& gen, int closure_level)
{
    if (closure_level < 1 || closure_level > kLevels)
        throw Error("closure level must be in 1..4");
    const int closure_row = state_index(closure_level, closure_level);

    SuperMatrix system = gen.matrix;
    StateVector rhs = StateVector::Zero();
    system.row(closure_row).setZero();
    for (int j = 1; j <= kLevels; ++j) system(closure_row, state_index(j, j)) = 1.0;
    rhs(closure_row) = 1.0;

    Eigen::PartialPivLU<SuperMatrix> lu(system);
    // rcond() is only an estimate and can miss exact rank deficiency, so
    // check the pivots and take the 1-norm condition number outright.
    const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
    Real condition = INFINITY;
    if (pivots.minCoeff() > std::numeric_limits<Real>::epsilon() * pivots.maxCoeff()) {
        const auto norm1 = [](const SuperMatrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); };
        condition = norm1(system) * norm1(lu.inverse());
    }
    if (!std::isfinite(condition) || condition > kConditionLimit)
        throw SolverError("steady-state system is singular or ill-conditioned", gen.field_rabi,
                          condition, INFINITY);

    const StateVector v = lu.solve(rhs);
    StateVector rate = gen.matrix * v;
    rate(closure_row) = 0.0;

    SteadyState out;
    out.state.sigma = unvectorize<Real>(v);
    out.residual = rate.cwiseAbs().maxCoeff();
    out.condition = condition;
    out.from_printed_generator = gen.config.generator_mode == GeneratorMode::as_printed;
    if (!v.allFinite())
        throw SolverError("steady-state solve produced non-finite values", gen.field_rabi,
                          condition, out.residual);
    return out;
}

namespace {

// Dormand-Prince 5(4) tableau.
struct Dopri5 {
    static constexpr Real c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr Real a21 = 1.0 / 5;
    static constexpr Real a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr Real a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr Real a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
    static constexpr Real a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr Real b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b - b* (fifth minus embedded fourth order weights)
    static constexpr Real e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

} // namespace

RelaxResult relax_to_steady(const SystemConfig& config, Real x, const RelaxOptions& opts)
{
    if (config.generator_mode != GeneratorMode::corrected_lindblad)
        throw ConfigError("relaxation oracle requires the corrected_lindblad generator");
    const Generator gen = build_generator(config, x);
    const SuperMatrix& a = gen.matrix;
    using D = Dopri5;

    StateVector y = vectorize<Real>(DensityMatrix::ground().sigma);
    StateVector k1 = a * y;
    Real t = 0.0;
    Real h = opts.initial_step;
    RelaxResult out;
    // Near the fixed point the error estimate vanishes and the controller
    // would drive h to the stability boundary; keep h*|A| inside it.
    const Real h_max = 2.0 / a.cwiseAbs().colwise().sum().maxCoeff();
    h = std::min(h, h_max);

    auto rate_of = [](const StateVector& dy) { return dy.cwiseAbs().maxCoeff(); };

    while (true) {
        out.rate = rate_of(k1);
        if (out.rate < opts.tol) {
            out.converged = true;
            break;
        }
        if (t >= opts.t_max) break;
        h = std::min(h, opts.t_max - t);

        const StateVector k2 = a * (y + h * D::a21 * k1);
        const StateVector k3 = a * (y + h * (D::a31 * k1 + D::a32 * k2));
        const StateVector k4 = a * (y + h * (D::a41 * k1 + D::a42 * k2 + D::a43 * k3));
        const StateVector k5 =
            a * (y + h * (D::a51 * k1 + D::a52 * k2 + D::a53 * k3 + D::a54 * k4));
        const StateVector k6 = a * (y + h * (D::a61 * k1 + D::a62 * k2 + D::a63 * k3 +
                                             D::a64 * k4 + D::a65 * k5));
        const StateVector y_new =
            y + h * (D::b1 * k1 + D::b3 * k3 + D::b4 * k4 + D::b5 * k5 + D::b6 * k6);
        const StateVector k7 = a * y_new;
        const StateVector err = h * (D::e1 * k1 + D::e3 * k3 + D::e4 * k4 + D::e5 * k5 +
                                     D::e6 * k6 + D::e7 * k7);
        const Real err_norm = err.cwiseAbs().maxCoeff() / opts.abs_tol;

        if (err_norm <= 1.0) {
            t += h;
            y = y_new;
            k1 = k7;
            ++out.steps;
        }
        const Real factor =
            err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
        h = std::min(h * std::clamp(factor, 0.2, 5.0), h_max);
    }

    out.state.sigma = unvectorize<Real>(y);
    out.time = t;
    if (!out.converged)
        throw SolverError("relaxation did not converge before t_max", x, NAN, out.rate);
    return out;
}

std::pair<Real, Complex> two_level_steady(Real omega, Real delta, Real gamma)
{
    if (!(gamma > 0.0)) throw ConfigError("two-level oracle requires gamma > 0");
    const Real excited =
        4.0 * omega * omega / (gamma * gamma + 4.0 * delta * delta + 8.0 * omega * omega);
    // d sigma_eg/dt = -(gamma/2 - i delta) sigma_eg + i omega (sigma_gg - sigma_ee)
    const Complex coherence =
        Complex(0.0, omega) * (1.0 - 2.0 * excited) / Complex(gamma / 2.0, -delta);
    return {excited, coherence};
}

} // namespace cqed
