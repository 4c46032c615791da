#include "cqed/iocurve.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "cqed/parallel.hpp"

namespace cqed {

Complex output_to_input(Real x, const DensityMatrix& state, const SystemConfig& config)
{
    Complex polarization = 0.0;
    for (int level : config.cavity_levels()) {
        const Real w = config.weight(level);
        polarization += w * w * state(level, 1);
    }
    Complex y = 2.0 * x - Complex(0.0, config.cooperativity) * polarization;
    if (config.io_mode == IoMode::physical) {
        const Real theta = 2.0 * (config.delta_c - config.delta_p) / config.kappa;
        y += Complex(0.0, theta * x);
    }
    return y;
}

IOPoint solve_point(const SystemConfig& config, Real x)
{
    const SteadyState ss = solve_steady(build_generator(config, x));
    IOPoint p;
    p.x = x;
    p.intensity_out = x * x;
    p.y = output_to_input(x, ss.state, config);
    p.intensity_in = std::norm(p.y);
    p.state = ss.state;
    p.residual = ss.residual;
    return p;
}

IOCurve sweep(const SystemConfig& config, std::span<const Real> x_grid, int threads)
{
    require_valid(config);
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        if (!(x_grid[i] >= 0.0)) throw ConfigError("sweep grid must be non-negative");
        if (i > 0 && !(x_grid[i] > x_grid[i - 1]))
            throw ConfigError("sweep grid must be strictly increasing");
    }

    IOCurve curve;
    curve.config = config;
    curve.points.resize(x_grid.size());
    parallel_for(x_grid.size(), threads, [&](std::size_t i) {
        const Real x = x_grid[i];
        try {
            curve.points[i] = solve_point(config, x);
        } catch (const SolverError& e) {
            throw SolverError(std::string(e.what()) + " at x=" + format_real(x), x,
                              e.condition(), e.residual());
        }
        if (curve.points[i].residual > kCurveResidualLimit)
            throw SolverError("steady-state residual above limit at x=" + format_real(x), x,
                              NAN, curve.points[i].residual);
    });
    return curve;
}

std::vector<Real> uniform_grid(Real x_max, int n)
{
    if (n < 2 || !(x_max > 0.0)) throw ConfigError("grid needs n >= 2 and x_max > 0");
    std::vector<Real> grid(n);
    for (int i = 0; i < n; ++i) grid[i] = x_max * static_cast<Real>(i) / (n - 1);
    return grid;
}

Real auto_x_max(const SystemConfig& config, Real x_start, int n, int threads)
{
    Real x_max = x_start;
    for (int attempt = 0; attempt < 40; ++attempt, x_max *= 2.0) {
        // A monotone tail alone can sit between two folds; the atoms must also
        // be saturated so no nonlinearity is left beyond x_max.
        const IOPoint end = solve_point(config, x_max);
        Complex empty = 2.0 * x_max;
        if (config.io_mode == IoMode::physical)
            empty += Complex(0.0, 2.0 * (config.delta_c - config.delta_p) / config.kappa * x_max);
        if (std::abs(end.y - empty) > kSaturationRatio * 2.0 * x_max) continue;

        const auto grid = uniform_grid(x_max, n);
        std::vector<Real> tail;
        for (Real x : grid)
            if (x >= x_max / 10.0) tail.push_back(x);
        const IOCurve c = sweep(config, tail, threads);
        bool monotone = true;
        for (std::size_t i = 1; i < c.points.size() && monotone; ++i)
            monotone = c.points[i].intensity_in > c.points[i - 1].intensity_in;
        if (monotone) return x_max;
    }
    throw SolverError("could not bracket the highest fold", x_max, NAN, NAN);
}

std::vector<SpectrumPoint> weak_probe_spectrum(const SystemConfig& config, Real x_probe,
                                               std::span<const Real> delta_p_grid,
                                               bool tie_control, int threads)
{
    if (!(x_probe > 0.0) || x_probe > kLinearRegimeLimit)
        throw ConfigError("probe amplitude must be in (0, 1e-3] for a linear spectrum");
    std::vector<SpectrumPoint> out(delta_p_grid.size());
    parallel_for(delta_p_grid.size(), threads, [&](std::size_t i) {
        SystemConfig c = config;
        c.delta_p = delta_p_grid[i];
        if (tie_control) c.delta_control = c.delta_p;
        const IOPoint p = solve_point(c, x_probe);
        out[i] = {c.delta_p, p.intensity_out / p.intensity_in};
    });
    return out;
}

std::vector<SpectrumExtremum> local_extrema(std::span<const SpectrumPoint> s)
{
    std::vector<SpectrumExtremum> out;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        const Real a = s[i - 1].transmission, b = s[i].transmission, c = s[i + 1].transmission;
        if ((b > a && b > c) || (b < a && b < c)) out.push_back({s[i].delta_p, b, b > a});
    }
    return out;
}

std::string format_real(Real value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

void write_table(std::ostream& out, const IOCurve& curve, char d)
{
    out << "x" << d << "I_T" << d << "re_y" << d << "im_y" << d << "I_in";
    for (int j = 1; j <= kLevels; ++j) out << d << "sigma" << j << j;
    out << d << "residual\n";
    for (const auto& p : curve.points) {
        out << format_real(p.x) << d << format_real(p.intensity_out) << d
            << format_real(p.y.real()) << d << format_real(p.y.imag()) << d
            << format_real(p.intensity_in);
        for (int j = 1; j <= kLevels; ++j) out << d << format_real(p.state.population(j));
        out << d << format_real(p.residual) << '\n';
    }
}

nlohmann::json to_json(const IOCurve& curve)
{
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : curve.points) {
        nlohmann::json pops = nlohmann::json::array();
        for (int j = 1; j <= kLevels; ++j) pops.push_back(p.state.population(j));
        pts.push_back({{"x", p.x},
                       {"I_T", p.intensity_out},
                       {"re_y", p.y.real()},
                       {"im_y", p.y.imag()},
                       {"I_in", p.intensity_in},
                       {"populations", pops},
                       {"residual", p.residual}});
    }
    return {{"config", to_json(curve.config)}, {"points", pts}};
}

void write_spectrum(std::ostream& out, std::span<const SpectrumPoint> spectrum, char d)
{
    out << "delta_p" << d << "transmission\n";
    for (const auto& s : spectrum)
        out << format_real(s.delta_p) << d << format_real(s.transmission) << '\n';
}

} // namespace cqed
