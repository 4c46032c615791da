#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

#include "cqed/steady.hpp"

namespace cqed {

/// One steady operating point. x is the output-field Rabi amplitude, y the
/// input-field amplitude that sustains it.
struct IOPoint {
    Real x = 0.0;
    Real intensity_out = 0.0; // I_T = x^2
    Complex y;
    Real intensity_in = 0.0; // I_in = |y|^2
    DensityMatrix state;
    Real residual = 0.0;
};

struct IOCurve {
    SystemConfig config;
    std::vector<IOPoint> points; // strictly increasing x
};

inline constexpr Real kCurveResidualLimit = 1e-9;
inline constexpr Real kLinearRegimeLimit = 1e-3;

/// Mean-field input-output relation
///   y = 2x - i C sum_j w_j^2 sigma_j1  (+ i theta x in physical mode),
/// theta = 2 (delta_c - delta_p) / kappa.
///
/// The polarization enters through sigma_j1 = <j|rho|1>. With the printed
/// index order (sigma_1j) the weak-field response has |y| < 2x, i.e. gain;
/// the transposed order is the one that makes the medium absorptive.
Complex output_to_input(Real x, const DensityMatrix& state, const SystemConfig& config);

/// Solve the atoms at field x and map to the input field.
IOPoint solve_point(const SystemConfig& config, Real x);

/// One steady solve per grid point. Throws SolverError (with the offending x)
/// if any point fails or its residual exceeds kCurveResidualLimit. The result
/// does not depend on `threads`.
IOCurve sweep(const SystemConfig& config, std::span<const Real> x_grid, int threads = 1);

/// n uniform points on [0, x_max].
std::vector<Real> uniform_grid(Real x_max, int n);

inline constexpr int kDefaultGridPoints = 4001;

inline constexpr Real kSaturationRatio = 0.02;

/// Doubles x_max starting from x_start until the atomic contribution to y at
/// x_max is below kSaturationRatio of the empty-cavity term 2x and I_in(x) is
/// strictly increasing on the last decade [x_max/10, x_max] of an n-point
/// uniform grid.
Real auto_x_max(const SystemConfig& config, Real x_start, int n = kDefaultGridPoints,
                int threads = 1);

struct SpectrumPoint {
    Real delta_p;
    Real transmission; // I_T / I_in
};

/// Linear-regime transmission |x/y|^2 over a probe-detuning grid. With
/// tie_control the control detuning follows delta_p (two-photon resonance).
/// Throws ConfigError if x_probe exceeds kLinearRegimeLimit.
std::vector<SpectrumPoint> weak_probe_spectrum(const SystemConfig& config, Real x_probe,
                                               std::span<const Real> delta_p_grid,
                                               bool tie_control = false, int threads = 1);

struct SpectrumExtremum {
    Real delta_p;
    Real transmission;
    bool maximum;
};

/// Strict interior local extrema of a sampled spectrum.
std::vector<SpectrumExtremum> local_extrema(std::span<const SpectrumPoint> spectrum);

// Curve tables: x, I_T, re_y, im_y, I_in, sigma11..sigma44, residual.
void write_table(std::ostream& out, const IOCurve& curve, char delimiter = ',');
nlohmann::json to_json(const IOCurve& curve);
void write_spectrum(std::ostream& out, std::span<const SpectrumPoint> spectrum,
                    char delimiter = ',');

/// Shortest round-trip decimal form; identical output on every run.
std::string format_real(Real value);

} // namespace cqed
