#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqed/iocurve.hpp"

namespace cqed {

/// Input-output samples over the output-field axis, independent of where
/// they came from. `evaluate`, when set, recomputes I_in at any x and is used
/// to refine fold and landing coordinates beyond grid resolution.
struct SampledCurve {
    std::vector<Real> x;
    std::vector<Real> intensity_out;
    std::vector<Real> intensity_in;
    std::function<Real(Real)> evaluate;

    std::size_t size() const { return x.size(); }
};

/// Solver-backed curve; refinement re-solves the steady state.
SampledCurve sampled(const IOCurve& curve);

/// Curve from an arbitrary I_in(x) (I_T = x^2), e.g. injected test oracles.
SampledCurve sample_function(std::function<Real(Real)> intensity_in_of_x,
                             std::span<const Real> x_grid);

/// fold_up: I_in stops rising (local maximum, the up-switching threshold).
/// fold_down: I_in stops falling (local minimum, the down-switching threshold).
enum class FoldKind { fold_up, fold_down };

struct TurningPoint {
    Real x;
    Real intensity_out;
    Real intensity_in;
    FoldKind kind;
};

/// Adjacent fold_up / fold_down pair: one S-shaped hysteresis loop.
struct HysteresisLoop {
    TurningPoint up;
    TurningPoint down;

    Real lower_threshold() const { return down.intensity_in; }
    Real upper_threshold() const { return up.intensity_in; }
};

/// Merged interval of input intensities with more than one stable output.
struct BistableRegion {
    Real lower_threshold;
    Real upper_threshold;
    int multiplicity; // number of steady outputs inside the region
    std::vector<std::size_t> loops;
};

enum class SweepDirection { up, down };

struct HysteresisJump {
    Real intensity_in;
    Real from_intensity_out;
    Real to_intensity_out;
};

struct HysteresisTrace {
    SweepDirection direction;
    std::vector<std::pair<Real, Real>> points; // (I_in, I_T), jumps included
    std::vector<HysteresisJump> jumps;
};

struct BistabilityReport {
    std::vector<TurningPoint> turning_points;
    std::vector<HysteresisLoop> loops; // ordered along the output axis
    std::vector<BistableRegion> regions; // ordered by input intensity
    std::optional<HysteresisTrace> up_trace;
    std::optional<HysteresisTrace> down_trace;

    std::size_t region_count() const { return regions.size(); }
    /// Outermost thresholds: lowest fold_down and highest fold_up input.
    std::optional<Real> outer_lower_threshold() const;
    std::optional<Real> outer_upper_threshold() const;
};

inline constexpr Real kFoldMergeTolerance = 1e-9;
inline constexpr Real kFoldRefineTolerance = 1e-6;

std::vector<TurningPoint> turning_points(const SampledCurve& curve);

std::vector<HysteresisLoop> hysteresis_loops(std::span<const TurningPoint> folds);

std::vector<BistableRegion> bistable_regions(std::span<const HysteresisLoop> loops);

/// Number of grid-level crossings of I_in = query; samples equal to the
/// query count as above it.
int multiplicity(const SampledCurve& curve, Real intensity_in_query);

/// Quasi-static branch following along a monotone I_in path. Branches with
/// dI_in/dI_T > 0 are treated as stable (slope criterion). At the end of a
/// branch the state jumps at constant I_in to the nearest stable branch in
/// the sweep direction.
HysteresisTrace hysteresis(const SampledCurve& curve, SweepDirection direction,
                           std::span<const Real> intensity_in_path);

/// Full report; traces sweep the curve's own I_in range with `trace_points`
/// samples when trace_points > 1.
BistabilityReport analyze(const SampledCurve& curve, int trace_points = 0);

// Ordinal comparison of one report quantity along a parameter axis.

enum class TrendQuantity {
    outer_lower_threshold,
    outer_upper_threshold,
    region_count,
    loop_count,
    loop_lower_threshold, // needs loop index
    loop_upper_threshold, // needs loop index
};

enum class TrendOrder { increasing, decreasing, constant };

struct TrendSpec {
    TrendQuantity quantity;
    TrendOrder order;
    bool strict = true;
    std::size_t loop = 0;
    bool from_top = false; // count `loop` down from the highest-output loop
};

struct TrendResult {
    bool pass = false;
    bool comparable = true;
    std::vector<Real> sequence;
    std::string diagnostic;
};

TrendResult trend_compare(std::span<const BistabilityReport> reports, const TrendSpec& spec);

std::string to_string(const TrendSpec& spec);

nlohmann::json to_json(const BistabilityReport& report);
nlohmann::json to_json(const TrendResult& result);

} // namespace cqed
