#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqed/analysis.hpp"
#include "cqed/iocurve.hpp"

namespace cqed {

/// One curve of a scenario: a labelled configuration and its position on
/// the swept axis.
struct AxisPoint {
    std::string label;
    Real value;
    SystemConfig config;
};

struct GridSpec {
    int points = kDefaultGridPoints;
    std::optional<Real> x_max; // unset: auto-extend from x_start
    Real x_start = 8.0;
};

struct SpectrumSpec {
    Real x_probe = 1e-4;
    Real delta_p_lo = -20.0;
    Real delta_p_hi = 20.0;
    int points = 4001;
    bool tie_control = true;
};

/// An expected trend on the swept axis plus the sentence it encodes.
struct ExpectedTrend {
    std::string claim;
    TrendSpec spec;
};

struct Scenario {
    std::string name;
    std::string axis_name;
    std::vector<AxisPoint> points;     // ordered along the axis
    std::vector<AxisPoint> references; // comparison curves, no trends
    GridSpec grid;
    std::vector<ExpectedTrend> trends;
    std::optional<int> expected_regions;           // for every axis point
    std::optional<int> expected_reference_regions; // for every reference
    std::optional<SpectrumSpec> spectrum;
};

std::vector<std::string> preset_names();

/// Throws ConfigError for an unknown name.
Scenario preset(const std::string& name);

/// Same scenario with every configuration switched to `mode`.
Scenario with_io_mode(Scenario s, IoMode mode);

struct CurveOutcome {
    std::string label;
    bool reference = false;
    std::optional<IOCurve> curve;
    std::optional<BistabilityReport> report;
    std::optional<std::vector<SpectrumPoint>> spectrum;
    Real x_max = 0.0;
    std::string error; // solver failure, empty on success
};

struct FileEntry {
    std::string path; // relative to the output directory
    std::string sha256;
};

struct TrendOutcome {
    ExpectedTrend trend;
    TrendResult result;
};

struct RunResult {
    Scenario scenario;
    std::vector<CurveOutcome> curves;
    std::vector<TrendOutcome> trends;
    std::vector<FileEntry> files;
    double wall_seconds = 0.0;

    bool all_solved() const;
};

enum class TableFormat { table, json };

struct RunOptions {
    int threads = 1;
    TableFormat format = TableFormat::table;
    int trace_points = 0;
};

/// Computes every curve, report, spectrum and trend in memory.
RunResult evaluate(const Scenario& scenario, const RunOptions& options = {});

/// evaluate() plus output files and manifest.json in `dir` (created if
/// missing). Files are written to a temporary name and renamed into place.
/// Solver failures are recorded, not thrown; IoError on write failures.
RunResult run(const Scenario& scenario, const std::filesystem::path& dir,
              const RunOptions& options = {});

/// Atomic text write; returns the hex SHA-256 of the content.
std::string write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string sha256_hex(const std::string& data);

nlohmann::json manifest_json(const RunResult& result);

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace cqed
