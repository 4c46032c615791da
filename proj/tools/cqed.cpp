// Command-line front end: sweep, spectrum, analyze, preset.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cqed/scenarios.hpp"

namespace {

using namespace cqed;

enum Exit { ok = 0, usage = 1, solver = 2, io = 3 };

struct Common {
    std::string scheme = "A";
    std::string config_path;
    std::string out;
    int grid = kDefaultGridPoints;
    double x_max = 0.0;
    std::string io_mode;
    double kappa = 0.0;
    int threads = 1;
    std::string format = "table";
};

void add_common(CLI::App* cmd, Common& c)
{
    cmd->add_option("--scheme", c.scheme, "Level scheme A or B")->check(CLI::IsMember({"A", "B"}));
    cmd->add_option("--config", c.config_path, "JSON configuration file")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", c.out, "Output file or directory (default: stdout)");
    cmd->add_option("--grid", c.grid, "Grid points")->check(CLI::Range(3, 10000000));
    cmd->add_option("--x-max", c.x_max, "Largest output amplitude x (default: automatic)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--io-mode", c.io_mode, "as_printed or physical")
        ->check(CLI::IsMember({"as_printed", "physical"}));
    cmd->add_option("--kappa", c.kappa, "Cavity decay rate for physical mode")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--threads", c.threads, "Worker threads")->check(CLI::Range(1, 1024));
    cmd->add_option("--format", c.format, "table or json")->check(CLI::IsMember({"table", "json"}));
}

SystemConfig make_config(const Common& c)
{
    SystemConfig cfg;
    if (!c.config_path.empty()) {
        cfg = load_config(c.config_path);
    } else {
        cfg.scheme.id = parse_scheme(c.scheme);
    }
    if (!c.io_mode.empty()) cfg.io_mode = parse_io_mode(c.io_mode);
    if (c.kappa > 0.0) cfg.kappa = c.kappa;
    require_valid(cfg);
    return cfg;
}

void emit(const Common& c, const std::string& text)
{
    if (c.out.empty()) {
        std::cout << text;
        if (!std::cout) throw IoError("write to stdout failed");
        return;
    }
    write_file_atomic(c.out, text);
}

IOCurve compute_curve(const Common& c, const SystemConfig& cfg)
{
    const Real x_max = c.x_max > 0.0 ? c.x_max : auto_x_max(cfg, 8.0, c.grid, c.threads);
    return sweep(cfg, uniform_grid(x_max, c.grid), c.threads);
}

int cmd_sweep(const Common& c)
{
    const IOCurve curve = compute_curve(c, make_config(c));
    if (c.format == "json") {
        emit(c, to_json(curve).dump(1) + "\n");
    } else {
        std::ostringstream os;
        write_table(os, curve);
        emit(c, os.str());
    }
    return ok;
}

struct SpectrumArgs {
    double lo = -20.0;
    double hi = 20.0;
    double x_probe = 1e-4;
    bool tie = false;
};

int cmd_spectrum(const Common& c, const SpectrumArgs& a)
{
    if (!(a.hi > a.lo)) throw ConfigError("--dp-max must exceed --dp-min");
    std::vector<Real> grid(c.grid);
    for (int i = 0; i < c.grid; ++i) grid[i] = a.lo + (a.hi - a.lo) * i / (c.grid - 1);
    const auto s = weak_probe_spectrum(make_config(c), a.x_probe, grid, a.tie, c.threads);
    if (c.format == "json") {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& p : s) pts.push_back({{"delta_p", p.delta_p}, {"transmission", p.transmission}});
        emit(c, pts.dump(1) + "\n");
    } else {
        std::ostringstream os;
        write_spectrum(os, s);
        emit(c, os.str());
    }
    return ok;
}

// Reads x and I_in back from a curve table written by `sweep`.
SampledCurve read_table(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(f, line)) throw IoError("empty table " + path);
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        for (std::string col; std::getline(ss, col, ',');) header.push_back(col);
    }
    auto column = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw ConfigError(path + ": missing column " + name);
    };
    const std::size_t cx = column("x"), cin = column("I_in");
    SampledCurve curve;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        if (cells.size() != header.size()) throw ConfigError(path + ": ragged row");
        const Real x = std::stod(cells[cx]);
        curve.x.push_back(x);
        curve.intensity_out.push_back(x * x);
        curve.intensity_in.push_back(std::stod(cells[cin]));
    }
    return curve;
}

int cmd_analyze(const Common& c, const std::string& input, int trace_points)
{
    const SampledCurve curve = input.empty() ? sampled(compute_curve(c, make_config(c)))
                                             : read_table(input);
    emit(c, to_json(analyze(curve, trace_points)).dump(1) + "\n");
    return ok;
}

int cmd_preset(const Common& c, const std::string& name, bool list)
{
    if (list) {
        for (const auto& n : preset_names()) std::cout << n << '\n';
        return ok;
    }
    if (name.empty()) throw ConfigError("--preset is required");
    Scenario s = preset(name);
    if (!c.io_mode.empty()) s = with_io_mode(std::move(s), parse_io_mode(c.io_mode));
    if (c.kappa > 0.0) {
        for (auto& p : s.points) p.config.kappa = c.kappa;
        for (auto& p : s.references) p.config.kappa = c.kappa;
    }
    s.grid.points = c.grid;
    if (c.x_max > 0.0) s.grid.x_max = c.x_max;
    RunOptions o;
    o.threads = c.threads;
    o.format = c.format == "json" ? TableFormat::json : TableFormat::table;
    o.trace_points = 201;
    const RunResult r = run(s, std::filesystem::path(c.out.empty() ? name : c.out), o);
    for (const auto& cur : r.curves) {
        std::cout << cur.label << ": ";
        if (!cur.error.empty())
            std::cout << "solver failure: " << cur.error << '\n';
        else
            std::cout << cur.report->region_count() << " region(s), " << cur.report->loops.size()
                      << " loop(s)\n";
    }
    for (const auto& t : r.trends)
        std::cout << (t.result.pass ? "trend holds: " : "trend fails: ") << t.trend.claim << " ["
                  << to_string(t.trend.spec) << "]\n";
    return r.all_solved() ? ok : solver;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multilevel-atom cavity QED optical multistability"};
    app.require_subcommand(1);
    app.set_version_flag("--version", cqed::kToolVersion);

    Common common;
    auto* sweep = app.add_subcommand("sweep", "Input-output curve over a uniform x grid");
    add_common(sweep, common);

    SpectrumArgs spec;
    auto* spectrum = app.add_subcommand("spectrum", "Weak-probe transmission spectrum");
    add_common(spectrum, common);
    spectrum->add_option("--dp-min", spec.lo, "Lowest probe detuning");
    spectrum->add_option("--dp-max", spec.hi, "Highest probe detuning");
    spectrum->add_option("--x-probe", spec.x_probe, "Probe amplitude (linear regime)");
    spectrum->add_flag("--tie-control", spec.tie, "Control detuning follows the probe detuning");

    std::string input;
    int trace_points = 201;
    auto* analyze = app.add_subcommand("analyze", "Turning points, regions and hysteresis");
    add_common(analyze, common);
    analyze->add_option("--input", input, "Curve table from `sweep` (else solve from config)")
        ->check(CLI::ExistingFile);
    analyze->add_option("--trace-points", trace_points, "Samples per hysteresis sweep");

    std::string preset_name;
    bool list = false;
    auto* preset = app.add_subcommand("preset", "Run a figure preset into --out");
    add_common(preset, common);
    preset->add_option("--preset", preset_name, "Preset name");
    preset->add_flag("--list", list, "List preset names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*sweep) return cmd_sweep(common);
        if (*spectrum) return cmd_spectrum(common, spec);
        if (*analyze) return cmd_analyze(common, input, trace_points);
        if (*preset) return cmd_preset(common, preset_name, list);
    } catch (const cqed::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return solver;
    } catch (const cqed::IoError& e) {
        std::cerr << "i/o failure: " << e.what() << '\n';
        return io;
    } catch (const cqed::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    }
    return usage;
}
