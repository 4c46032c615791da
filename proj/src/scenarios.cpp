#include "cqed/scenarios.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

namespace cqed {

namespace {

// Level assignments on the 85Rb D2 line (documentation only):
//   scheme A: |1> = 5S1/2 F=2, |2> = 5P3/2 F=1, |3> = 5P3/2 F=2,
//             |4> = 5S1/2 F=3 (control couples |4> <-> |3>).
//   scheme B: |1> = 5S1/2 F=2, |2>, |3>, |4> = 5P3/2 F=1, 2, 3.

constexpr Real kCooperativity = 90.0;

// |4> in scheme A is the other ground hyperfine level; its coherence with
// |1> decays on the ground-state decoherence scale, not at Gamma.
constexpr Real kGroundDecoherence = 1e-3;

SystemConfig scheme_a(Real delta_23)
{
    SystemConfig c;
    c.scheme.id = SchemeId::A;
    c.scheme.delta_23 = delta_23;
    c.cooperativity = kCooperativity;
    c.delta_c = -delta_23 / 2.0;
    return c;
}

SystemConfig scheme_b(Real delta_23, Real delta_34, Real delta_p)
{
    SystemConfig c;
    c.scheme.id = SchemeId::B;
    c.scheme.delta_23 = delta_23;
    c.scheme.delta_34 = delta_34;
    c.cooperativity = kCooperativity;
    c.delta_p = delta_p;
    c.delta_c = 0.0;
    return c;
}

std::string label_of(const std::string& key, Real v) { return key + "_" + format_real(v); }

std::vector<ExpectedTrend> loop_trends(const std::string& claim, std::size_t loop, bool from_top,
                                       TrendOrder order)
{
    std::vector<ExpectedTrend> t;
    for (auto q : {TrendQuantity::loop_lower_threshold, TrendQuantity::loop_upper_threshold}) {
        TrendSpec s{q, order};
        s.loop = loop;
        s.from_top = from_top;
        t.push_back({claim, s});
    }
    return t;
}

void append(std::vector<ExpectedTrend>& to, std::vector<ExpectedTrend> more)
{
    to.insert(to.end(), more.begin(), more.end());
}

Scenario fig2()
{
    Scenario s{"fig2", "C", {}, {}, {}, {}, {}, {}, {}};
    for (Real c : {90.0, 180.0, 380.0}) {
        SystemConfig cfg = scheme_a(12.0);
        cfg.cooperativity = c;
        s.points.push_back({label_of("C", c), c, cfg});
    }
    s.trends = {
        {"outermost lower threshold increases with C",
         {TrendQuantity::outer_lower_threshold, TrendOrder::increasing}},
        {"outermost upper threshold increases with C",
         {TrendQuantity::outer_upper_threshold, TrendOrder::increasing}},
    };
    return s;
}

Scenario fig3a()
{
    Scenario s{"fig3a", "delta_23", {}, {}, {}, {}, {}, {}, {}};
    for (Real d : {4.0, 8.0, 12.0}) s.points.push_back({label_of("delta_23", d), d, scheme_a(d)});
    s.trends = loop_trends("lower region thresholds decrease with delta_23", 0, false,
                           TrendOrder::decreasing);
    append(s.trends, loop_trends("upper region thresholds increase with delta_23", 0, true,
                                 TrendOrder::increasing));
    return s;
}

Scenario fig3b()
{
    Scenario s{"fig3b", "delta_p", {}, {}, {}, {}, {}, {}, {}};
    for (Real dp : {0.0, -3.0, 3.0}) {
        SystemConfig cfg = scheme_a(12.0);
        cfg.delta_p = dp;
        s.points.push_back({label_of("delta_p", dp), dp, cfg});
    }
    return s;
}

SystemConfig controlled(Real omega_c, Real delta_p)
{
    SystemConfig cfg = scheme_a(12.0);
    cfg.scheme.gamma_4 = kGroundDecoherence;
    cfg.omega_c = omega_c;
    cfg.delta_control = 0.0;
    cfg.delta_p = delta_p;
    return cfg;
}

Scenario fig4a()
{
    Scenario s{"fig4a", "delta_p", {}, {}, {}, {}, {}, {}, {}};
    for (Real dp : {0.01, 0.03, 0.05}) {
        s.points.push_back({label_of("delta_p", dp), dp, controlled(0.1, dp)});
        s.references.push_back({label_of("delta_p", dp) + "_no_control", dp, controlled(0.0, dp)});
    }
    s.trends = loop_trends("lower region thresholds increase with delta_p", 0, false,
                           TrendOrder::increasing);
    s.expected_regions = 3;
    s.expected_reference_regions = 2;
    s.spectrum = SpectrumSpec{};
    return s;
}

Scenario fig4b()
{
    Scenario s{"fig4b", "omega_c", {}, {}, {}, {}, {}, {}, {}};
    for (Real om : {0.06, 0.1}) s.points.push_back({label_of("omega_c", om), om, controlled(om, 0.03)});
    s.trends = loop_trends("lower region thresholds decrease with omega_c", 0, false,
                           TrendOrder::decreasing);
    return s;
}

Scenario fig5a()
{
    Scenario s{"fig5a", "delta_p", {}, {}, {}, {}, {}, {}, {}};
    for (Real dp : {-15.0, -12.5, -10.0})
        s.points.push_back({label_of("delta_p", dp), dp, scheme_b(5.0, 10.0, dp)});
    s.trends = loop_trends("upper region thresholds decrease with delta_p", 0, true,
                           TrendOrder::decreasing);
    append(s.trends, loop_trends("lowest region thresholds increase with delta_p", 0, false,
                                 TrendOrder::increasing));
    append(s.trends, loop_trends("middle region thresholds increase with delta_p", 1, false,
                                 TrendOrder::increasing));
    s.expected_regions = 3;
    return s;
}

Scenario fig5b()
{
    // Axis value: delta_23; delta_34 and delta_p move with it as in the caption.
    Scenario s{"fig5b", "delta_23", {}, {}, {}, {}, {}, {}, {}};
    const Real sets[3][3] = {{2.0, 4.0, -5.0}, {4.0, 6.0, -8.0}, {5.0, 10.0, -12.5}};
    for (const auto& t : sets) {
        s.points.push_back({"delta_23_" + format_real(t[0]) + "_delta_34_" + format_real(t[1]) +
                                "_delta_p_" + format_real(t[2]),
                            t[0], scheme_b(t[0], t[1], t[2])});
    }
    for (std::size_t k = 0; k < 3; ++k)
        append(s.trends, loop_trends("region thresholds increase with the level separations", k,
                                     false, TrendOrder::increasing));
    s.expected_regions = 3;
    return s;
}

} // namespace

std::vector<std::string> preset_names()
{
    return {"fig2", "fig3a", "fig3b", "fig4a", "fig4b", "fig5a", "fig5b"};
}

Scenario preset(const std::string& name)
{
    if (name == "fig2") return fig2();
    if (name == "fig3a") return fig3a();
    if (name == "fig3b") return fig3b();
    if (name == "fig4a") return fig4a();
    if (name == "fig4b") return fig4b();
    if (name == "fig5a") return fig5a();
    if (name == "fig5b") return fig5b();
    throw ConfigError("unknown preset '" + name + "'");
}

Scenario with_io_mode(Scenario s, IoMode mode)
{
    for (auto& p : s.points) p.config.io_mode = mode;
    for (auto& p : s.references) p.config.io_mode = mode;
    return s;
}

bool RunResult::all_solved() const
{
    for (const auto& c : curves)
        if (!c.error.empty()) return false;
    return true;
}

namespace {

CurveOutcome evaluate_point(const Scenario& s, const AxisPoint& p, bool reference,
                            const RunOptions& o)
{
    CurveOutcome out;
    out.label = p.label;
    out.reference = reference;
    try {
        out.x_max = s.grid.x_max ? *s.grid.x_max
                                 : auto_x_max(p.config, s.grid.x_start, s.grid.points, o.threads);
        out.curve = sweep(p.config, uniform_grid(out.x_max, s.grid.points), o.threads);
        out.report = analyze(sampled(*out.curve), o.trace_points);
        if (s.spectrum) {
            const SpectrumSpec& sp = *s.spectrum;
            std::vector<Real> grid(sp.points);
            for (int i = 0; i < sp.points; ++i)
                grid[i] = sp.delta_p_lo + (sp.delta_p_hi - sp.delta_p_lo) * i / (sp.points - 1);
            out.spectrum = weak_probe_spectrum(p.config, sp.x_probe, grid, sp.tie_control, o.threads);
        }
    } catch (const SolverError& e) {
        out.error = e.what();
    } catch (const ConfigError& e) {
        out.error = e.what();
    }
    return out;
}

} // namespace

RunResult evaluate(const Scenario& scenario, const RunOptions& options)
{
    const auto start = std::chrono::steady_clock::now();
    RunResult r;
    r.scenario = scenario;
    for (const auto& p : scenario.points)
        r.curves.push_back(evaluate_point(scenario, p, false, options));
    for (const auto& p : scenario.references)
        r.curves.push_back(evaluate_point(scenario, p, true, options));

    std::vector<BistabilityReport> reports;
    bool complete = true;
    for (std::size_t i = 0; i < scenario.points.size(); ++i) {
        if (r.curves[i].report)
            reports.push_back(*r.curves[i].report);
        else
            complete = false;
    }
    for (const auto& t : scenario.trends) {
        TrendResult res;
        if (!complete) {
            res.comparable = false;
            res.diagnostic = "some curves failed to solve";
        } else {
            res = trend_compare(reports, t.spec);
        }
        r.trends.push_back({t, res});
    }
    r.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::string sha256_hex(const std::string& data)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

std::string write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
        f << content;
        f.flush();
        if (!f) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
    return sha256_hex(content);
}

nlohmann::json manifest_json(const RunResult& r)
{
    nlohmann::json curves = nlohmann::json::array();
    for (std::size_t i = 0; i < r.curves.size(); ++i) {
        const auto& c = r.curves[i];
        const AxisPoint& p = c.reference ? r.scenario.references[i - r.scenario.points.size()]
                                         : r.scenario.points[i];
        nlohmann::json e{{"label", c.label},
                         {"reference", c.reference},
                         {"axis_value", p.value},
                         {"config", to_json(p.config)},
                         {"x_max", c.x_max},
                         {"status", c.error.empty() ? "ok" : "solver_failure"}};
        if (!c.error.empty()) e["error"] = c.error;
        if (c.report) {
            e["region_count"] = c.report->region_count();
            e["loop_count"] = c.report->loops.size();
        }
        curves.push_back(e);
    }
    nlohmann::json trends = nlohmann::json::array();
    for (const auto& t : r.trends) {
        nlohmann::json e = to_json(t.result);
        e["claim"] = t.trend.claim;
        e["quantity"] = to_string(t.trend.spec);
        trends.push_back(e);
    }
    nlohmann::json files = nlohmann::json::array();
    for (const auto& f : r.files) files.push_back({{"path", f.path}, {"sha256", f.sha256}});

    nlohmann::json doc{{"scenario", r.scenario.name},
                       {"axis", r.scenario.axis_name},
                       {"tool_version", kToolVersion},
                       {"grid_points", r.scenario.grid.points},
                       {"wall_seconds", r.wall_seconds},
                       {"curves", curves},
                       {"trends", trends},
                       {"files", files}};
    if (r.scenario.expected_regions) doc["expected_region_count"] = *r.scenario.expected_regions;
    if (r.scenario.expected_reference_regions)
        doc["expected_reference_region_count"] = *r.scenario.expected_reference_regions;
    return doc;
}

RunResult run(const Scenario& scenario, const std::filesystem::path& dir,
              const RunOptions& options)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

    RunResult r = evaluate(scenario, options);
    auto emit = [&](const std::string& name, const std::string& content) {
        r.files.push_back({name, write_file_atomic(dir / name, content)});
    };
    for (const auto& c : r.curves) {
        const std::string base = scenario.name + "_" + c.label;
        if (c.curve) {
            if (options.format == TableFormat::json) {
                emit(base + ".json", to_json(*c.curve).dump(1) + "\n");
            } else {
                std::ostringstream os;
                write_table(os, *c.curve);
                emit(base + ".csv", os.str());
            }
        }
        if (c.report) emit(base + ".report.json", to_json(*c.report).dump(1) + "\n");
        if (c.spectrum) {
            std::ostringstream os;
            write_spectrum(os, *c.spectrum);
            emit(base + ".spectrum.csv", os.str());
        }
    }
    if (!r.trends.empty()) {
        nlohmann::json t = manifest_json(r)["trends"];
        emit(scenario.name + "_trends.json", t.dump(1) + "\n");
    }
    write_file_atomic(dir / (scenario.name + "_manifest.json"), manifest_json(r).dump(1) + "\n");
    return r;
}

} // namespace cqed
