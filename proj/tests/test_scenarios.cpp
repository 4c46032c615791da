#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cqed/scenarios.hpp"

using namespace cqed;
namespace fs = std::filesystem;

namespace {

std::vector<Real> axis(const Scenario& s)
{
    std::vector<Real> v;
    for (const auto& p : s.points) v.push_back(p.value);
    return v;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("cqed_test_" + name);
    fs::remove_all(dir);
    return dir;
}

} // namespace

TEST_CASE("preset axes")
{
    CHECK(axis(preset("fig2")) == std::vector<Real>{90, 180, 380});
    CHECK(axis(preset("fig3a")) == std::vector<Real>{4, 8, 12});
    CHECK(axis(preset("fig3b")) == std::vector<Real>{0, -3, 3});
    CHECK(axis(preset("fig4a")) == std::vector<Real>{0.01, 0.03, 0.05});
    CHECK(axis(preset("fig4b")) == std::vector<Real>{0.06, 0.1});
    CHECK(axis(preset("fig5a")) == std::vector<Real>{-15, -12.5, -10});

    const Scenario b = preset("fig5b");
    REQUIRE(b.points.size() == 3);
    const Real expected[3][3] = {{2, 4, -5}, {4, 6, -8}, {5, 10, -12.5}};
    for (int i = 0; i < 3; ++i) {
        CHECK(b.points[i].config.scheme.delta_23 == expected[i][0]);
        CHECK(b.points[i].config.scheme.delta_34 == expected[i][1]);
        CHECK(b.points[i].config.delta_p == expected[i][2]);
    }
    CHECK_THROWS_AS(preset("fig9"), ConfigError);
}

TEST_CASE("preset parameters")
{
    for (const auto& name : preset_names()) {
        const Scenario s = preset(name);
        CHECK(s.name == name);
        for (const auto& group : {s.points, s.references}) {
            for (const auto& p : group) {
                CHECK(validate(p.config).empty());
                if (p.config.scheme.id == SchemeId::A) {
                    CHECK(p.config.delta_c == -p.config.scheme.delta_23 / 2);
                } else {
                    CHECK(p.config.delta_c == 0.0);
                    CHECK(p.config.omega_c == 0.0);
                }
            }
        }
    }
    const Scenario a = preset("fig4a");
    for (const auto& p : a.points) {
        CHECK(p.config.omega_c == 0.1);
        CHECK(p.config.delta_control == 0.0);
    }
    REQUIRE(a.references.size() == 3);
    for (const auto& p : a.references) CHECK(p.config.omega_c == 0.0);
    CHECK(preset("fig4b").points[0].config.delta_p == 0.03);
    CHECK(preset("fig2").points[0].config.delta_p == 0.0);
}

TEST_CASE("io mode override reaches every curve")
{
    const Scenario s = with_io_mode(preset("fig4a"), IoMode::physical);
    for (const auto& p : s.points) CHECK(p.config.io_mode == IoMode::physical);
    for (const auto& p : s.references) CHECK(p.config.io_mode == IoMode::physical);
}

TEST_CASE("empty axis runs cleanly")
{
    Scenario s;
    s.name = "empty";
    s.axis_name = "none";
    const fs::path dir = scratch("empty");
    const RunResult r = run(s, dir);
    CHECK(r.curves.empty());
    CHECK(r.all_solved());
    const auto m = nlohmann::json::parse(slurp(dir / "empty_manifest.json"));
    CHECK(m["curves"].empty());
    CHECK(m["files"].empty());
    fs::remove_all(dir);
}

TEST_CASE("run writes digested artifacts")
{
    Scenario s = preset("fig2");
    s.grid.points = 201;
    s.grid.x_max = 64.0;
    const fs::path dir = scratch("fig2");
    const RunResult r = run(s, dir);
    CHECK(r.all_solved());
    CHECK(r.trends.size() == 2);

    const auto m = nlohmann::json::parse(slurp(dir / "fig2_manifest.json"));
    CHECK(m["tool_version"] == kToolVersion);
    CHECK(m["curves"].size() == 3);
    CHECK(m["curves"][0]["config"]["C"] == 90.0);
    int tables = 0;
    for (const auto& f : m["files"]) {
        const fs::path p = dir / f["path"].get<std::string>();
        REQUIRE(fs::exists(p));
        CHECK(sha256_hex(slurp(p)) == f["sha256"]);
        tables += p.extension() == ".csv";
    }
    CHECK(tables == 3);
    CHECK(fs::exists(dir / "fig2_trends.json"));
    for (const auto& e : fs::directory_iterator(dir)) CHECK(e.path().extension() != ".tmp");
    fs::remove_all(dir);
}

TEST_CASE("solver failures land in the manifest")
{
    Scenario s;
    s.name = "broken";
    s.axis_name = "C";
    SystemConfig c;
    c.cooperativity = 1.0;
    c.scheme.gamma_2 = c.scheme.gamma_3 = c.scheme.gamma_4 = 0.0;
    s.points.push_back({"undamped", 1.0, c});
    s.grid.points = 11;
    s.grid.x_max = 1.0;
    const fs::path dir = scratch("broken");
    const RunResult r = run(s, dir);
    CHECK_FALSE(r.all_solved());
    const auto m = nlohmann::json::parse(slurp(dir / "broken_manifest.json"));
    CHECK(m["curves"][0]["status"] == "solver_failure");
    fs::remove_all(dir);
}

TEST_CASE("unwritable output directory is an i/o error")
{
    Scenario s;
    s.name = "nowhere";
    CHECK_THROWS_AS(run(s, "/proc/cqed_cannot_write_here"), IoError);
}

TEST_CASE("tables are byte-identical across runs and thread counts")
{
    Scenario s = preset("fig2");
    s.points.resize(1);
    s.grid.points = 401;
    s.grid.x_max = 64.0;
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    RunOptions serial, threaded;
    threaded.threads = 4;
    run(s, a, serial);
    run(s, b, threaded);
    CHECK(slurp(a / "fig2_C_90.csv") == slurp(b / "fig2_C_90.csv"));
    CHECK(slurp(a / "fig2_C_90.report.json") == slurp(b / "fig2_C_90.report.json"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("sha256 test vector")
{
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
