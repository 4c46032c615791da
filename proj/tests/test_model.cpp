#include <doctest.h>

#include "cqed/model.hpp"

using namespace cqed;

TEST_CASE("default configuration is valid")
{
    CHECK(validate(SystemConfig{}).empty());
}

TEST_CASE("validation lists every violation")
{
    SystemConfig c;
    c.cooperativity = -1.0;
    c.kappa = 0.0;
    const auto errors = validate(c);
    REQUIRE(errors.size() == 2);
    CHECK(errors[0] == "C >= 0");
    CHECK(errors[1] == "kappa > 0");
    CHECK_THROWS_AS(require_valid(c), ConfigError);
}

TEST_CASE("scheme B rejects a control field")
{
    SystemConfig c;
    c.scheme.id = SchemeId::B;
    c.omega_c = 0.1;
    CHECK_THROWS_AS(derive_drives(c), ConfigError);
}

TEST_CASE("non-finite parameters are rejected")
{
    SystemConfig c;
    c.delta_p = NAN;
    CHECK_FALSE(validate(c).empty());
}

TEST_CASE("scheme A detunings")
{
    SystemConfig c;
    c.scheme.delta_23 = 12.0;
    c.delta_p = 0.5;
    c.omega_c = 0.1;
    c.delta_control = 0.2;
    const CavityDrive d = derive_drives(c);
    REQUIRE(d.transitions.size() == 2);
    CHECK(d.to_level(2).detuning == doctest::Approx(12.5));
    CHECK(d.to_level(3).detuning == doctest::Approx(0.5));
    REQUIRE(d.control);
    CHECK(d.control->rabi == 0.1);
    CHECK(d.control->detuning == 0.2);
    CHECK(d.control->lower == 4);
    CHECK(d.control->upper == 3);
}

TEST_CASE("scheme B detunings share the probe offset")
{
    SystemConfig c;
    c.scheme.id = SchemeId::B;
    c.scheme.delta_23 = 5.0;
    c.scheme.delta_34 = 10.0;
    c.delta_p = -12.5;
    CHECK(c.scheme.delta_24() == 15.0);
    const CavityDrive d = derive_drives(c);
    REQUIRE(d.transitions.size() == 3);
    CHECK(d.to_level(2).detuning == doctest::Approx(2.5));
    CHECK(d.to_level(3).detuning == doctest::Approx(-2.5));
    CHECK(d.to_level(4).detuning == doctest::Approx(-12.5));
    CHECK_FALSE(d.control);
}

TEST_CASE("decay channels")
{
    LevelScheme s;
    CHECK(s.decay_channels().size() == 3);
    s.branch_24 = 0.3;
    s.branch_34 = 0.4;
    const auto ch = s.decay_channels();
    REQUIRE(ch.size() == 5);
    for (const auto& c : ch) {
        CHECK(c.upper != c.lower);
        CHECK((c.lower == 1 || c.lower == 4));
    }
    CHECK(s.gamma(1) == 0.0);
    CHECK(s.gamma(3) == 1.0);
}

TEST_CASE("config json round trip")
{
    SystemConfig c;
    c.scheme.id = SchemeId::B;
    c.scheme.delta_23 = 4.0;
    c.scheme.delta_34 = 6.0;
    c.cooperativity = 90.0;
    c.delta_p = -8.0;
    c.io_mode = IoMode::physical;
    c.kappa = 2.0;
    c.dipole_weights = {1.0, 0.5, 0.25};
    const SystemConfig back = config_from_json(to_json(c));
    CHECK(to_json(back) == to_json(c));
}

TEST_CASE("config json rejects unknown keys and bad weights")
{
    CHECK_THROWS_AS(config_from_json({{"scheme", "A"}, {"coupling", 3}}), ConfigError);
    CHECK_THROWS_AS(config_from_json({{"scheme", "A"}, {"dipole_weights", {1, 1, 1}}}),
                    ConfigError);
    CHECK_THROWS_AS(config_from_json({{"scheme", "C"}}), ConfigError);
    CHECK_THROWS_AS(config_from_json({{"C", -3}}), ConfigError);
    CHECK_NOTHROW(config_from_json({{"scheme", "B"}, {"dipole_weights", {1, 1, 1}}}));
}

TEST_CASE("enum names parse back")
{
    CHECK(parse_io_mode(to_string(IoMode::physical)) == IoMode::physical);
    CHECK(parse_generator_mode(to_string(GeneratorMode::as_printed)) == GeneratorMode::as_printed);
    CHECK(parse_scheme("B") == SchemeId::B);
    CHECK_THROWS_AS(parse_io_mode("loud"), ConfigError);
}

TEST_CASE("missing config file is an i/o error")
{
    CHECK_THROWS_AS(load_config("/nonexistent/cfg.json"), IoError);
}
