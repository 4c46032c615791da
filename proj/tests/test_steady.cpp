#include <doctest.h>

#include <random>

#include "cqed/steady.hpp"
#include "support.hpp"

using namespace cqed;

TEST_CASE("undriven steady state is the ground state")
{
    const SteadyState s = solve_steady(build_generator(SystemConfig{}, 0.0));
    CHECK((s.state.sigma - DensityMatrix::ground().sigma).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(s.residual < 1e-15);
    CHECK_FALSE(s.from_printed_generator);
}

TEST_CASE("two-level closed form")
{
    CHECK(two_level_steady(0.0, 0.0, 1.0).first == 0.0);
    CHECK(std::abs(two_level_steady(0.0, 0.0, 1.0).second) == 0.0);
    CHECK(two_level_steady(0.5, 0.0, 1.0).first == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    // Saturates towards one half.
    CHECK(two_level_steady(50.0, 0.0, 1.0).first == doctest::Approx(0.5).epsilon(1e-4));
    CHECK_THROWS_AS(two_level_steady(1.0, 0.0, 0.0), ConfigError);
}

TEST_CASE("two-level reduction matches the closed form")
{
    for (Real delta : {-3.0, 0.0, 0.7}) {
        for (Real omega : {0.05, 0.5, 2.0, 20.0}) {
            const SteadyState s = solve_steady(build_generator(test::two_level(delta), omega));
            const auto [ee, eg] = two_level_steady(omega, delta, 1.0);
            CHECK(std::abs(s.state.population(2) - ee) < 1e-12);
            CHECK(std::abs(s.state(2, 1) - eg) < 1e-12);
            CHECK(s.state.population(3) == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("excited population rises monotonically with drive")
{
    for (Real delta : {0.0, 2.0}) {
        Real last = -1.0;
        for (int k = 0; k <= 200; ++k) {
            const Real e = two_level_steady(0.05 * k, delta, 1.0).first;
            CHECK(e > last);
            last = e;
        }
    }
}

TEST_CASE("steady states are physical across random configurations")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<Real> ux(0.0, 30.0);
    for (int k = 0; k < 200; ++k) {
        const SystemConfig c = test::random_config(rng);
        const SteadyState s = solve_steady(build_generator(c, ux(rng)));
        CHECK(is_physical(s.state));
        CHECK(s.residual <= 1e-9);
        CHECK(s.condition < kConditionLimit);
    }
}

TEST_CASE("closure row choice is immaterial for the Lindblad generator")
{
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<Real> ux(0.0, 30.0);
    for (int k = 0; k < 50; ++k) {
        const Generator g = build_generator(test::random_config(rng), ux(rng));
        const LevelMatrix ref = solve_steady(g, 1).state.sigma;
        for (int level = 2; level <= kLevels; ++level)
            CHECK((solve_steady(g, level).state.sigma - ref).cwiseAbs().maxCoeff() < 1e-9);
    }
    CHECK_THROWS_AS(solve_steady(build_generator(SystemConfig{}, 1.0), 5), Error);
}

TEST_CASE("undamped drive has no unique steady state")
{
    SystemConfig c;
    c.scheme.gamma_2 = c.scheme.gamma_3 = c.scheme.gamma_4 = 0.0;
    try {
        solve_steady(build_generator(c, 1.0));
        FAIL("expected SolverError");
    } catch (const SolverError& e) {
        CHECK(e.condition() > kConditionLimit);
        CHECK(e.field_rabi() == 1.0);
    }
}

TEST_CASE("printed generator is flagged")
{
    SystemConfig c;
    c.generator_mode = GeneratorMode::as_printed;
    c.scheme.gamma_4 = 1.0;
    const SteadyState s = solve_steady(build_generator(c, 0.3));
    CHECK(s.from_printed_generator);
}

TEST_CASE("relaxation reaches the algebraic steady state")
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<Real> ux(0.0, 30.0);
    for (int k = 0; k < 5; ++k) {
        const SystemConfig c = test::random_config(rng);
        const Real x = ux(rng);
        const RelaxResult r = relax_to_steady(c, x);
        CHECK(r.converged);
        const LevelMatrix ref = solve_steady(build_generator(c, x)).state.sigma;
        CHECK((r.state.sigma - ref).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("relaxation needs the Lindblad generator and enough time")
{
    SystemConfig c;
    c.generator_mode = GeneratorMode::as_printed;
    CHECK_THROWS_AS(relax_to_steady(c, 1.0), ConfigError);

    RelaxOptions short_run;
    short_run.t_max = 0.1;
    CHECK_THROWS_AS(relax_to_steady(SystemConfig{}, 1.0, short_run), SolverError);
}
