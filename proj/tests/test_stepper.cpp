#include <gtest/gtest.h>

#include <cmath>

#include "rainsw/analytic.hpp"
#include "rainsw/scenarios.hpp"
#include "rainsw/stepper.hpp"

using namespace rainsw;

namespace {
constexpr double g = 9.81;
}

TEST(ComputeDt, Formula)
{
    const State s(std::vector<double>(10, 1.0), std::vector<double>(10, 0.0));
    EXPECT_NEAR(compute_dt(s, 0.01, 0.95, g), 2.1447e-3, 1e-7);
    EXPECT_DOUBLE_EQ(compute_dt(s, 0.01, 0.95, g), 0.95 * 0.01 / std::sqrt(2.0 * g));
    EXPECT_DOUBLE_EQ(compute_dt(s, 0.01, 0.5, g), 2.0 * compute_dt(s, 0.01, 0.25, g));
}

TEST(ComputeDt, SymmetricInVelocity)
{
    const State a(std::vector<double>(5, 1.0), std::vector<double>(5, 3.0));
    const State b(std::vector<double>(5, 1.0), std::vector<double>(5, -3.0));
    EXPECT_EQ(compute_dt(a, 0.01, 0.95, g), compute_dt(b, 0.01, 0.95, g));
}

TEST(ComputeDt, DryState)
{
    const State dry(std::vector<double>(5, 0.0), std::vector<double>(5, 0.0));
    EXPECT_THROW(compute_dt(dry, 0.01, 0.95, g), SimulationError);
    const double dt = compute_dt(dry, 0.01, 0.95, g, 1e-3);
    EXPECT_GT(dt, 0.0);
    // The rained depth after dt sits exactly on the CFL bound.
    EXPECT_NEAR(std::sqrt(2.0 * g * 1e-3 * dt) * dt, 0.95 * 0.01, 1e-15);
}

TEST(Step, LakeAtRestFixpoint)
{
    const Problem p(build("lake_at_rest"));
    double t = 0.0;
    const State s0 = p.initial();
    const State s1 = advance(p, s0, t, 1);
    for (int i = 0; i < s0.size(); ++i) {
        EXPECT_NEAR(s1.h(i), s0.h(i), 1e-12);
        EXPECT_NEAR(s1.q(i), 0.0, 1e-12);
    }
}

TEST(Step, FillingLakeOneStep)
{
    const Problem p(build("filling_lake"));
    const State s0 = p.initial();
    const auto rates = evaluate_sources(p.scenario.sources, 0.0, p.grid);
    const auto w = build_potential(s0, p.topography, rates, p.scenario.friction, p.grid, g);
    const double dt = compute_dt(s0, p.grid.dx(), p.scenario.cfl, g);
    const auto [s1, report] = step(p, s0, 0.0, dt, w, rates);
    for (int i = 0; i < s0.size(); ++i) {
        EXPECT_NEAR(s1.h(i), s0.h(i) + dt * 1e-3, 1e-12);
        EXPECT_NEAR(s1.velocity(i), 0.0, 1e-12);
    }
    EXPECT_EQ(report.clamped_cells, 0);
}

TEST(Step, FixpointsHoldOverManySteps)
{
    for (const char* name : {"lake_at_rest", "filling_lake"}) {
        const Problem p(build(name, {{"final_time", "1e6"}}));
        double t = 0.0;
        State s = p.initial();
        for (int n = 0; n < 1000; ++n) s = advance(p, s, t, 1);
        double lo = 1e300, hi = -1e300;
        for (int i = 0; i < s.size(); ++i) {
            lo = std::min(lo, s.h(i) + p.topography[i]);
            hi = std::max(hi, s.h(i) + p.topography[i]);
            EXPECT_LE(std::abs(s.velocity(i)), 1e-10) << name;
        }
        EXPECT_LE(hi - lo, 1e-10) << name;
    }
}

TEST(Step, PeriodicMassBalancePerStep)
{
    const Problem p(build("drain", {{"infiltration", "0.05"}}));
    State s = p.initial();
    double t = 0.0;
    for (int n = 0; n < 200; ++n) {
        const auto rates = evaluate_sources(p.scenario.sources, t, p.grid);
        const auto w = build_potential(s, p.topography, rates, p.scenario.friction, p.grid, g);
        const double dt = compute_dt(s, p.grid.dx(), p.scenario.cfl, g);
        const auto [next, report] = step(p, s, t, dt, w, rates);
        double src = 0.0;
        for (double v : rates.net) src += v;
        src *= dt * p.grid.dx();
        const double change = next.mass(p.grid.dx()) - s.mass(p.grid.dx());
        EXPECT_EQ(report.clamped_cells, 0);
        EXPECT_NEAR(change, src, 1e-14 * s.mass(p.grid.dx()));
        s = next;
        t += dt;
    }
}

TEST(Step, ClampIsLogged)
{
    // A shallow cell under strong infiltration drains below zero in one step.
    Scenario sc;
    sc.length = 1.0;
    sc.cells = 4;
    sc.boundary = {Boundary::wall, Boundary::wall};
    sc.initial = UniformInitial{1e-6, 0.0};
    sc.sources.infiltration = {{0.0, 1.0, 0.0, 1.0, 1.0}};
    const Problem p(sc);
    const State s = p.initial();
    const auto rates = evaluate_sources(sc.sources, 0.0, p.grid);
    const auto w = build_potential(s, p.topography, rates, sc.friction, p.grid, g);
    const auto [next, report] = step(p, s, 0.0, 1e-3, w, rates);
    EXPECT_EQ(report.clamped_cells, 4);
    EXPECT_NEAR(report.clamp_mass, 4 * (1e-3 - 1e-6) * 0.25, 1e-15);
    for (int i = 0; i < 4; ++i) {
        EXPECT_EQ(next.h(i), 0.0);
        EXPECT_EQ(next.q(i), 0.0);
    }
}

TEST(Step, RejectsNonFinite)
{
    const Problem p(build("lake_at_rest"));
    const State s = p.initial();
    auto rates = evaluate_sources(p.scenario.sources, 0.0, p.grid);
    rates.net[3] = std::numeric_limits<double>::infinity();
    const auto w = build_potential(s, p.topography, evaluate_sources(p.scenario.sources, 0.0, p.grid),
                                   p.scenario.friction, p.grid, g);
    EXPECT_THROW(step(p, s, 0.0, 1e-3, w, rates), SimulationError);
}

TEST(Run, ZeroFinalTimeKeepsInitialState)
{
    const auto out = run(build("uniform_rain_alpha", {{"final_time", "0"}, {"cells", "20"}}));
    EXPECT_EQ(out.steps, 0);
    ASSERT_EQ(out.snapshots.size(), 1u);
    EXPECT_EQ(out.snapshots.front().t, 0.0);
    EXPECT_EQ(out.final_state, Problem(out.scenario).initial());
}

TEST(Run, UniformRainAlphaZero)
{
    const auto out = run(build("uniform_rain_alpha", {{"alpha", "0"}}));
    EXPECT_DOUBLE_EQ(out.final_time, 1.0);
    for (int i = 0; i < out.final_state.size(); i += 97) {
        EXPECT_NEAR(out.final_state.h(i), 2.0, 2e-3);
        EXPECT_NEAR(out.final_state.q(i), 2.0, 2e-3);
    }
}

TEST(Run, UniformRainAlphaOne)
{
    const auto out = run(build("uniform_rain_alpha", {{"alpha", "1"}}));
    EXPECT_NEAR(out.final_state.h(500), 2.0, 2e-3);
    EXPECT_NEAR(out.final_state.q(500), 1.0, 1e-3);
}

TEST(Run, UniformSetupStaysUniform)
{
    run(build("uniform_rain_alpha", {{"alpha", "0.75"}, {"cells", "100"}}), [&](const StepEvent& e) {
        const State& s = *e.after;
        for (int i = 1; i < s.size(); ++i) {
            ASSERT_NEAR(s.h(i), s.h(0), 1e-12);
            ASSERT_NEAR(s.q(i), s.q(0), 1e-12);
        }
    });
}

TEST(Run, FirstOrderInResolution)
{
    auto error = [](int n) {
        const auto out = run(build("uniform_rain_alpha", {{"alpha", "2"}, {"cells", std::to_string(n)}}));
        const auto exact = uniform_rain_exact(1.0, 2.0);
        return std::abs(out.final_state.q(0) - exact.q);
    };
    const double coarse = error(100), fine = error(400);
    EXPECT_GT(coarse / fine, 3.5);
}

TEST(Run, LandsOnRequestedTimes)
{
    auto sc = build("flume", {{"final_time", "12"}, {"cells", "100"}});
    sc.snapshots = {3.3, 7.0};
    const auto out = run(sc);
    std::vector<double> times;
    for (const auto& s : out.snapshots) times.push_back(s.t);
    EXPECT_EQ(times, (std::vector<double>{0.0, 3.3, 7.0, 12.0}));
    bool saw_rain_start = false;
    for (const auto& p : out.probes) saw_rain_start = saw_rain_start || p.t == 5.0;
    EXPECT_TRUE(saw_rain_start);
    for (std::size_t k = 1; k < out.probes.size(); ++k) EXPECT_GT(out.probes[k].t, out.probes[k - 1].t);
}

TEST(Run, Deterministic)
{
    const auto sc = build("drain", {{"cells", "64"}, {"final_time", "0.2"}});
    const auto a = run(sc), b = run(sc);
    EXPECT_EQ(a.final_state, b.final_state);
    EXPECT_EQ(a.steps, b.steps);
}

TEST(Run, DryWithoutRainHasNothingToEvolve)
{
    Scenario sc;
    sc.length = 1.0;
    sc.cells = 10;
    sc.initial = UniformInitial{0.0, 0.0};
    EXPECT_THROW(run(sc), SimulationError);
}

TEST(Run, WallOutflowMassBalance)
{
    const auto out = run(build("flume", {{"cells", "200"}, {"final_time", "60"}}));
    const auto err = mass_audit(out.mass_series());
    const double rained = out.diagnostics.back().source_input;
    for (double e : err) EXPECT_LE(e, 1e-10 * rained);
}
