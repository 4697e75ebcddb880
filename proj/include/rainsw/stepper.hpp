// Time step selection, the explicit update and the time loop.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "diagnostics.hpp"
#include "fluxes.hpp"
#include "potential.hpp"

namespace rainsw {

struct StepReport {
    double dt = 0.0;
    int clamped_cells = 0;
    double clamp_mass = 0.0;        ///< mass added by clamping, >= 0
    double max_wave_speed = 0.0;    ///< max |u| + sqrt(2 g h) before the step
    double boundary_outflow = 0.0;  ///< mass leaving through the domain ends
    double source_input = 0.0;      ///< dt * sum S dx
};

/// max over wet cells of |u| + sqrt(2 g h); dry cells are vacuum.
inline double max_wave_speed(const State& state, double g)
{
    double m = 0.0;
    for (int i = 0; i < state.size(); ++i)
        if (state.is_wet(i)) m = std::max(m, std::abs(state.velocity(i)) + std::sqrt(2.0 * g * state.h(i)));
    return m;
}

/// dt = CFL dx / max(|u| + sqrt(2 g h)). On an all-dry state with rain R the
/// step is the time after which the rained depth R dt would satisfy the same
/// bound, (CFL dx / sqrt(2 g R))^(2/3).
inline double compute_dt(const State& state, double dx, double cfl, double g, double max_rain = 0.0)
{
    detail::require(dx > 0.0, "dx must be positive");
    detail::require(cfl > 0.0 && cfl <= 1.0, "cfl must lie in (0, 1]");
    const double speed = max_wave_speed(state, g);
    if (speed > 0.0) return cfl * dx / speed;
    if (max_rain > 0.0) return std::pow(cfl * dx / std::sqrt(2.0 * g * max_rain), 2.0 / 3.0);
    throw SimulationError("nothing to evolve: every cell is dry and no rain falls");
}

/// One explicit step of length dt from (state, t), with the potential `w`
/// built from the same state and the source rates `rates` at t.
inline std::pair<State, StepReport> step(const Problem& problem, const State& state, double t, double dt,
                                         const PotentialField& w, const SourceRates& rates)
{
    const Scenario& sc = problem.scenario;
    const int n = state.size();
    const double dx = problem.grid.dx();
    const double g = sc.gravity;
    detail::require(dt > 0.0 && std::isfinite(dt), "dt must be positive");
    detail::require(n == problem.grid.size(), "state does not match the grid");

    StepReport report;
    report.dt = dt;
    report.max_wave_speed = max_wave_speed(state, g);

    const auto flux = all_fluxes(state, w, sc.boundary, g);
    const bool momentum_source = sc.friction.model == ModelVariant::extended;
    const double ratio = dt / dx;

    std::vector<double> h(static_cast<std::size_t>(n)), q(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double s = rates.net[k];
        const double u = state.velocity(i);
        double hn = state.h(i) - ratio * (flux[k + 1].mass - flux[k].mass) + dt * s;
        double qn = state.q(i) - ratio * (flux[k + 1].momentum_left - flux[k].momentum_right);
        if (momentum_source) qn += dt * s * u;
        if (!std::isfinite(hn) || !std::isfinite(qn))
            throw SimulationError("non-finite value in cell " + std::to_string(i) + " at t=" + std::to_string(t) +
                                  " (h=" + std::to_string(state.h(i)) + ", q=" + std::to_string(state.q(i)) + ")");
        if (hn < 0.0) {
            ++report.clamped_cells;
            report.clamp_mass -= hn * dx;
            hn = 0.0;
            qn = 0.0;
        }
        h[k] = hn;
        q[k] = qn;
        report.source_input += dt * s * dx;
    }
    if (!sc.boundary.periodic()) report.boundary_outflow = dt * (flux.back().mass - flux.front().mass);
    return {State(std::move(h), std::move(q), sc.dry_height), report};
}

/// Takes `steps` steps of the scheme from (state, t) without any output,
/// advancing t. Stops early at `until` if given.
inline State advance(const Problem& problem, State state, double& t, long steps,
                     double until = std::numeric_limits<double>::infinity())
{
    const Scenario& sc = problem.scenario;
    for (long n = 0; n < steps && t < until; ++n) {
        const SourceRates rates = evaluate_sources(sc.sources, t, problem.grid);
        const PotentialField w =
            build_potential(state, problem.topography, rates, sc.friction, problem.grid, sc.gravity);
        double dt = compute_dt(state, problem.grid.dx(), sc.cfl, sc.gravity, rates.max_rain());
        dt = std::min(dt, until - t);
        state = step(problem, state, t, dt, w, rates).first;
        t += dt;
    }
    return state;
}

struct ProbeRecord {
    double t = 0.0;
    double x = 0.0;
    double h = 0.0;
    double q = 0.0;
    double u = 0.0;
};

struct Snapshot {
    double t = 0.0;
    State state;
};

struct DiagnosticsRecord {
    double t = 0.0;
    double dt = 0.0;
    double mass = 0.0;
    double entropy = 0.0;
    double kinetic = 0.0;
    double source_input = 0.0;      ///< cumulative
    double boundary_outflow = 0.0;  ///< cumulative
    double clamp_correction = 0.0;  ///< cumulative
    double audit_error = 0.0;
    int entropy_violations = 0;
    int clamped_cells = 0;  ///< cumulative
};

struct RunOutputs {
    Scenario scenario;
    std::vector<double> x;
    std::vector<double> bed;
    std::vector<ProbeRecord> probes;
    std::vector<Snapshot> snapshots;
    std::vector<DiagnosticsRecord> diagnostics;
    State final_state;
    double final_time = 0.0;
    long steps = 0;

    std::vector<MassEntry> mass_series() const
    {
        std::vector<MassEntry> m;
        for (const auto& d : diagnostics)
            m.push_back({d.t, d.mass, d.source_input, d.boundary_outflow, d.clamp_correction});
        return m;
    }
};

/// What an observer sees after each accepted step.
struct StepEvent {
    long index = 0;
    double t = 0.0;  ///< start of the step
    const State* before = nullptr;
    const State* after = nullptr;
    const SourceRates* rates = nullptr;
    const PotentialField* potential = nullptr;
    const std::vector<EntropyCheck>* entropy = nullptr;
    StepReport report;
};

using StepObserver = std::function<void(const StepEvent&)>;

namespace detail {

// Times the step must land on: snapshots, T and the edges of source boxes.
inline std::vector<double> checkpoints(const Scenario& sc)
{
    std::vector<double> c = sc.snapshots;
    for (double e : sc.sources.event_times()) c.push_back(e);
    c.push_back(sc.final_time);
    std::erase_if(c, [&](double v) { return v <= 0.0 || v > sc.final_time; });
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
}

inline bool rain_after(const SourceField& f, double t)
{
    return std::any_of(f.rain.begin(), f.rain.end(), [&](const SourceBox& b) { return b.t_end > t && b.rate > 0.0; });
}

} // namespace detail

/// Advances a scenario from 0 to T. Probes are recorded after every step,
/// diagnostics every `diagnostics_every` steps and at the end, snapshots at
/// 0, the requested times and T.
inline RunOutputs run(const Scenario& scenario, const StepObserver& observer = {})
{
    const Problem problem(scenario);
    const Scenario& sc = problem.scenario;
    const Grid& grid = problem.grid;
    const double dx = grid.dx();
    const double g = sc.gravity;

    RunOutputs out;
    out.scenario = sc;
    out.x = grid.centers();
    out.bed = problem.topography.values;
    State state = problem.initial();

    std::vector<int> probe_cells;
    for (double x : sc.probes) probe_cells.push_back(grid.locate(x));
    auto record_probes = [&](double t) {
        for (std::size_t p = 0; p < probe_cells.size(); ++p) {
            const int i = probe_cells[p];
            out.probes.push_back({t, sc.probes[p], state.h(i), state.q(i), state.velocity(i)});
        }
    };
    std::vector<double> snaps = sc.snapshots;
    snaps.push_back(0.0);
    snaps.push_back(sc.final_time);
    std::sort(snaps.begin(), snaps.end());
    snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());
    std::size_t next_snap = 0;
    auto record_snapshots = [&](double t) {
        while (next_snap < snaps.size() && snaps[next_snap] <= t) {
            out.snapshots.push_back({snaps[next_snap], state});
            ++next_snap;
        }
    };

    const double mass0 = state.mass(dx);
    DiagnosticsRecord running;
    auto record_diagnostics = [&](double t, double dt, int violations) {
        running.t = t;
        running.dt = dt;
        running.mass = state.mass(dx);
        running.entropy = total_entropy(state, dx, g);
        running.kinetic = total_kinetic_energy(state, dx);
        running.audit_error =
            std::abs(running.mass - mass0 - running.source_input + running.boundary_outflow);
        running.entropy_violations = violations;
        out.diagnostics.push_back(running);
    };

    double t = 0.0;
    record_probes(t);
    record_snapshots(t);
    record_diagnostics(t, 0.0, 0);

    const auto stops = detail::checkpoints(sc);
    std::size_t next_stop = 0;
    const double tiny = 1e-12 * std::max(1.0, sc.final_time);

    if (sc.final_time > 0.0 && max_wave_speed(state, g) == 0.0 && !detail::rain_after(sc.sources, 0.0))
        throw SimulationError("nothing to evolve: every cell is dry and no rain falls");

    long steps = 0;
    int pending_violations = 0;
    while (t < sc.final_time) {
        while (next_stop < stops.size() && stops[next_stop] <= t + tiny) ++next_stop;
        double stop = next_stop < stops.size() ? stops[next_stop] : sc.final_time;
        if (sc.sample_interval > 0.0) {
            const double k = std::floor((t + tiny) / sc.sample_interval) + 1.0;
            stop = std::min(stop, k * sc.sample_interval);
        }
        const SourceRates rates = evaluate_sources(sc.sources, t, grid);

        if (max_wave_speed(state, g) == 0.0 && rates.max_rain() == 0.0) {
            // Dry and unwatered: nothing moves until the next source edge or T.
            t = stop;
            record_probes(t);
            record_snapshots(t);
            continue;
        }

        const PotentialField w = build_potential(state, problem.topography, rates, sc.friction, grid, g);
        double dt = compute_dt(state, dx, sc.cfl, g, rates.max_rain());
        bool lands = false;
        if (t + dt >= stop - tiny) {
            dt = stop - t;
            lands = true;
        }
        auto [next, report] = step(problem, state, t, dt, w, rates);

        const EntropyContext ctx{&grid, &problem.topography, &rates, sc.friction, sc.boundary, g};
        const auto checks = entropy_residual(state, next, dt, ctx);
        pending_violations += count_violations(checks);

        if (observer) {
            StepEvent ev;
            ev.index = steps;
            ev.t = t;
            ev.before = &state;
            ev.after = &next;
            ev.rates = &rates;
            ev.potential = &w;
            ev.entropy = &checks;
            ev.report = report;
            observer(ev);
        }

        state = std::move(next);
        t = lands ? stop : t + dt;
        ++steps;
        running.source_input += report.source_input;
        running.boundary_outflow += report.boundary_outflow;
        running.clamp_correction += report.clamp_mass;
        running.clamped_cells += report.clamped_cells;

        record_probes(t);
        record_snapshots(t);
        if (steps % sc.diagnostics_every == 0 || t >= sc.final_time) {
            record_diagnostics(t, dt, pending_violations);
            pending_violations = 0;
        }
    }
    out.final_state = state;
    out.final_time = t;
    out.steps = steps;
    return out;
}

} // namespace rainsw
