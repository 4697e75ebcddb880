// Acceptance criteria 1-10 as self-contained checks. Shared by the
// acceptance test binary and `rainsw verify`.
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "analytic.hpp"
#include "core.hpp"
#include "diagnostics.hpp"
#include "kinetic.hpp"
#include "scenarios.hpp"
#include "stepper.hpp"

namespace rainsw::acceptance {

struct Result {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
    double time_limit = 0.0;
};

// Tolerances and limits, one place.
namespace tol {
inline constexpr double moment_rel = 1e-12;
inline constexpr double weight_closed = 1e-12;
inline constexpr double weight_quadrature = 1e-8;
inline constexpr double lake_velocity = 1e-12;
inline constexpr double lake_surface = 1e-12;
inline constexpr double filling_flat = 1e-10;
inline constexpr double filling_gain_rel = 1e-12;
inline constexpr double closed_form_rel = 1e-3;
inline constexpr double sign_deadband_rel = 1e-3;
inline constexpr double periodic_mass_rel = 1e-10;
inline constexpr double flume_mass_rel = 1e-8;
inline constexpr double alpha_flip_offset = 0.05;
inline constexpr double plateau_band = 0.05;
inline constexpr double recession_fraction = 0.05;
inline constexpr double rise_slack = 1e-3;  ///< allowed dip of a 1 s mean on the rise, relative to plateau
inline constexpr double legacy_match = 1e-12;
inline constexpr double recession_level = 0.1;
inline constexpr double clamp_fraction = 1e-12;
} // namespace tol

namespace detail {

inline std::string fmt(const char* f, double a)
{
    char b[128];
    std::snprintf(b, sizeof b, f, a);
    return b;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Flume run shared by the criteria that need it within one process.
inline const RunOutputs& flume_run()
{
    static const RunOutputs out = run(build("flume"));
    return out;
}

inline double rained_mass(const Scenario& s)
{
    double m = 0.0;
    for (const auto& b : s.sources.rain) m += b.rate * (b.t_end - b.t_begin) * (b.x_end - b.x_begin);
    return m;
}

// Mean of the cells' values; the uniform-rain runs stay uniform.
inline double mean(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline int sign_with_deadband(double delta, double scale)
{
    if (std::abs(delta) <= tol::sign_deadband_rel * scale) return 0;
    return delta > 0.0 ? 1 : -1;
}

} // namespace detail

/// Closed-form moments of M against [h, hu, hu^2 + g h^2 / 2]; the weight's
/// normalisation in closed form and by quadrature.
inline Result kinetic_moments()
{
    Result r{1, "kinetic moment identities", false, "", 0.0, 1.0};
    const double g = default_gravity;
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> hd(0.1, 10.0), ud(-5.0, 5.0);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double h = hd(rng), u = ud(rng);
        const KineticDensityParams p{h, u, g};
        const double expect[3] = {h, h * u, h * u * u + 0.5 * g * h * h};
        for (int m = 0; m < 3; ++m) {
            const double scale = std::max(std::abs(expect[m]), m == 1 ? h * std::sqrt(g * h) : 0.0);
            worst = std::max(worst, std::abs(full_moment(p, m) - expect[m]) / scale);
        }
    }
    const KineticDensityParams unit{1.0, 0.0, g};
    const double w0 = full_moment(unit, 0), w2 = full_moment(unit, 2);
    const double closed = std::max(std::abs(w0 - 1.0), std::abs(w2 - 0.5 * g) / (0.5 * g));

    const double c = std::sqrt(2.0 * g);
    boost::math::quadrature::tanh_sinh<double> ts;
    auto weight = [&](double w, double) { return chi(w, g); };
    auto weight2 = [&](double w, double) { return w * w * chi(w, g); };
    const double q0 = ts.integrate(weight, -c, c), q2 = ts.integrate(weight2, -c, c);
    const double quad = std::max(std::abs(q0 - 1.0), std::abs(q2 - 0.5 * g) / (0.5 * g));

    r.passed = worst <= tol::moment_rel && closed <= tol::weight_closed && quad <= tol::weight_quadrature;
    r.detail = "moments max rel err " + detail::fmt("%.2e", worst) + ", weight closed " + detail::fmt("%.2e", closed) +
               ", quadrature " + detail::fmt("%.2e", quad);
    return r;
}

/// Lake at rest over a non-flat bed stays put for 1000 steps.
inline Result lake_at_rest()
{
    Result r{2, "well-balanced lake at rest", false, "", 0.0, 5.0};
    const Problem problem(build("lake_at_rest", {{"cells", "200"}, {"final_time", "1e6"}}));
    double t = 0.0;
    const State s = advance(problem, problem.initial(), t, 1000);
    double umax = 0.0, smax = 0.0;
    for (int i = 0; i < s.size(); ++i) {
        umax = std::max(umax, std::abs(s.velocity(i)));
        smax = std::max(smax, std::abs(s.h(i) + problem.topography[i] - 1.0));
    }
    r.passed = umax <= tol::lake_velocity && smax <= tol::lake_surface;
    r.detail = "max|u| " + detail::fmt("%.2e", umax) + ", max|h+Z-1| " + detail::fmt("%.2e", smax) + " after 1000 steps";
    return r;
}

/// Uniform rain on a lake keeps the surface flat and adds exactly sum dt R.
inline Result filling_lake()
{
    Result r{3, "filling-the-lake preservation", false, "", 0.0, 5.0};
    const double rain = 1e-3;
    const Problem problem(build("filling_lake", {{"final_time", "1e6"}, {"rain", "0.001"}}));
    State s = problem.initial();
    const State s0 = s;
    double t = 0.0, rained = 0.0;
    for (int n = 0; n < 1000; ++n) {
        const double before = t;
        s = advance(problem, s, t, 1);
        rained += (t - before) * rain;
    }
    double lo = 1e300, hi = -1e300, gain = 0.0;
    for (int i = 0; i < s.size(); ++i) {
        const double surface = s.h(i) + problem.topography[i];
        lo = std::min(lo, surface);
        hi = std::max(hi, surface);
        gain = std::max(gain, detail::rel(s.h(i) - s0.h(i), rained));
    }
    r.passed = hi - lo <= tol::filling_flat && gain <= tol::filling_gain_rel;
    r.detail = "surface spread " + detail::fmt("%.2e", hi - lo) + " m, gain rel err " + detail::fmt("%.2e", gain) +
               " over a gain of " + detail::fmt("%.3e", rained) + " m";
    return r;
}

/// The uniform-rain problem against h = 1 + t, q = (1 + t)^(1 - alpha) and
/// the regime sign table.
inline Result closed_form()
{
    Result r{4, "uniform-rain closed form and regimes", false, "", 0.0, 120.0};
    bool ok = true;
    std::string d;
    for (double alpha : {-0.5, 0.0, 0.25, 0.5, 0.75, 1.0, 2.0}) {
        const auto out = run(build("uniform_rain_alpha", {{"alpha", detail::fmt("%.17g", alpha)}}));
        const State& s0 = out.snapshots.front().state;
        const State& s1 = out.final_state;
        const auto exact = uniform_rain_exact(out.final_time, alpha);
        const double h = detail::mean(s1.h()), q = detail::mean(s1.q());
        const double eh = detail::rel(h, exact.h), eq = detail::rel(q, exact.q);
        const double h0 = detail::mean(s0.h()), q0 = detail::mean(s0.q());
        const double u0 = q0 / h0, u1 = q / h;
        const double k0 = 0.5 * h0 * u0 * u0, k1 = 0.5 * h * u1 * u1;
        const std::array<int, 3> got{detail::sign_with_deadband(q - q0, std::abs(q0)),
                                     detail::sign_with_deadband(u1 - u0, std::abs(u0)),
                                     detail::sign_with_deadband(k1 - k0, std::abs(k0))};
        const auto label = classify_regime(alpha);
        const bool good = eh <= tol::closed_form_rel && eq <= tol::closed_form_rel && got == label.signs;
        ok = ok && good;
        d += (d.empty() ? "" : "; ") + std::string("alpha=") + detail::fmt("%g", alpha) + " h " +
             detail::fmt("%.1e", eh) + " q " + detail::fmt("%.1e", eq) + (got == label.signs ? " signs ok" : " signs BAD") +
             (good ? "" : " FAIL");
    }
    r.passed = ok;
    r.detail = d;
    return r;
}

/// Mass balance in the periodic rain run and in the flume.
inline Result mass_audit_check()
{
    Result r{5, "mass audit", false, "", 0.0, 60.0};
    const auto periodic = run(build("uniform_rain_alpha", {{"alpha", "1"}}));
    const auto pe = mass_audit(periodic.mass_series());
    const double pmass = periodic.diagnostics.back().mass;
    const double prel = *std::max_element(pe.begin(), pe.end()) / pmass;

    const auto& flume = detail::flume_run();
    const auto fe = flume.mass_series();
    double worst = 0.0;
    for (const auto& e : fe) {
        const double err = std::abs(e.mass - fe.front().mass - e.source_input + e.boundary_outflow - e.clamp_correction);
        worst = std::max(worst, err);
    }
    const double frel = worst / detail::rained_mass(flume.scenario);
    r.passed = prel <= tol::periodic_mass_rel && frel <= tol::flume_mass_rel;
    r.detail = "periodic " + detail::fmt("%.2e", prel) + ", flume " + detail::fmt("%.2e", frel) + " (relative)";
    return r;
}

/// Entropy decays cell by cell while water drains; the kinetic-energy trend
/// of the uniform-rain problem changes sign across alpha = 1/2.
inline Result entropy_signs()
{
    Result r{6, "entropy sign conditions", false, "", 0.0, 60.0};
    long checked = 0, violations = 0, clamps = 0;
    double worst = -std::numeric_limits<double>::infinity();
    run(build("drain"), [&](const StepEvent& e) {
        clamps += e.report.clamped_cells;
        for (const auto& c : *e.entropy) {
            if (!c.wet) continue;
            ++checked;
            if (c.expected != EntropySign::nonpositive || c.violated()) ++violations;
            worst = std::max(worst, c.lhs / c.tolerance);
        }
    });

    auto kinetic_trend = [](double alpha) {
        int pos = 0, neg = 0;
        run(build("uniform_rain_alpha", {{"alpha", detail::fmt("%.17g", alpha)}}), [&](const StepEvent& e) {
            const double dk = total_kinetic_energy(*e.after, 1.0) - total_kinetic_energy(*e.before, 1.0);
            (dk > 0.0 ? pos : neg) += 1;
        });
        return std::pair{pos, neg};
    };
    const auto below = kinetic_trend(0.5 - tol::alpha_flip_offset);
    const auto above = kinetic_trend(0.5 + tol::alpha_flip_offset);
    const bool flip = below.second == 0 && below.first > 0 && above.first == 0 && above.second > 0;

    r.passed = violations == 0 && clamps == 0 && checked > 0 && flip;
    r.detail = "drain: " + std::to_string(checked) + " cell-steps, " + std::to_string(violations) +
               " violations, max lhs/tol " + detail::fmt("%.3f", worst) + ", clamps " + std::to_string(clamps) +
               "; dK>0 steps at alpha=0.45: " + std::to_string(below.first) + "/" +
               std::to_string(below.first + below.second) + ", at 0.55: " + std::to_string(above.first) + "/" +
               std::to_string(above.first + above.second);
    return r;
}

/// Downstream hydrograph: monotone rise, plateau at the rain balance, recession.
inline Result flume_hydrograph()
{
    Result r{7, "flume hydrograph shape", false, "", 0.0, 120.0};
    const auto& out = detail::flume_run();
    const double plateau = 50.0 * mm_per_hour * 3.95;

    // 1 s window means of the downstream discharge. The rise runs from the
    // start of the rain to the first window that reaches the plateau band.
    std::map<long, std::pair<double, int>> bins;
    for (const auto& p : out.probes) {
        auto& b = bins[static_cast<long>(std::floor(p.t))];
        b.first += p.q;
        b.second += 1;
    }
    const double rain_start = out.scenario.sources.rain.front().t_begin;
    double prev = -1.0, worst_dip = 0.0, peak = 0.0;
    long rise_end = -1;
    for (const auto& [w, b] : bins) {
        const double m = b.first / b.second;
        peak = std::max(peak, m);
        if (w < static_cast<long>(std::floor(rain_start)) || rise_end >= 0) continue;
        if (prev >= 0.0 && m < prev) worst_dip = std::max(worst_dip, (prev - m) / plateau);
        prev = m;
        if (m >= (1.0 - tol::plateau_band) * plateau) rise_end = w;
    }
    const bool rise_ok = rise_end >= 0 && worst_dip <= tol::rise_slack;

    double band = 0.0;
    for (const auto& p : out.probes)
        if (p.t >= 80.0 && p.t <= 125.0) band = std::max(band, std::abs(p.q - plateau) / plateau);
    const double last = out.probes.back().q / plateau;

    r.passed = rise_ok && band <= tol::plateau_band && last < tol::recession_fraction;
    r.detail = "rise to " + std::to_string(rise_end + 1) + " s, max dip " + detail::fmt("%.2e", worst_dip) +
               " of plateau, window peak " + detail::fmt("%.3f", peak / plateau) + " x plateau, plateau dev " + detail::fmt("%.2e", band) +
               ", q(250)/plateau " + detail::fmt("%.2e", last);
    return r;
}

/// Extended (alpha = 1, no infiltration) against legacy, step by step.
inline Result legacy_equivalence()
{
    Result r{8, "legacy equivalence", false, "", 0.0, 60.0};
    std::vector<State> ext, leg;
    run(build("uniform_rain_alpha", {{"alpha", "1"}}), [&](const StepEvent& e) { ext.push_back(*e.after); });
    run(build("uniform_rain_alpha", {{"alpha", "1"}, {"model", "legacy"}}),
        [&](const StepEvent& e) { leg.push_back(*e.after); });
    double worst = 0.0;
    const std::size_t steps = std::min(ext.size(), leg.size());
    for (std::size_t n = 0; n < steps; ++n)
        for (int i = 0; i < ext[n].size(); ++i)
            worst = std::max({worst, std::abs(ext[n].h(i) - leg[n].h(i)), std::abs(ext[n].q(i) - leg[n].q(i))});
    r.passed = ext.size() == leg.size() && worst <= tol::legacy_match;
    r.detail = "steps " + std::to_string(ext.size()) + " vs " + std::to_string(leg.size()) + ", max |diff| " +
               detail::fmt("%.2e", worst);
    return r;
}

/// Time after the peak from which the probe depth stays below a fraction of
/// the peak up to the end of the run; empty if it is still above at the end.
/// With `first` set, the first downward crossing instead.
inline std::optional<double> recession_time(const RunOutputs& out, double fraction, bool first = false)
{
    double peak = 0.0;
    std::size_t at = 0;
    for (std::size_t k = 0; k < out.probes.size(); ++k)
        if (out.probes[k].h > peak) {
            peak = out.probes[k].h;
            at = k;
        }
    if (peak <= 0.0) return std::nullopt;
    std::optional<double> below;
    for (std::size_t k = at; k < out.probes.size(); ++k) {
        if (out.probes[k].h >= fraction * peak)
            below.reset();
        else if (!below) {
            below = out.probes[k].t;
            if (first) return below;
        }
    }
    return below;
}

/// Recession at the outlet of the single cascade slows with alpha.
inline Result cascade_ordering()
{
    Result r{9, "cascade recession ordering", false, "", 0.0, 180.0};
    std::vector<std::optional<double>> times;
    std::string d;
    for (const char* a : {"0", "1", "5"}) {
        const auto out = run(build("cascade_single", {{"alpha", a}, {"rain_duration", "20"}}));
        times.push_back(recession_time(out, tol::recession_level));
        const auto crossing = recession_time(out, tol::recession_level, true);
        d += std::string(d.empty() ? "" : ", ") + "alpha=" + a + ": " +
             (times.back() ? detail::fmt("%.3f s", *times.back()) : std::string("none by T")) +
             (crossing ? detail::fmt(" (first crossing %.3f s)", *crossing) : std::string());
    }
    // A run that never recedes counts as later than any that does.
    auto key = [](const std::optional<double>& t) { return t ? *t : std::numeric_limits<double>::infinity(); };
    bool ok = times.front().has_value();
    for (std::size_t k = 1; k < times.size(); ++k) ok = ok && key(times[k]) >= key(times[k - 1]);
    r.passed = ok;
    r.detail = d;
    return r;
}

/// The dry-start flume finishes with admissible states and negligible clamping.
inline Result dry_start()
{
    Result r{10, "dry-start robustness", false, "", 0.0, 120.0};
    bool finite = true;
    double hmin = 0.0, clamp = 0.0;
    try {
        const auto& out = detail::flume_run();
        for (const auto& p : out.probes) {
            finite = finite && std::isfinite(p.h) && std::isfinite(p.q);
            hmin = std::min(hmin, p.h);
        }
        for (const auto& s : out.snapshots)
            for (int i = 0; i < s.state.size(); ++i) hmin = std::min(hmin, s.state.h(i));
        clamp = out.diagnostics.back().clamp_correction / detail::rained_mass(out.scenario);
        r.passed = finite && hmin >= 0.0 && clamp <= tol::clamp_fraction && out.final_time == out.scenario.final_time;
        r.detail = "completed " + std::to_string(out.steps) + " steps, min h " + detail::fmt("%.2e", hmin) +
                   ", clamp/rained " + detail::fmt("%.2e", clamp);
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("run failed: ") + e.what();
    }
    return r;
}

inline const std::vector<std::function<Result()>>& criteria()
{
    static const std::vector<std::function<Result()>> all{kinetic_moments,  lake_at_rest,       filling_lake,
                                                          closed_form,      mass_audit_check,   entropy_signs,
                                                          flume_hydrograph, legacy_equivalence, cascade_ordering,
                                                          dry_start};
    return all;
}

/// Runs criterion `id` (1-based), timing it; the time limit is part of the verdict.
inline Result evaluate(int id)
{
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
        r = criteria().at(static_cast<std::size_t>(id - 1))();
    } catch (const std::exception& e) {
        r = Result{id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what(), 0.0, 0.0};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.time_limit > 0.0 && r.seconds > r.time_limit) {
        r.passed = false;
        r.detail += "; over time limit " + detail::fmt("%.0f s", r.time_limit);
    }
    return r;
}

inline std::string report_line(const Result& r)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, " (%.2f s)", r.seconds);
    return "criterion " + std::to_string(r.id) + ": " + (r.passed ? "PASS" : "FAIL") + " - " + r.title + " - " +
           r.detail + buf;
}

} // namespace rainsw::acceptance
