// Built-in scenarios: the uniform-rain alpha study, the rained flume, the
// single and triple cascades, and small canonical states for property tests.
#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"

namespace rainsw {

using Overrides = std::map<std::string, std::string>;

/// mm/h to m/s.
inline constexpr double mm_per_hour = 1.0 / 3.6e6;

namespace detail {

inline double parse_number(const std::string& key, const std::string& text)
{
    double v = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        throw std::invalid_argument("override " + key + ": not a number: '" + text + "'");
    return v;
}

inline int parse_count(const std::string& key, const std::string& text)
{
    int v = 0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) throw std::invalid_argument("override " + key + ": not an integer: '" + text + "'");
    return v;
}

inline ModelVariant parse_model(const std::string& text)
{
    if (text == "extended") return ModelVariant::extended;
    if (text == "legacy") return ModelVariant::legacy;
    throw std::invalid_argument("model must be 'extended' or 'legacy', got '" + text + "'");
}

// Reads overrides by key and remembers which ones were consumed.
class OverrideReader {
public:
    explicit OverrideReader(const Overrides& o) : o_(o) {}

    double number(const std::string& key, double fallback)
    {
        used_.insert(key);
        const auto it = o_.find(key);
        return it == o_.end() ? fallback : parse_number(key, it->second);
    }
    int count(const std::string& key, int fallback)
    {
        used_.insert(key);
        const auto it = o_.find(key);
        return it == o_.end() ? fallback : parse_count(key, it->second);
    }
    ModelVariant model(ModelVariant fallback)
    {
        used_.insert("model");
        const auto it = o_.find("model");
        return it == o_.end() ? fallback : parse_model(it->second);
    }
    void finish(const std::string& scenario) const
    {
        for (const auto& [k, v] : o_)
            if (!used_.count(k)) throw std::invalid_argument("unknown parameter '" + k + "' for scenario " + scenario);
    }

private:
    const Overrides& o_;
    std::set<std::string> used_;
};

// Keys every built-in accepts.
inline void apply_common(Scenario& s, OverrideReader& r)
{
    s.cells = r.count("cells", s.cells);
    s.cfl = r.number("cfl", s.cfl);
    s.final_time = r.number("final_time", s.final_time);
    s.gravity = r.number("gravity", s.gravity);
    s.dry_height = r.number("dry_height", s.dry_height);
    s.diagnostics_every = r.count("diagnostics_every", s.diagnostics_every);
    s.sample_interval = r.number("sample_interval", s.sample_interval);
    s.friction.alpha = r.number("alpha", s.friction.alpha);
    s.friction.kappa_lam = r.number("kappa_lam", s.friction.kappa_lam);
    s.friction.kappa_tur = r.number("kappa_tur", s.friction.kappa_tur);
    s.friction.model = r.model(s.friction.model);
}

// Box on [t0, t1) x [0, L), cut to the run window; empty boxes are dropped.
inline std::vector<SourceBox> box_list(double t0, double t1, double x0, double x1, double rate, double final_time)
{
    t1 = std::min(t1, final_time);
    if (!(t0 < t1) || rate == 0.0) return {};
    return {SourceBox{t0, t1, x0, x1, rate}};
}

// Non-flat bed for the steady-state checks: a bump and a dip inside [0, 1].
inline BedTable bumpy_bed()
{
    return BedTable{{{0.0, 0.0}, {0.2, 0.1}, {0.35, 0.4}, {0.5, 0.15}, {0.65, -0.1}, {0.8, 0.05}, {1.0, 0.0}}};
}

} // namespace detail

inline const std::vector<std::string>& scenario_names()
{
    static const std::vector<std::string> names{"uniform_rain_alpha", "flume",       "cascade_single", "cascade_triple",
                                                "lake_at_rest",       "filling_lake", "drain"};
    return names;
}

inline bool is_scenario_name(const std::string& name)
{
    const auto& n = scenario_names();
    return std::find(n.begin(), n.end(), name) != n.end();
}

/// Builds a named scenario. Overrides are given as text and checked against
/// the keys the scenario knows; the result is validated.
inline Scenario build(const std::string& name, const Overrides& overrides = {})
{
    detail::OverrideReader r(overrides);
    Scenario s;
    s.name = name;
    s.cfl = 0.95;

    if (name == "uniform_rain_alpha") {
        s.length = 10.0;
        s.cells = 1000;
        s.final_time = 1.0;
        s.boundary = {Boundary::periodic, Boundary::periodic};
        s.initial = UniformInitial{1.0, 1.0};
        s.topography = FlatBed{0.0};
        s.friction.alpha = 1.0;
        detail::apply_common(s, r);
        const double rain = r.number("rain", 1.0);
        s.sources.rain = detail::box_list(0.0, s.final_time, 0.0, s.length, rain, s.final_time);
        s.probes = {r.number("probe", 5.0)};
    } else if (name == "flume") {
        s.length = 4.0;
        s.cells = 1000;
        s.final_time = 250.0;
        s.boundary = {Boundary::wall, Boundary::outflow};
        s.initial = UniformInitial{0.0, 0.0};
        s.topography = SlopedBed{0.2, -1.0 / 20.0};
        s.friction.alpha = 1.0;
        s.diagnostics_every = 100;
        detail::apply_common(s, r);
        const double rain = r.number("rain", 50.0 * mm_per_hour);
        const double start = r.number("rain_start", 5.0);
        const double stop = r.number("rain_end", 125.0);
        const double reach = r.number("rain_reach", 3.95);
        s.sources.rain = detail::box_list(start, stop, 0.0, reach, rain, s.final_time);
        s.probes = {r.number("probe", 3.98)};
    } else if (name == "cascade_single" || name == "cascade_triple") {
        s.length = 12.0;
        s.cells = 1000;
        s.final_time = 40.0;
        s.boundary = {Boundary::wall, Boundary::outflow};
        s.initial = UniformInitial{0.0, 0.0};
        if (name == "cascade_single")
            s.topography = SlopedBed{0.06, -0.005};
        else
            s.topography = PiecewiseBed{{{0.0, 4.0, 0.06, -0.006}, {4.0, 8.0, 0.056, -0.005}, {8.0, 12.0, 0.048, -0.004}}};
        s.friction.alpha = 0.0;
        s.diagnostics_every = 10;
        s.sample_interval = 0.05;
        detail::apply_common(s, r);
        const double rain = r.number("rain", 0.001 * mm_per_hour);
        const double duration = r.number("rain_duration", 20.0);
        s.sources.rain = detail::box_list(0.0, duration, 0.0, s.length, rain, s.final_time);
        s.probes = {r.number("probe", 11.994)};
        if (duration > 0.0 && duration <= s.final_time) s.snapshots = {duration};
    } else if (name == "lake_at_rest" || name == "filling_lake") {
        s.length = 1.0;
        s.cells = 200;
        s.final_time = 1.0;
        s.boundary = {Boundary::wall, Boundary::wall};
        s.topography = detail::bumpy_bed();
        detail::apply_common(s, r);
        s.initial = SurfaceInitial{r.number("level", 1.0), 0.0};
        if (name == "filling_lake")
            s.sources.rain = detail::box_list(0.0, s.final_time, 0.0, s.length, r.number("rain", 1e-3), s.final_time);
        s.probes = {r.number("probe", 0.5)};
    } else if (name == "drain") {
        s.length = 1.0;
        s.cells = 200;
        s.final_time = 1.0;
        s.boundary = {Boundary::periodic, Boundary::periodic};
        s.topography = FlatBed{0.0};
        detail::apply_common(s, r);
        s.initial = WaveInitial{r.number("mean", 1.0), r.number("amplitude", 0.1), r.number("discharge", 0.5)};
        s.sources.infiltration =
            detail::box_list(0.0, s.final_time, 0.0, s.length, r.number("infiltration", 1e-3), s.final_time);
        s.probes = {r.number("probe", 0.5)};
    } else {
        throw std::invalid_argument("unknown scenario '" + name + "'");
    }
    r.finish(name);
    s.validate();
    return s;
}

} // namespace rainsw
