// Scenario files and result files.
//
// A scenario file is a JSON object. An optional "scenario" names a built-in
// to start from and "parameters" passes that built-in's overrides; the
// sections grid, topography, initial, boundary, sources, friction, run and
// output then replace individual fields. Unknown keys are errors.
//
//   {
//     "scenario": "cascade_single",
//     "parameters": {"alpha": 5},
//     "output": {"probes": [6.0, 11.994]}
//   }
#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "core.hpp"
#include "diagnostics.hpp"
#include "scenarios.hpp"
#include "stepper.hpp"

namespace rainsw {

/// Malformed scenario text. `line` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line)
    {
    }
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

namespace io_detail {

using json = nlohmann::json;

inline std::size_t line_of(const std::string& text, std::size_t byte)
{
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

// Checks that every key of `obj` is in `allowed`.
inline void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed)
{
    if (!obj.is_object()) throw std::invalid_argument(where + " must be an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!ok.count(it.key())) throw std::invalid_argument("unknown key '" + where + "." + it.key() + "'");
}

inline double number(const json& obj, const char* key, double fallback, const std::string& where)
{
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number()) throw std::invalid_argument(where + "." + key + " must be a number");
    return v.get<double>();
}

inline int integer(const json& obj, const char* key, int fallback, const std::string& where)
{
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) throw std::invalid_argument(where + "." + key + " must be an integer");
    return v.get<int>();
}

inline std::string text(const json& obj, const char* key, const std::string& fallback, const std::string& where)
{
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_string()) throw std::invalid_argument(where + "." + key + " must be a string");
    return v.get<std::string>();
}

inline std::vector<double> numbers(const json& obj, const char* key, const std::vector<double>& fallback,
                                   const std::string& where)
{
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_array()) throw std::invalid_argument(where + "." + key + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw std::invalid_argument(where + "." + key + " must be an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

inline Boundary boundary_from(const std::string& s)
{
    if (s == "periodic") return Boundary::periodic;
    if (s == "wall") return Boundary::wall;
    if (s == "outflow") return Boundary::outflow;
    throw std::invalid_argument("boundary must be periodic, wall or outflow, got '" + s + "'");
}

inline const char* boundary_name(Boundary b)
{
    switch (b) {
    case Boundary::periodic: return "periodic";
    case Boundary::wall: return "wall";
    default: return "outflow";
    }
}

inline const char* model_name(ModelVariant m) { return m == ModelVariant::legacy ? "legacy" : "extended"; }

inline TopographySpec topography_from(const json& t)
{
    const std::string w = "topography";
    const std::string type = text(t, "type", "", w);
    if (type == "flat") {
        only_keys(t, w, {"type", "level"});
        return FlatBed{number(t, "level", 0.0, w)};
    }
    if (type == "sloped") {
        only_keys(t, w, {"type", "z0", "slope"});
        return SlopedBed{number(t, "z0", 0.0, w), number(t, "slope", 0.0, w)};
    }
    if (type == "table") {
        only_keys(t, w, {"type", "points"});
        BedTable bed;
        for (const auto& p : t.at("points")) {
            if (!p.is_array() || p.size() != 2) throw std::invalid_argument("topography.points entries must be [x, z]");
            bed.points.push_back({p[0].get<double>(), p[1].get<double>()});
        }
        return bed;
    }
    if (type == "piecewise") {
        only_keys(t, w, {"type", "pieces"});
        PiecewiseBed bed;
        for (const auto& p : t.at("pieces")) {
            only_keys(p, w + ".pieces", {"x_begin", "x_end", "z0", "slope"});
            const std::string pw = w + ".pieces";
            bed.pieces.push_back({number(p, "x_begin", 0.0, pw), number(p, "x_end", 0.0, pw), number(p, "z0", 0.0, pw),
                                  number(p, "slope", 0.0, pw)});
        }
        return bed;
    }
    if (type == "sampled") {
        only_keys(t, w, {"type", "values"});
        return SampledBed{numbers(t, "values", {}, w)};
    }
    throw std::invalid_argument("topography.type must be flat, sloped, table, piecewise or sampled");
}

inline json topography_to(const TopographySpec& spec)
{
    return std::visit(
        [](const auto& b) -> json {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, FlatBed>) {
                return {{"type", "flat"}, {"level", b.level}};
            } else if constexpr (std::is_same_v<T, SlopedBed>) {
                return {{"type", "sloped"}, {"z0", b.z0}, {"slope", b.slope}};
            } else if constexpr (std::is_same_v<T, BedTable>) {
                json pts = json::array();
                for (const auto& p : b.points) pts.push_back({p.x, p.z});
                return {{"type", "table"}, {"points", pts}};
            } else if constexpr (std::is_same_v<T, PiecewiseBed>) {
                json ps = json::array();
                for (const auto& p : b.pieces)
                    ps.push_back({{"x_begin", p.x_begin}, {"x_end", p.x_end}, {"z0", p.z0}, {"slope", p.slope}});
                return {{"type", "piecewise"}, {"pieces", ps}};
            } else {
                return {{"type", "sampled"}, {"values", b.values}};
            }
        },
        spec);
}

inline InitialSpec initial_from(const json& t)
{
    const std::string w = "initial";
    const std::string type = text(t, "type", "", w);
    if (type == "uniform") {
        only_keys(t, w, {"type", "h", "q"});
        return UniformInitial{number(t, "h", 0.0, w), number(t, "q", 0.0, w)};
    }
    if (type == "surface") {
        only_keys(t, w, {"type", "level", "q"});
        return SurfaceInitial{number(t, "level", 0.0, w), number(t, "q", 0.0, w)};
    }
    if (type == "wave") {
        only_keys(t, w, {"type", "mean", "amplitude", "q"});
        return WaveInitial{number(t, "mean", 1.0, w), number(t, "amplitude", 0.0, w), number(t, "q", 0.0, w)};
    }
    throw std::invalid_argument("initial.type must be uniform, surface or wave");
}

inline json initial_to(const InitialSpec& spec)
{
    return std::visit(
        [](const auto& i) -> json {
            using T = std::decay_t<decltype(i)>;
            if constexpr (std::is_same_v<T, UniformInitial>)
                return {{"type", "uniform"}, {"h", i.h}, {"q", i.q}};
            else if constexpr (std::is_same_v<T, SurfaceInitial>)
                return {{"type", "surface"}, {"level", i.level}, {"q", i.q}};
            else
                return {{"type", "wave"}, {"mean", i.mean}, {"amplitude", i.amplitude}, {"q", i.q}};
        },
        spec);
}

inline std::vector<SourceBox> boxes_from(const json& arr, const std::string& where)
{
    if (!arr.is_array()) throw std::invalid_argument(where + " must be an array of boxes");
    std::vector<SourceBox> out;
    for (const auto& b : arr) {
        only_keys(b, where, {"t_begin", "t_end", "x_begin", "x_end", "rate"});
        out.push_back({number(b, "t_begin", 0.0, where), number(b, "t_end", 0.0, where), number(b, "x_begin", 0.0, where),
                       number(b, "x_end", 0.0, where), number(b, "rate", 0.0, where)});
    }
    return out;
}

inline json boxes_to(const std::vector<SourceBox>& boxes)
{
    json arr = json::array();
    for (const auto& b : boxes)
        arr.push_back({{"t_begin", b.t_begin}, {"t_end", b.t_end}, {"x_begin", b.x_begin}, {"x_end", b.x_end},
                       {"rate", b.rate}});
    return arr;
}

inline std::string override_text(const json& v, const std::string& key)
{
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return v.dump();
    throw std::invalid_argument("parameters." + key + " must be a number or a string");
}

inline Scenario scenario_from(const json& doc)
{
    only_keys(doc, "scenario file",
              {"scenario", "name", "parameters", "grid", "topography", "initial", "boundary", "sources", "friction",
               "run", "output"});
    Scenario s;
    Overrides overrides;
    if (doc.contains("parameters")) {
        const auto& p = doc.at("parameters");
        if (!p.is_object()) throw std::invalid_argument("parameters must be an object");
        for (auto it = p.begin(); it != p.end(); ++it) overrides[it.key()] = override_text(it.value(), it.key());
    }
    if (doc.contains("scenario")) {
        s = build(text(doc, "scenario", "", "scenario file"), overrides);
    } else if (!overrides.empty()) {
        throw std::invalid_argument("parameters need a built-in scenario to apply to");
    }
    s.name = text(doc, "name", s.name, "scenario file");
    if (doc.contains("grid")) {
        const auto& g = doc.at("grid");
        only_keys(g, "grid", {"length", "cells"});
        s.length = number(g, "length", s.length, "grid");
        s.cells = integer(g, "cells", s.cells, "grid");
    }
    if (doc.contains("topography")) s.topography = topography_from(doc.at("topography"));
    if (doc.contains("initial")) s.initial = initial_from(doc.at("initial"));
    if (doc.contains("boundary")) {
        const auto& b = doc.at("boundary");
        only_keys(b, "boundary", {"left", "right"});
        if (b.contains("left")) s.boundary.left = boundary_from(text(b, "left", "", "boundary"));
        if (b.contains("right")) s.boundary.right = boundary_from(text(b, "right", "", "boundary"));
    }
    if (doc.contains("sources")) {
        const auto& src = doc.at("sources");
        only_keys(src, "sources", {"rain", "infiltration"});
        if (src.contains("rain")) s.sources.rain = boxes_from(src.at("rain"), "sources.rain");
        if (src.contains("infiltration"))
            s.sources.infiltration = boxes_from(src.at("infiltration"), "sources.infiltration");
    }
    if (doc.contains("friction")) {
        const auto& f = doc.at("friction");
        only_keys(f, "friction", {"alpha", "kappa_lam", "kappa_tur", "model"});
        s.friction.alpha = number(f, "alpha", s.friction.alpha, "friction");
        s.friction.kappa_lam = number(f, "kappa_lam", s.friction.kappa_lam, "friction");
        s.friction.kappa_tur = number(f, "kappa_tur", s.friction.kappa_tur, "friction");
        if (f.contains("model")) s.friction.model = detail::parse_model(text(f, "model", "", "friction"));
    }
    if (doc.contains("run")) {
        const auto& r = doc.at("run");
        only_keys(r, "run", {"final_time", "cfl", "gravity", "dry_height", "sample_interval"});
        s.final_time = number(r, "final_time", s.final_time, "run");
        s.cfl = number(r, "cfl", s.cfl, "run");
        s.gravity = number(r, "gravity", s.gravity, "run");
        s.dry_height = number(r, "dry_height", s.dry_height, "run");
        s.sample_interval = number(r, "sample_interval", s.sample_interval, "run");
    }
    if (doc.contains("output")) {
        const auto& o = doc.at("output");
        only_keys(o, "output", {"probes", "snapshots", "diagnostics_every"});
        s.probes = numbers(o, "probes", s.probes, "output");
        s.snapshots = numbers(o, "snapshots", s.snapshots, "output");
        s.diagnostics_every = integer(o, "diagnostics_every", s.diagnostics_every, "output");
    }
    s.validate();
    return s;
}

} // namespace io_detail

/// Parses scenario text. Syntax errors raise ParseError with the line;
/// bad values raise ParseError naming the key.
inline Scenario parse_scenario(const std::string& text)
{
    io_detail::json doc;
    try {
        doc = io_detail::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what(), io_detail::line_of(text, e.byte == 0 ? 0 : e.byte - 1));
    }
    try {
        return io_detail::scenario_from(doc);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(e.what(), 0);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), 0);
    }
}

inline Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

/// Complete, self-contained text for a scenario; parse_scenario inverts it.
inline std::string serialize_scenario(const Scenario& s)
{
    using io_detail::json;
    json doc;
    doc["name"] = s.name;
    doc["grid"] = {{"length", s.length}, {"cells", s.cells}};
    doc["topography"] = io_detail::topography_to(s.topography);
    doc["initial"] = io_detail::initial_to(s.initial);
    doc["boundary"] = {{"left", io_detail::boundary_name(s.boundary.left)},
                       {"right", io_detail::boundary_name(s.boundary.right)}};
    doc["sources"] = {{"rain", io_detail::boxes_to(s.sources.rain)},
                      {"infiltration", io_detail::boxes_to(s.sources.infiltration)}};
    doc["friction"] = {{"alpha", s.friction.alpha},
                       {"kappa_lam", s.friction.kappa_lam},
                       {"kappa_tur", s.friction.kappa_tur},
                       {"model", io_detail::model_name(s.friction.model)}};
    doc["run"] = {{"final_time", s.final_time},
                  {"cfl", s.cfl},
                  {"gravity", s.gravity},
                  {"dry_height", s.dry_height},
                  {"sample_interval", s.sample_interval}};
    doc["output"] = {{"probes", s.probes}, {"snapshots", s.snapshots}, {"diagnostics_every", s.diagnostics_every}};
    return doc.dump(2) + "\n";
}

/// 17 significant digits, enough to read back the same double.
inline std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// File-name friendly time label: 20 -> "20", 2.5 -> "2.5".
inline std::string time_label(double t)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", t);
    return buf;
}

namespace io_detail {

inline std::ofstream open_out(const std::filesystem::path& p)
{
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    return f;
}

inline void finish(std::ofstream& f, const std::filesystem::path& p)
{
    f.flush();
    if (!f) throw std::runtime_error("write failed: " + p.string());
}

} // namespace io_detail

/// Writes probes.csv, one snapshot_<t>.csv per snapshot and diagnostics.csv.
inline std::vector<std::filesystem::path> write_outputs(const RunOutputs& out, const std::filesystem::path& dir)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
    std::vector<fs::path> written;
    const auto& n = format_number;

    {
        const auto p = dir / "probes.csv";
        auto f = io_detail::open_out(p);
        f << "t,probe_x,h,q,u\n";
        for (const auto& r : out.probes) f << n(r.t) << ',' << n(r.x) << ',' << n(r.h) << ',' << n(r.q) << ',' << n(r.u) << '\n';
        io_detail::finish(f, p);
        written.push_back(p);
    }
    const double g = out.scenario.gravity;
    for (const auto& snap : out.snapshots) {
        const auto p = dir / ("snapshot_" + time_label(snap.t) + ".csv");
        auto f = io_detail::open_out(p);
        f << "x,Z,h,q,u,E,psi\n";
        const State& s = snap.state;
        for (int i = 0; i < s.size(); ++i) {
            const auto k = static_cast<std::size_t>(i);
            const double h = s.h(i), u = s.velocity(i), z = out.bed[k];
            f << n(out.x[k]) << ',' << n(z) << ',' << n(h) << ',' << n(s.q(i)) << ',' << n(u) << ','
              << n(s.is_wet(i) ? entropy(h, u, g) : 0.0) << ',' << n(total_head(h, u, z, g)) << '\n';
        }
        io_detail::finish(f, p);
        written.push_back(p);
    }
    {
        const auto p = dir / "diagnostics.csv";
        auto f = io_detail::open_out(p);
        f << "t,dt,mass,entropy,kinetic,source_input,boundary_outflow,clamp_correction,audit_error,"
             "entropy_violations,clamped_cells\n";
        for (const auto& d : out.diagnostics)
            f << n(d.t) << ',' << n(d.dt) << ',' << n(d.mass) << ',' << n(d.entropy) << ',' << n(d.kinetic) << ','
              << n(d.source_input) << ',' << n(d.boundary_outflow) << ',' << n(d.clamp_correction) << ','
              << n(d.audit_error) << ',' << d.entropy_violations << ',' << d.clamped_cells << '\n';
        io_detail::finish(f, p);
        written.push_back(p);
    }
    return written;
}

} // namespace rainsw
