// Grid, state, topography, sources and scenario types shared by every module.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace rainsw {

inline constexpr double default_gravity = 9.81;
inline constexpr double default_cfl = 0.95;
inline constexpr double default_dry_height = 1e-10;

/// Raised when a simulation cannot proceed (non-finite values, nothing to evolve).
class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message)
{
    if (!condition) throw std::invalid_argument(message);
}

inline bool finite(double v) { return std::isfinite(v); }

} // namespace detail

// ---------------------------------------------------------------------------
// Grid
// ---------------------------------------------------------------------------

/// Uniform decomposition of [0, L] into N cells of width dx = L / N.
class Grid {
public:
    Grid(double length, int cells) : length_(length), cells_(cells)
    {
        detail::require(detail::finite(length) && length > 0.0, "grid length must be positive");
        detail::require(cells >= 2, "grid needs at least two cells");
        dx_ = length_ / cells_;
    }

    double length() const { return length_; }
    int size() const { return cells_; }
    double dx() const { return dx_; }
    double center(int i) const { return (i + 0.5) * dx_; }

    std::vector<double> centers() const
    {
        std::vector<double> x(static_cast<std::size_t>(cells_));
        for (int i = 0; i < cells_; ++i) x[static_cast<std::size_t>(i)] = center(i);
        return x;
    }

    /// Index of the cell containing x; x == L belongs to the last cell.
    int locate(double x) const
    {
        detail::require(x >= 0.0 && x <= length_, "location outside the domain");
        const int i = static_cast<int>(std::floor(x / dx_));
        return std::clamp(i, 0, cells_ - 1);
    }

private:
    double length_;
    int cells_;
    double dx_;
};

inline Grid build_grid(double length, int cells) { return Grid(length, cells); }

// ---------------------------------------------------------------------------
// State
// ---------------------------------------------------------------------------

/// Cell heights and discharges at one time level.
///
/// Construction normalises dry cells (h <= dry_height) to zero discharge and
/// rejects negative or non-finite heights, so every State is admissible.
class State {
public:
    State() = default;

    State(std::vector<double> h, std::vector<double> q, double dry_height = default_dry_height)
        : h_(std::move(h)), q_(std::move(q)), dry_(dry_height)
    {
        detail::require(h_.size() == q_.size(), "height and discharge arrays differ in length");
        detail::require(dry_ > 0.0, "dry threshold must be positive");
        for (std::size_t i = 0; i < h_.size(); ++i) {
            detail::require(detail::finite(h_[i]) && h_[i] >= 0.0,
                            "height must be finite and non-negative at cell " + std::to_string(i));
            detail::require(detail::finite(q_[i]), "discharge must be finite at cell " + std::to_string(i));
            if (h_[i] <= dry_) q_[i] = 0.0;
        }
    }

    int size() const { return static_cast<int>(h_.size()); }
    std::span<const double> h() const { return h_; }
    std::span<const double> q() const { return q_; }
    double h(int i) const { return h_[static_cast<std::size_t>(i)]; }
    double q(int i) const { return q_[static_cast<std::size_t>(i)]; }
    double dry_height() const { return dry_; }

    bool is_wet(int i) const { return h(i) > dry_; }

    /// u = q / h on wet cells, 0 on dry cells.
    double velocity(int i) const { return is_wet(i) ? q(i) / h(i) : 0.0; }

    /// Total water volume per unit width, summed in index order.
    double mass(double dx) const
    {
        double total = 0.0;
        for (double v : h_) total += v;
        return total * dx;
    }

    bool operator==(const State&) const = default;

private:
    std::vector<double> h_;
    std::vector<double> q_;
    double dry_ = default_dry_height;
};

// ---------------------------------------------------------------------------
// Topography
// ---------------------------------------------------------------------------

struct FlatBed {
    double level = 0.0;
    bool operator==(const FlatBed&) const = default;
};

/// Z(x) = z0 + slope * x
struct SlopedBed {
    double z0 = 0.0;
    double slope = 0.0;
    bool operator==(const SlopedBed&) const = default;
};

struct BedPoint {
    double x = 0.0;
    double z = 0.0;
    bool operator==(const BedPoint&) const = default;
};

/// Piecewise-linear interpolation through strictly increasing breakpoints,
/// held constant beyond the first and last point.
struct BedTable {
    std::vector<BedPoint> points;
    bool operator==(const BedTable&) const = default;
};

/// Z(x) = z0 + slope * x on [x_begin, x_end).
struct BedPiece {
    double x_begin = 0.0;
    double x_end = 0.0;
    double z0 = 0.0;
    double slope = 0.0;
    double at(double x) const { return z0 + slope * x; }
    bool operator==(const BedPiece&) const = default;
};

/// Contiguous affine pieces; must agree at every shared breakpoint.
struct PiecewiseBed {
    std::vector<BedPiece> pieces;
    bool operator==(const PiecewiseBed&) const = default;
};

/// Explicit per-cell values (length must equal the cell count).
struct SampledBed {
    std::vector<double> values;
    bool operator==(const SampledBed&) const = default;
};

using TopographySpec = std::variant<FlatBed, SlopedBed, BedTable, PiecewiseBed, SampledBed>;

inline constexpr double breakpoint_tolerance = 1e-12;

inline void validate(const TopographySpec& spec)
{
    struct Visitor {
        void operator()(const FlatBed& b) const { detail::require(detail::finite(b.level), "bed level must be finite"); }
        void operator()(const SlopedBed& b) const
        {
            detail::require(detail::finite(b.z0) && detail::finite(b.slope), "bed slope must be finite");
        }
        void operator()(const BedTable& t) const
        {
            detail::require(!t.points.empty(), "bed table is empty");
            for (std::size_t k = 0; k < t.points.size(); ++k) {
                detail::require(detail::finite(t.points[k].x) && detail::finite(t.points[k].z),
                                "bed table values must be finite");
                if (k > 0)
                    detail::require(t.points[k].x > t.points[k - 1].x,
                                    "bed table breakpoints must be strictly increasing");
            }
        }
        void operator()(const PiecewiseBed& p) const
        {
            detail::require(!p.pieces.empty(), "piecewise bed has no pieces");
            for (std::size_t k = 0; k < p.pieces.size(); ++k) {
                const auto& piece = p.pieces[k];
                detail::require(detail::finite(piece.z0) && detail::finite(piece.slope) &&
                                    detail::finite(piece.x_begin) && detail::finite(piece.x_end),
                                "bed piece values must be finite");
                detail::require(piece.x_end > piece.x_begin, "bed piece must have positive extent");
                if (k == 0) continue;
                const auto& prev = p.pieces[k - 1];
                detail::require(prev.x_end == piece.x_begin, "bed pieces must be contiguous");
                const double left = prev.at(piece.x_begin);
                const double right = piece.at(piece.x_begin);
                detail::require(std::abs(left - right) <= breakpoint_tolerance * std::max(1.0, std::abs(left)),
                                "bed is discontinuous at x = " + std::to_string(piece.x_begin));
            }
        }
        void operator()(const SampledBed& s) const
        {
            for (double v : s.values) detail::require(detail::finite(v), "sampled bed values must be finite");
        }
    };
    std::visit(Visitor{}, spec);
}

/// Evaluates an analytic descriptor at x. Sampled beds have no pointwise form.
inline double bed_elevation(const TopographySpec& spec, double x)
{
    struct Visitor {
        double x;
        double operator()(const FlatBed& b) const { return b.level; }
        double operator()(const SlopedBed& b) const { return b.z0 + b.slope * x; }
        double operator()(const BedTable& t) const
        {
            const auto& p = t.points;
            if (x <= p.front().x) return p.front().z;
            if (x >= p.back().x) return p.back().z;
            const auto it = std::upper_bound(p.begin(), p.end(), x,
                                             [](double value, const BedPoint& bp) { return value < bp.x; });
            const auto& b = *it;
            const auto& a = *(it - 1);
            const double w = (x - a.x) / (b.x - a.x);
            return a.z + w * (b.z - a.z);
        }
        double operator()(const PiecewiseBed& p) const
        {
            for (const auto& piece : p.pieces)
                if (x < piece.x_end) return piece.at(x);
            return p.pieces.back().at(x);
        }
        double operator()(const SampledBed&) const
        {
            throw std::invalid_argument("sampled bed has no pointwise evaluation");
        }
    };
    return std::visit(Visitor{x}, spec);
}

struct Topography {
    std::vector<double> values;
    TopographySpec descriptor;

    double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
    int size() const { return static_cast<int>(values.size()); }
};

/// Samples the bed at cell centers.
inline Topography sample_topography(const TopographySpec& spec, const Grid& grid)
{
    validate(spec);
    Topography topo{{}, spec};
    if (const auto* sampled = std::get_if<SampledBed>(&spec)) {
        detail::require(static_cast<int>(sampled->values.size()) == grid.size(),
                        "sampled bed length differs from the cell count");
        topo.values = sampled->values;
        return topo;
    }
    topo.values.resize(static_cast<std::size_t>(grid.size()));
    for (int i = 0; i < grid.size(); ++i) topo.values[static_cast<std::size_t>(i)] = bed_elevation(spec, grid.center(i));
    return topo;
}

// ---------------------------------------------------------------------------
// Friction
// ---------------------------------------------------------------------------

enum class ModelVariant { extended, legacy };

struct FrictionParams {
    double alpha = 0.0;      ///< recharge-friction magnitude (any sign)
    double kappa_lam = 0.0;  ///< laminar coefficient, 1/s
    double kappa_tur = 0.0;  ///< turbulent coefficient, 1/m
    ModelVariant model = ModelVariant::extended;

    void validate() const
    {
        detail::require(detail::finite(alpha), "alpha must be finite");
        detail::require(detail::finite(kappa_lam) && kappa_lam >= 0.0, "kappa_lam must be non-negative");
        detail::require(detail::finite(kappa_tur) && kappa_tur >= 0.0, "kappa_tur must be non-negative");
    }
    bool operator==(const FrictionParams&) const = default;
};

// ---------------------------------------------------------------------------
// Sources
// ---------------------------------------------------------------------------

/// Constant rate on the half-open box [t_begin, t_end) x [x_begin, x_end).
struct SourceBox {
    double t_begin = 0.0;
    double t_end = 0.0;
    double x_begin = 0.0;
    double x_end = 0.0;
    double rate = 0.0;  ///< m/s

    bool contains(double t, double x) const
    {
        return t >= t_begin && t < t_end && x >= x_begin && x < x_end;
    }
    bool overlaps(const SourceBox& o) const
    {
        return t_begin < o.t_end && o.t_begin < t_end && x_begin < o.x_end && o.x_begin < x_end;
    }
    bool operator==(const SourceBox&) const = default;
};

/// Rain R(t, x) and infiltration I(t, x) as box lists, 0 outside every box.
struct SourceField {
    std::vector<SourceBox> rain;
    std::vector<SourceBox> infiltration;

    double rain_at(double t, double x) const { return lookup(rain, t, x); }
    double infiltration_at(double t, double x) const { return lookup(infiltration, t, x); }

    void validate(double final_time, double length) const
    {
        check(rain, final_time, length, "rain", true);
        check(infiltration, final_time, length, "infiltration", false);
    }

    /// Sorted box edges in time; the source field is constant between them.
    std::vector<double> event_times() const
    {
        std::vector<double> times;
        for (const auto* list : {&rain, &infiltration})
            for (const auto& box : *list) {
                times.push_back(box.t_begin);
                times.push_back(box.t_end);
            }
        std::sort(times.begin(), times.end());
        times.erase(std::unique(times.begin(), times.end()), times.end());
        return times;
    }

    bool operator==(const SourceField&) const = default;

private:
    static double lookup(const std::vector<SourceBox>& boxes, double t, double x)
    {
        for (const auto& box : boxes)
            if (box.contains(t, x)) return box.rate;
        return 0.0;
    }

    static void check(const std::vector<SourceBox>& boxes, double final_time, double length, const std::string& what,
                      bool non_negative)
    {
        for (std::size_t k = 0; k < boxes.size(); ++k) {
            const auto& b = boxes[k];
            const std::string tag = what + " box " + std::to_string(k);
            detail::require(detail::finite(b.rate) && detail::finite(b.t_begin) && detail::finite(b.t_end) &&
                                detail::finite(b.x_begin) && detail::finite(b.x_end),
                            tag + " has non-finite values");
            detail::require(!non_negative || b.rate >= 0.0, tag + " has a negative rate");
            detail::require(b.t_begin < b.t_end && b.x_begin < b.x_end, tag + " is empty");
            detail::require(b.t_begin >= 0.0 && b.t_end <= final_time, tag + " extends outside [0, T]");
            detail::require(b.x_begin >= 0.0 && b.x_end <= length, tag + " extends outside [0, L]");
            for (std::size_t j = 0; j < k; ++j)
                detail::require(!b.overlaps(boxes[j]), tag + " overlaps " + what + " box " + std::to_string(j));
        }
    }
};

/// Per-cell rates at one instant, with net = rain - infiltration.
struct SourceRates {
    std::vector<double> rain;
    std::vector<double> infiltration;
    std::vector<double> net;

    double max_rain() const { return rain.empty() ? 0.0 : *std::max_element(rain.begin(), rain.end()); }
    bool any_nonzero() const
    {
        return std::any_of(net.begin(), net.end(), [](double s) { return s != 0.0; }) ||
               std::any_of(rain.begin(), rain.end(), [](double r) { return r != 0.0; });
    }
};

/// Samples the source field at cell centers at time t.
inline SourceRates evaluate_sources(const SourceField& field, double t, const Grid& grid)
{
    const auto n = static_cast<std::size_t>(grid.size());
    SourceRates rates{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
    for (int i = 0; i < grid.size(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double x = grid.center(i);
        rates.rain[k] = field.rain_at(t, x);
        rates.infiltration[k] = field.infiltration_at(t, x);
        rates.net[k] = rates.rain[k] - rates.infiltration[k];
    }
    return rates;
}

// ---------------------------------------------------------------------------
// Boundary conditions and initial data
// ---------------------------------------------------------------------------

enum class Boundary { periodic, wall, outflow };

struct BoundaryPair {
    Boundary left = Boundary::wall;
    Boundary right = Boundary::outflow;
    bool periodic() const { return left == Boundary::periodic; }
    bool operator==(const BoundaryPair&) const = default;
};

/// h = depth, q = discharge everywhere.
struct UniformInitial {
    double h = 0.0;
    double q = 0.0;
    bool operator==(const UniformInitial&) const = default;
};

/// h = max(level - Z, 0) with uniform discharge on wet cells.
struct SurfaceInitial {
    double level = 0.0;
    double q = 0.0;
    bool operator==(const SurfaceInitial&) const = default;
};

/// h = mean + amplitude * sin(2 pi x / L), uniform discharge.
struct WaveInitial {
    double mean = 1.0;
    double amplitude = 0.0;
    double q = 0.0;
    bool operator==(const WaveInitial&) const = default;
};

using InitialSpec = std::variant<UniformInitial, SurfaceInitial, WaveInitial>;

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

struct Scenario {
    std::string name = "custom";
    double length = 1.0;
    int cells = 2;
    TopographySpec topography = FlatBed{};
    InitialSpec initial = UniformInitial{};
    BoundaryPair boundary{};
    SourceField sources{};
    FrictionParams friction{};
    double gravity = default_gravity;
    double cfl = default_cfl;
    double final_time = 1.0;
    double dry_height = default_dry_height;
    std::vector<double> probes;
    std::vector<double> snapshots;
    int diagnostics_every = 1;
    double sample_interval = 0.0;  ///< if > 0, steps also land on multiples of it

    void validate() const
    {
        detail::require(detail::finite(length) && length > 0.0, "length must be positive");
        detail::require(cells >= 2, "cells must be at least 2");
        rainsw::validate(topography);
        if (const auto* s = std::get_if<SampledBed>(&topography))
            detail::require(static_cast<int>(s->values.size()) == cells, "sampled bed length differs from cells");
        std::visit(
            [](const auto& init) {
                using T = std::decay_t<decltype(init)>;
                if constexpr (std::is_same_v<T, UniformInitial>)
                    detail::require(detail::finite(init.h) && init.h >= 0.0 && detail::finite(init.q),
                                    "initial depth must be non-negative");
                else if constexpr (std::is_same_v<T, SurfaceInitial>)
                    detail::require(detail::finite(init.level) && detail::finite(init.q), "initial level must be finite");
                else
                    detail::require(detail::finite(init.mean) && detail::finite(init.amplitude) &&
                                        detail::finite(init.q) && init.mean - std::abs(init.amplitude) >= 0.0,
                                    "initial wave must stay non-negative");
            },
            initial);
        detail::require((boundary.left == Boundary::periodic) == (boundary.right == Boundary::periodic),
                        "periodic boundaries must be set on both sides");
        friction.validate();
        detail::require(detail::finite(gravity) && gravity > 0.0, "gravity must be positive");
        detail::require(detail::finite(cfl) && cfl > 0.0 && cfl <= 1.0, "cfl must lie in (0, 1]");
        detail::require(detail::finite(final_time) && final_time >= 0.0, "final_time must be non-negative");
        detail::require(detail::finite(dry_height) && dry_height > 0.0, "dry_height must be positive");
        sources.validate(final_time, length);
        for (double x : probes) detail::require(x >= 0.0 && x <= length, "probe outside [0, L]");
        for (double t : snapshots) detail::require(t >= 0.0 && t <= final_time, "snapshot time outside [0, T]");
        detail::require(diagnostics_every >= 1, "diagnostics_every must be at least 1");
        detail::require(detail::finite(sample_interval) && sample_interval >= 0.0,
                        "sample_interval must be non-negative");
    }

    bool operator==(const Scenario&) const = default;
};

/// Builds the initial state of a scenario on its grid and bed.
inline State initial_state(const Scenario& scenario, const Grid& grid, const Topography& topo)
{
    const auto n = static_cast<std::size_t>(grid.size());
    std::vector<double> h(n), q(n);
    for (int i = 0; i < grid.size(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        std::visit(
            [&](const auto& init) {
                using T = std::decay_t<decltype(init)>;
                if constexpr (std::is_same_v<T, UniformInitial>) {
                    h[k] = init.h;
                    q[k] = init.q;
                } else if constexpr (std::is_same_v<T, SurfaceInitial>) {
                    h[k] = std::max(init.level - topo[i], 0.0);
                    q[k] = init.q;
                } else {
                    constexpr double two_pi = 6.283185307179586476925286766559;
                    h[k] = init.mean + init.amplitude * std::sin(two_pi * grid.center(i) / grid.length());
                    q[k] = init.q;
                }
            },
            scenario.initial);
    }
    return State(std::move(h), std::move(q), scenario.dry_height);
}

/// A scenario together with its grid and sampled bed.
struct Problem {
    Scenario scenario;
    Grid grid;
    Topography topography;

    explicit Problem(Scenario s)
        : scenario((s.validate(), std::move(s))),
          grid(scenario.length, scenario.cells),
          topography(sample_topography(scenario.topography, grid))
    {
    }

    State initial() const { return initial_state(scenario, grid, topography); }
};

} // namespace rainsw
