// Friction laws and the potential W = Z + cumulative friction head.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "core.hpp"
#include "kinetic.hpp"

namespace rainsw {

/// Velocity-dependent friction rate k0(u) = kappa_lam + kappa_tur |u|.
inline double friction_k0(double u, const FrictionParams& fp) { return fp.kappa_lam + fp.kappa_tur * std::abs(u); }

struct RechargeFriction {
    double rain = 0.0;          ///< f_R
    double infiltration = 0.0;  ///< f_I
};

/// Recharge friction f_R = alpha R, f_I = alpha max(0, -I). Only water entering
/// the flow (rain, exfiltration) brings friction.
inline RechargeFriction friction_recharge(double alpha, double rain, double infiltration)
{
    if (!(rain >= 0.0)) throw std::invalid_argument("rain rate must be non-negative");
    return {alpha * rain, alpha * std::max(0.0, -infiltration)};
}

/// Per-cell potential with the pieces it was built from.
struct PotentialField {
    std::vector<double> values;      ///< W_i
    std::vector<double> bed;         ///< Z_i
    std::vector<double> increments;  ///< dx G_i, the friction head added by cell i

    int size() const { return static_cast<int>(values.size()); }
    double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
};

/// Friction slope G = (f_R + f_I + k0(u)) u / (g h) of one cell; 0 when dry.
/// The legacy model keeps only k0.
inline double friction_slope(const State& state, int i, double rain, double infiltration, const FrictionParams& fp,
                             double g)
{
    if (!state.is_wet(i)) return 0.0;
    const double u = state.velocity(i);
    double rate = friction_k0(u, fp);
    if (fp.model == ModelVariant::extended) {
        const auto f = friction_recharge(fp.alpha, rain, infiltration);
        rate += f.rain + f.infiltration;
    }
    return rate * u / (g * state.h(i));
}

/// W_i = Z_i + sum_{j <= i} dx G_j.
inline PotentialField build_potential(const State& state, const Topography& topo, const SourceRates& rates,
                                      const FrictionParams& fp, const Grid& grid, double g)
{
    const int n = state.size();
    if (topo.size() != n || grid.size() != n || static_cast<int>(rates.rain.size()) != n ||
        static_cast<int>(rates.infiltration.size()) != n)
        throw std::invalid_argument("build_potential: inconsistent lengths");
    PotentialField w;
    w.values.resize(static_cast<std::size_t>(n));
    w.bed = topo.values;
    w.increments.resize(static_cast<std::size_t>(n));
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        w.increments[k] = grid.dx() * friction_slope(state, i, rates.rain[k], rates.infiltration[k], fp, g);
        sum += w.increments[k];
        w.values[k] = topo.values[k] + sum;
    }
    return w;
}

/// Jump W_right - W_left across interface k (between cells k-1 and k), for
/// k = 0..N. Wall and outflow ghosts extend W flatly. Under periodic
/// boundaries both end interfaces use the wrapped jump Z_0 - Z_{N-1} + dx G_0,
/// which is the local difference with cell N-1 seen as the left neighbour.
inline double interface_jump(const PotentialField& w, int k, const BoundaryPair& bc)
{
    const int n = w.size();
    if (k < 0 || k > n) throw std::out_of_range("interface index out of range");
    if (k > 0 && k < n) return w[k] - w[k - 1];
    if (!bc.periodic()) return 0.0;
    return (w.bed.front() - w.bed.back()) + w.increments.front();
}

/// Jump from cell i toward its neighbour on the given side, interior only.
inline double delta_W(const PotentialField& w, int i, Side side)
{
    const int j = side == Side::positive ? i + 1 : i - 1;
    if (i < 0 || i >= w.size() || j < 0 || j >= w.size())
        throw std::out_of_range("delta_W: neighbour outside the grid");
    return w[j] - w[i];
}

/// Same, with the boundary extension of `bc` at the domain ends.
inline double delta_W(const PotentialField& w, int i, Side side, const BoundaryPair& bc)
{
    if (i < 0 || i >= w.size()) throw std::out_of_range("delta_W: cell outside the grid");
    return side == Side::positive ? interface_jump(w, i + 1, bc) : -interface_jump(w, i, bc);
}

} // namespace rainsw
