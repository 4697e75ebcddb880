// Interface fluxes from reflection and transmission of kinetic densities
// across potential jumps.
#pragma once

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "core.hpp"
#include "kinetic.hpp"
#include "potential.hpp"

namespace rainsw {

/// Height and velocity as seen by the kinetic density; dry cells are vacuum.
struct CellKinetics {
    double h = 0.0;
    double u = 0.0;
};

inline CellKinetics cell_kinetics(const State& state, int i)
{
    if (!state.is_wet(i)) return {};
    return {state.h(i), state.velocity(i)};
}

/// Flux through one interface. Mass is single-valued. Momentum is one-sided:
/// `momentum_left` closes the balance of the left cell, `momentum_right` that
/// of the right cell. They differ by the hydrostatic reaction of the jump.
struct InterfaceFlux {
    double mass = 0.0;
    double momentum_left = 0.0;
    double momentum_right = 0.0;

    bool operator==(const InterfaceFlux&) const = default;
};

/// Kinetic flux between `left` and `right`, with jump = W_right - W_left.
///
/// Seen from the left cell, particles with xi > 0 leave freely; the xi < 0
/// population is the right cell's density shifted by the jump energy 2 g jump,
/// plus the left cell's own particles reflected by the barrier when jump > 0.
/// The right cell is the mirror image with the jump reversed.
inline InterfaceFlux interface_flux(CellKinetics left, CellKinetics right, double jump, double g)
{
    if (!(left.h >= 0.0) || !(right.h >= 0.0)) throw std::invalid_argument("interface_flux: negative height");
    if (!std::isfinite(jump)) throw std::invalid_argument("interface_flux: jump must be finite");
    const KineticDensityParams l{left.h, left.u, g};
    const KineticDensityParams r{right.h, right.u, g};
    const double energy = 2.0 * g * jump;
    const double inf = std::numeric_limits<double>::infinity();

    InterfaceFlux f;
    f.mass = truncated_moment(l, 1, energy > 0.0 ? std::sqrt(energy) : 0.0, inf) +
             truncated_moment(r, 1, -inf, energy < 0.0 ? -std::sqrt(-energy) : 0.0);

    f.momentum_left = half_moment(l, 2, Side::positive) + detail::transfer_moment(r, 2, energy, Side::negative);
    if (energy > 0.0) f.momentum_left += truncated_moment(l, 2, 0.0, std::sqrt(energy));

    f.momentum_right = half_moment(r, 2, Side::negative) + detail::transfer_moment(l, 2, -energy, Side::positive);
    if (energy < 0.0) f.momentum_right += truncated_moment(r, 2, -std::sqrt(-energy), 0.0);
    return f;
}

/// Number of threads for intra-step loops: the OpenMP default capped by the
/// SWE_THREADS environment variable.
inline int worker_threads()
{
#ifdef _OPENMP
    int n = omp_get_max_threads();
    if (const char* cap = std::getenv("SWE_THREADS")) {
        const int c = std::atoi(cap);
        if (c >= 1 && c < n) n = c;
    }
    return n;
#else
    return 1;
#endif
}

/// Ghost state beyond a non-periodic boundary next to cell `inner`.
inline CellKinetics ghost_cell(CellKinetics inner, Boundary b)
{
    if (b == Boundary::wall) return {inner.h, -inner.u};
    return inner;
}

/// All N+1 interface fluxes, interface k lying between cells k-1 and k.
inline std::vector<InterfaceFlux> all_fluxes(const State& state, const PotentialField& w, const BoundaryPair& bc,
                                             double g)
{
    const int n = state.size();
    if (w.size() != n) throw std::invalid_argument("all_fluxes: potential and state lengths differ");
    std::vector<CellKinetics> cells(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) cells[static_cast<std::size_t>(i)] = cell_kinetics(state, i);
    std::vector<InterfaceFlux> out(static_cast<std::size_t>(n) + 1);

    [[maybe_unused]] const int threads = worker_threads();
#pragma omp parallel for num_threads(threads) schedule(static)
    for (int k = 1; k < n; ++k)
        out[static_cast<std::size_t>(k)] = interface_flux(cells[static_cast<std::size_t>(k - 1)],
                                                          cells[static_cast<std::size_t>(k)], w[k] - w[k - 1], g);

    const CellKinetics first = cells.front();
    const CellKinetics last = cells.back();
    if (bc.periodic()) {
        out.front() = interface_flux(last, first, interface_jump(w, 0, bc), g);
        out.back() = out.front();
    } else {
        out.front() = interface_flux(ghost_cell(first, bc.left), first, 0.0, g);
        out.back() = interface_flux(last, ghost_cell(last, bc.right), 0.0, g);
    }
    return out;
}

} // namespace rainsw
