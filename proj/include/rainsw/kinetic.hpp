// Kinetic weight, kinetic density and exact truncated moments of the density.
//
// The kinetic density of a cell with height h and velocity u is
//
//     M(xi) = sqrt(h) chi((xi - u) / sqrt(h)),   chi(w) = sqrt((2g - w^2)_+) / (pi g),
//
// a semicircle of radius a = sqrt(2 g h) centred on u. Its moments over any
// interval have closed forms through the arcsin primitives of the semicircle,
// which is what the flux assembly relies on.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "core.hpp"

namespace rainsw {

/// Barenblatt weight. Even, non-negative, supported on |w| < sqrt(2g).
inline double chi(double omega, double g)
{
    const double r = 2.0 * g - omega * omega;
    return r > 0.0 ? std::sqrt(r) / (std::numbers::pi * g) : 0.0;
}

struct KineticDensityParams {
    double h = 0.0;
    double u = 0.0;
    double g = default_gravity;
};

/// Half-line selector for upwinded moments.
enum class Side { negative, positive };

inline double density(const KineticDensityParams& p, double xi)
{
    if (p.h <= 0.0) return 0.0;
    const double root_h = std::sqrt(p.h);
    return root_h * chi((xi - p.u) / root_h, p.g);
}

/// Half-width of the support of M, sqrt(2 g h).
inline double support_radius(const KineticDensityParams& p) { return p.h > 0.0 ? std::sqrt(2.0 * p.g * p.h) : 0.0; }

struct MomentRequest {
    int order = 0;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
};

namespace detail {

inline constexpr double inf = std::numeric_limits<double>::infinity();

inline void check_order(int order)
{
    if (order < 0 || order > 2) throw std::invalid_argument("moment order must be 0, 1 or 2");
}

struct WeightPrimitives {
    double p0, p1, p2;
};

// Antiderivatives of w^k chi(w), k = 0, 1, 2, with w clipped to the support.
inline WeightPrimitives weight_primitives(double w, double g)
{
    const double c2 = 2.0 * g;
    const double c = std::sqrt(c2);
    w = std::clamp(w, -c, c);
    const double s = std::sqrt(std::max(0.0, c2 - w * w));
    const double theta = std::asin(std::clamp(w / c, -1.0, 1.0));
    const double k = 1.0 / (std::numbers::pi * g);
    return {k * 0.5 * (w * s + c2 * theta),
            -k * s * s * s / 3.0,
            k * 0.125 * (w * (2.0 * w * w - c2) * s + c2 * c2 * theta)};
}

} // namespace detail

/// Exact value of the integral of xi^order M(xi) over [lower, upper].
/// Infinite bounds are allowed; the integral is clipped to the support.
inline double truncated_moment(const KineticDensityParams& p, int order, double lower, double upper)
{
    detail::check_order(order);
    if (!(lower <= upper)) throw std::invalid_argument("moment bounds must satisfy lower <= upper");
    if (p.h <= 0.0) return 0.0;
    const double root_h = std::sqrt(p.h);
    const auto a = detail::weight_primitives((lower - p.u) / root_h, p.g);
    const auto b = detail::weight_primitives((upper - p.u) / root_h, p.g);
    const double i0 = b.p0 - a.p0;
    switch (order) {
    case 0:
        return p.h * i0;
    case 1:
        return p.h * (p.u * i0 + root_h * (b.p1 - a.p1));
    default:
        return p.h * (p.u * p.u * i0 + 2.0 * p.u * root_h * (b.p1 - a.p1) + p.h * (b.p2 - a.p2));
    }
}

inline double truncated_moment(const KineticDensityParams& p, const MomentRequest& req)
{
    return truncated_moment(p, req.order, req.lower, req.upper);
}

/// Moments over the whole line: h, h u, h u^2 + g h^2 / 2.
inline double full_moment(const KineticDensityParams& p, int order)
{
    return truncated_moment(p, order, -detail::inf, detail::inf);
}

/// Moment over one half-line: (-inf, 0] or [0, +inf).
inline double half_moment(const KineticDensityParams& p, int order, Side side)
{
    return side == Side::positive ? truncated_moment(p, order, 0.0, detail::inf)
                                  : truncated_moment(p, order, -detail::inf, 0.0);
}

namespace detail {

using gauss15 = boost::math::quadrature::gauss<double, 15>;

// Integral over xi > 0, xi^2 >= energy, of xi^order M(sqrt(xi^2 - energy)).
//
// In the neighbour variable eta = sqrt(xi^2 - energy) one has xi dxi = eta deta,
// so order 1 is an ordinary truncated moment. Orders 0 and 2 carry the factor
// xi^(order-1) eta = (eta/xi or xi*eta), which is not polynomial in eta; those are
// integrated in the angle theta with eta = u + a sin(theta) (removing the
// semicircle's square-root edges) on panels graded away from the branch point
// eta^2 = -energy.
inline double transfer_positive(const KineticDensityParams& p, int order, double energy)
{
    if (p.h <= 0.0) return 0.0;
    if (energy == 0.0) return truncated_moment(p, order, 0.0, inf);
    if (p.u == 0.0) {
        // A centred semicircle stays a centred semicircle with height h + energy / 2g.
        const double h_eff = p.h + energy / (2.0 * p.g);
        if (h_eff <= 0.0) return 0.0;
        const double lower = energy > 0.0 ? std::sqrt(energy) : 0.0;
        return truncated_moment({h_eff, 0.0, p.g}, order, lower, inf);
    }
    const double edge = energy < 0.0 ? std::sqrt(-energy) : 0.0;
    if (order == 1) return truncated_moment(p, 1, edge, inf);

    const double a = support_radius(p);
    const double hi = p.u + a;
    const double lo = std::max(p.u - a, edge);
    if (!(lo < hi)) return 0.0;

    const double u = p.u;
    // xi^2 = eta^2 + energy, written to avoid cancellation near the branch point.
    auto xi_squared = [&](double eta) {
        return energy < 0.0 ? std::max(0.0, (eta - edge) * (eta + edge)) : eta * eta + energy;
    };
    auto weight = [&](double eta, double xi) { return order == 0 ? eta / xi : xi * eta; };
    auto angle = [&](double eta) { return std::asin(std::clamp((eta - u) / a, -1.0, 1.0)); };
    auto integrand = [&](double theta) {
        const double c = std::cos(theta);
        const double eta = u + a * std::sin(theta);
        const double xi = std::sqrt(xi_squared(eta));
        if (xi == 0.0) return 0.0;
        return weight(eta, xi) * c * c;
    };

    const double scale = std::sqrt(std::abs(energy));
    const double first = (lo - edge) + scale;
    const bool branch_at_lo = energy < 0.0 && lo == edge;

    double total = 0.0;
    double eta0 = lo;
    double width = first;
    double theta0 = angle(lo);
    bool first_panel = true;
    while (eta0 < hi) {
        const double eta1 = std::min(hi, eta0 + width);
        const double theta1 = eta1 == hi ? std::numbers::pi / 2.0 : angle(eta1);
        if (first_panel && branch_at_lo) {
            // theta = theta0 + tau^2 turns the sqrt edge into a smooth zero.
            const double base = theta0;
            auto panel = [&](double tau) {
                const double t2 = tau * tau;
                const double theta = base + t2;
                const double c = std::cos(theta);
                const double eta = u + a * std::sin(theta);
                const double gap = 2.0 * a * std::cos(base + 0.5 * t2) * std::sin(0.5 * t2);
                const double xi = std::sqrt(std::max(0.0, gap * (eta + edge)));
                if (xi == 0.0) return 0.0;
                return weight(eta, xi) * c * c * 2.0 * tau;
            };
            total += gauss15::integrate(panel, 0.0, std::sqrt(std::max(0.0, theta1 - base)));
        } else {
            total += gauss15::integrate(integrand, theta0, theta1);
        }
        first_panel = false;
        eta0 = eta1;
        theta0 = theta1;
        width *= 2.0;
    }
    return 2.0 * p.h / std::numbers::pi * total;
}

// Signed energy shift: the integral over the chosen half-line, restricted to
// xi^2 >= energy, of xi^order M(s sqrt(xi^2 - energy)) with s the side's sign.
inline double transfer_moment(const KineticDensityParams& p, int order, double energy, Side side)
{
    check_order(order);
    if (!std::isfinite(energy)) throw std::invalid_argument("energy jump must be finite");
    if (side == Side::positive) return transfer_positive(p, order, energy);
    // Mirror xi -> -xi: the density of (h, u) at -eta is the density of (h, -u) at eta.
    const double mirrored = transfer_positive({p.h, -p.u, p.g}, order, energy);
    return order == 1 ? -mirrored : mirrored;
}

} // namespace detail

/// Moment of particles arriving from a neighbour that sits `jump` = 2 g dW >= 0
/// higher in potential: xi^order M(s sqrt(xi^2 - jump)) over xi^2 >= jump on
/// the given half-line.
inline double transmitted_moment(const KineticDensityParams& p, int order, double jump, Side side)
{
    if (jump < 0.0) throw std::invalid_argument("transmitted_moment needs a non-negative jump");
    return detail::transfer_moment(p, order, jump, side);
}

/// Counterpart for a neighbour `rise` = -2 g dW >= 0 lower in potential: its
/// particles climb and lose kinetic energy, xi^order M(s sqrt(xi^2 + rise)) over
/// the whole half-line. Vanishes once rise exceeds every eta^2 in the support.
inline double climbing_moment(const KineticDensityParams& p, int order, double rise, Side side)
{
    if (rise < 0.0) throw std::invalid_argument("climbing_moment needs a non-negative rise");
    return detail::transfer_moment(p, order, -rise, side);
}

} // namespace rainsw
