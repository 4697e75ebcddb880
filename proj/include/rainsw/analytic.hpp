// Reference solutions of the spatially uniform rain problem and its regimes.
//
// With Z = 0, I = 0, R = 1 and h(0) = q(0) = 1 every spatial derivative
// vanishes and the system reduces to h' = 1, q' = (1 - alpha) q / h.
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace rainsw {

struct UniformRainState {
    double h = 0.0;
    double q = 0.0;
    double u = 0.0;
};

/// h = t + 1, q = (t + 1)^(1 - alpha), u = (t + 1)^(-alpha).
inline UniformRainState uniform_rain_exact(double t, double alpha)
{
    if (!(t >= 0.0)) throw std::invalid_argument("time must be non-negative");
    const double h = t + 1.0;
    const double u = std::pow(h, -alpha);
    return {h, h * u, u};
}

/// dK/dt = (1/2 - alpha) (t + 1)^(-2 alpha) for K = h u^2 / 2.
inline double kinetic_energy_rate(double t, double alpha)
{
    if (!(t >= 0.0)) throw std::invalid_argument("time must be non-negative");
    return (0.5 - alpha) * std::pow(t + 1.0, -2.0 * alpha);
}

enum class Regime { negative, zero, below_half, half, below_one, one, above_one };

/// A regime with the signs (-1, 0, +1) of dq/dt, du/dt and dK/dt.
struct RegimeLabel {
    Regime regime;
    int index;  ///< 1..7
    std::string name;
    std::array<int, 3> signs;
};

inline RegimeLabel classify_regime(double alpha)
{
    if (!std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite");
    if (alpha < 0.0) return {Regime::negative, 1, "alpha<0", {1, 1, 1}};
    if (alpha == 0.0) return {Regime::zero, 2, "alpha=0", {1, 0, 1}};
    if (alpha < 0.5) return {Regime::below_half, 3, "0<alpha<1/2", {1, -1, 1}};
    if (alpha == 0.5) return {Regime::half, 4, "alpha=1/2", {1, -1, 0}};
    if (alpha < 1.0) return {Regime::below_one, 5, "1/2<alpha<1", {1, -1, -1}};
    if (alpha == 1.0) return {Regime::one, 6, "alpha=1", {0, -1, -1}};
    return {Regime::above_one, 7, "alpha>1", {-1, -1, -1}};
}

struct ReferenceSample {
    double t = 0.0;
    double h = 0.0;
    double q = 0.0;
    double u = 0.0;
};

/// Classical RK4 on the reduced system, with general initial data and rain.
inline std::vector<ReferenceSample> ode_reference(double alpha, double final_time, int steps, double h0 = 1.0,
                                                  double q0 = 1.0, double rain = 1.0)
{
    if (steps < 1000) throw std::invalid_argument("ode_reference needs at least 1000 steps");
    if (!(final_time >= 0.0) || !(h0 > 0.0)) throw std::invalid_argument("ode_reference: bad time or height");
    const double dt = final_time / steps;
    auto rhs = [&](double h, double q) { return std::array<double, 2>{rain, (1.0 - alpha) * rain * q / h}; };
    std::vector<ReferenceSample> out;
    out.reserve(static_cast<std::size_t>(steps) + 1);
    double h = h0, q = q0;
    out.push_back({0.0, h, q, q / h});
    for (int n = 0; n < steps; ++n) {
        const auto k1 = rhs(h, q);
        const auto k2 = rhs(h + 0.5 * dt * k1[0], q + 0.5 * dt * k1[1]);
        const auto k3 = rhs(h + 0.5 * dt * k2[0], q + 0.5 * dt * k2[1]);
        const auto k4 = rhs(h + dt * k3[0], q + dt * k3[1]);
        h += dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        q += dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        out.push_back({(n + 1) * dt, h, q, q / h});
    }
    return out;
}

} // namespace rainsw
