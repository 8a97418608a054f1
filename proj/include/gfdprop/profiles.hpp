#pragma once

#include <cmath>

#include "gfdprop/field.hpp"
#include "gfdprop/grid.hpp"

namespace gfdprop {

/// C^4 compactly supported bump: (1 - s^2)^5 inside |s| < 1, zero outside.
/// Compact support keeps basin walls and periodic seams exactly quiet, which
/// Gaussian tails do not.
inline double bump(double s) {
    const double t = 1.0 - s * s;
    if (t <= 0.0) return 0.0;
    const double t2 = t * t;
    return t2 * t2 * t;
}

/// Support radius used for a feature of core width w.
inline constexpr double kSupportFactor = 3.0;

namespace detail {

inline double wrap_delta(double d, double L, bool periodic) {
    if (!periodic) return d;
    while (d > 0.5 * L) d -= L;
    while (d < -0.5 * L) d += L;
    return d;
}

}  // namespace detail

/// Add a compact vortex bump of amplitude eta0 and core width w (support
/// radius 3 w) centered at (x0, y0).
inline void add_vortex(Field2D& eta, const Grid& g, double x0, double y0, double eta0, double w) {
    const double R = kSupportFactor * w;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double dx = detail::wrap_delta(g.xc(i) - x0, g.lx(), g.periodic_x());
            const double dy = detail::wrap_delta(g.yc(j) - y0, g.ly(), g.periodic_y());
            eta(i, j) += eta0 * bump(std::sqrt(dx * dx + dy * dy) / R);
        }
}

/// Add a compact elevation ridge through (x0, y0) at angle theta (degrees,
/// measured from +x toward +y along the ridge): a jet once balanced.
/// Core width w across the ridge, half-length len along it.
inline void add_jet_ridge(Field2D& eta, const Grid& g, double x0, double y0, double theta_deg,
                          double eta0, double w, double len) {
    const double th = theta_deg * 3.14159265358979323846 / 180.0;
    const double ca = std::cos(th), sa = std::sin(th);
    const double Rw = kSupportFactor * w;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double dx = detail::wrap_delta(g.xc(i) - x0, g.lx(), g.periodic_x());
            const double dy = detail::wrap_delta(g.yc(j) - y0, g.ly(), g.periodic_y());
            const double along = ca * dx + sa * dy;
            const double across = -sa * dx + ca * dy;
            eta(i, j) += eta0 * bump(across / Rw) * bump(along / len);
        }
}

/// Peak |grad| of the unit-amplitude bump of support radius R is about
/// 2.081 / R; used to size amplitudes against a speed guard.
inline double bump_peak_gradient(double support_radius) { return 2.0811669 / support_radius; }

}  // namespace gfdprop
