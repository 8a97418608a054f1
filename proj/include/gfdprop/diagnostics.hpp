#pragma once

#include <algorithm>
#include <cmath>

#include "gfdprop/field.hpp"
#include "gfdprop/grid.hpp"
#include "gfdprop/params.hpp"
#include "gfdprop/state.hpp"

namespace gfdprop {

/// Integral diagnostics of one state. Energy is the discrete quadratic form
/// conserved by the spatial scheme: face-point velocities weighted by the
/// (face-averaged) layer thickness, plus g*eta^2/2 at centers, all divided
/// by rho0. Summation order is fixed left-to-right.
struct Diagnostics {
    double mass = 0.0;         // domain integral of eta [m^3]
    double energy = 0.0;       // [m^5 s^-2]
    double circulation = 0.0;  // domain integral of (zeta + f) [m^2 s^-1]
    double max_speed = 0.0;    // [m s^-1]
};

/// zeta = dv/dx - du/dy at C-grid vorticity (corner) points.
/// Closed walls use free-slip ghosts: the tangential-shear term vanishes on
/// the wall, and the wall-normal velocity is identically zero there.
inline Field2D relative_vorticity(const State& s, const Grid& g) {
    require_shapes(s, g);
    Field2D zeta(g.znx(), g.zny());
    const double rdx = 1.0 / g.dx;
    const double rdy = 1.0 / g.dy;
    for (int j = 0; j < g.zny(); ++j) {
        for (int i = 0; i < g.znx(); ++i) {
            double dvdx;
            if (g.periodic_x()) {
                dvdx = (s.v(i, j) - s.v(g.wx(i - 1), j)) * rdx;
            } else if (i == 0 || i == g.nx) {
                dvdx = 0.0;  // free-slip x-wall
            } else {
                dvdx = (s.v(i, j) - s.v(i - 1, j)) * rdx;
            }
            double dudy;
            if (g.periodic_y()) {
                dudy = (s.u(i, j) - s.u(i, g.wy(j - 1))) * rdy;
            } else if (j == 0 || j == g.ny) {
                dudy = 0.0;  // free-slip y-wall
            } else {
                dudy = (s.u(i, j) - s.u(i, j - 1)) * rdy;
            }
            zeta(i, j) = dvdx - dudy;
        }
    }
    return zeta;
}

/// Thickness at a u-point: average of the two adjacent cell thicknesses,
/// one-sided at closed walls.
inline double thickness_at_u(const State& s, const Grid& g, const PhysParams& p, int i, int j) {
    if (!p.nonlinear) return p.H;
    if (g.periodic_x()) return p.H + 0.5 * (s.eta(g.wx(i - 1), j) + s.eta(i, j));
    if (i == 0) return p.H + s.eta(0, j);
    if (i == g.nx) return p.H + s.eta(g.nx - 1, j);
    return p.H + 0.5 * (s.eta(i - 1, j) + s.eta(i, j));
}

inline double thickness_at_v(const State& s, const Grid& g, const PhysParams& p, int i, int j) {
    if (!p.nonlinear) return p.H;
    if (g.periodic_y()) return p.H + 0.5 * (s.eta(i, g.wy(j - 1)) + s.eta(i, j));
    if (j == 0) return p.H + s.eta(i, 0);
    if (j == g.ny) return p.H + s.eta(i, g.ny - 1);
    return p.H + 0.5 * (s.eta(i, j - 1) + s.eta(i, j));
}

inline Diagnostics compute_diagnostics(const State& s, const Grid& g, const PhysParams& p) {
    require_shapes(s, g);
    Diagnostics d;
    const double dA = g.cell_area();

    double mass = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) mass += s.eta(i, j);
    d.mass = mass * dA;

    double ke = 0.0;
    for (int j = 0; j < s.u.ny(); ++j)
        for (int i = 0; i < s.u.nx(); ++i)
            ke += 0.5 * thickness_at_u(s, g, p, i, j) * s.u(i, j) * s.u(i, j);
    for (int j = 0; j < s.v.ny(); ++j)
        for (int i = 0; i < s.v.nx(); ++i)
            ke += 0.5 * thickness_at_v(s, g, p, i, j) * s.v(i, j) * s.v(i, j);
    double pe = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) pe += 0.5 * p.g * s.eta(i, j) * s.eta(i, j);
    d.energy = (ke + pe) * dA;

    Field2D zeta = relative_vorticity(s, g);
    double circ = 0.0;
    for (int j = 0; j < g.zny(); ++j)
        for (int i = 0; i < g.znx(); ++i)
            circ += zeta(i, j) + p.coriolis(g.yz(j), g.ly());
    d.circulation = circ * dA;

    d.max_speed = s.max_speed();
    return d;
}

/// Scale used to normalize mass drift: the L1 mass of the initial elevation
/// field with a 1 m^3 floor, so zero-mean fields are not divided by zero.
inline double mass_scale(const State& s, const Grid& g) {
    return std::max(s.eta.sum_abs() * g.cell_area(), 1.0);
}

inline double circulation_scale(const State& s, const Grid& g, const PhysParams& p) {
    Field2D zeta = relative_vorticity(s, g);
    double scale = 0.0;
    for (int j = 0; j < g.zny(); ++j)
        for (int i = 0; i < g.znx(); ++i)
            scale += std::abs(zeta(i, j)) + std::abs(p.coriolis(g.yz(j), g.ly()));
    return std::max(scale * g.cell_area(), 1.0);
}

}  // namespace gfdprop
