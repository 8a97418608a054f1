#pragma once

#include "gfdprop/dynamics.hpp"
#include "gfdprop/error.hpp"
#include "gfdprop/grid.hpp"
#include "gfdprop/state.hpp"

namespace gfdprop {

/// Counterclockwise 90-degree rotation of a C-grid state on a square grid:
/// (u, v, eta) -> (-v o R, u o R, eta o R) written through exact index maps,
/// so x-faces land on y-faces with the staggering preserved.
inline State rot90_state(const State& s, const Grid& g) {
    if (g.nx != g.ny || g.dx != g.dy)
        throw Error(Errc::UnsatisfiableConstraints, "rot90 needs a square grid with dx == dy");
    if (g.boundary == Boundary::ChannelPeriodicX)
        throw Error(Errc::UnsatisfiableConstraints, "rot90 is not defined for the channel");
    const int n = g.nx;
    State out = make_state(g);
    if (s.tracer) add_tracer(out, g);
    out.time = s.time;

    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            out.eta(n - 1 - j, i) = s.eta(i, j);
            if (s.tracer) (*out.tracer)(n - 1 - j, i) = (*s.tracer)(i, j);
        }
    // u-point (i, j) at (i dx, (j+1/2) dy) maps to the v-point (n-1-j, i)
    for (int j = 0; j < s.u.ny(); ++j)
        for (int i = 0; i < s.u.nx(); ++i) out.v(n - 1 - j, i) = s.u(i, j);
    // v-point (i, j) maps to the u-point ((n-j) wrapped, i) with a sign flip
    for (int j = 0; j < s.v.ny(); ++j)
        for (int i = 0; i < s.v.nx(); ++i) {
            const int iu = g.periodic_x() ? (n - j) % n : n - j;
            out.u(iu, i) = -s.v(i, j);
        }
    return out;
}

inline State rot90_inverse_state(const State& s, const Grid& g) {
    State r = rot90_state(s, g);
    r = rot90_state(r, g);
    return rot90_state(r, g);
}

/// Rotate a forcing description along with the domain.
inline Forcing rot90_forcing(const Forcing& f, const Grid& g) {
    Forcing out = f;
    out.amplitude_x = -f.amplitude_y;
    out.amplitude_y = f.amplitude_x;
    if (f.pattern == SpatialPattern::GaussianBlob) {
        out.x0 = g.lx() - f.y0;
        out.y0 = f.x0;
    }
    if (f.pattern == SpatialPattern::BasinMode) {
        out.m = f.n;
        out.n = f.m;
    }
    return out;
}

/// Mirror about the domain mid-latitude: u(x,-y), -v(x,-y), eta(x,-y),
/// with the C-grid index offsets handled exactly. An involution.
inline State mirror_y_state(const State& s, const Grid& g) {
    const int ny = g.ny;
    State out = make_state(g);
    if (s.tracer) add_tracer(out, g);
    out.time = s.time;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            out.eta(i, ny - 1 - j) = s.eta(i, j);
            if (s.tracer) (*out.tracer)(i, ny - 1 - j) = (*s.tracer)(i, j);
        }
    for (int j = 0; j < s.u.ny(); ++j)
        for (int i = 0; i < s.u.nx(); ++i) out.u(i, ny - 1 - j) = s.u(i, j);
    for (int j = 0; j < s.v.ny(); ++j)
        for (int i = 0; i < s.v.nx(); ++i) {
            const int jv = g.periodic_y() ? (ny - j) % ny : ny - j;
            out.v(i, jv) = -s.v(i, j);
        }
    return out;
}

inline Forcing mirror_y_forcing(const Forcing& f, const Grid& g) {
    Forcing out = f;
    out.amplitude_y = -f.amplitude_y;
    if (f.pattern == SpatialPattern::GaussianBlob) out.y0 = g.ly() - f.y0;
    return out;
}

/// L-inf distance between two states over all prognostic fields.
inline double state_max_diff(const State& a, const State& b) {
    double m = std::max({max_abs_diff(a.u, b.u), max_abs_diff(a.v, b.v),
                         max_abs_diff(a.eta, b.eta)});
    if (a.tracer && b.tracer) m = std::max(m, max_abs_diff(*a.tracer, *b.tracer));
    return m;
}

/// Scale for symmetry comparisons: largest field magnitude of either state.
inline double state_scale(const State& a) {
    return std::max({a.u.max_abs(), a.v.max_abs(), a.eta.max_abs(), 1e-300});
}

}  // namespace gfdprop
