#pragma once

#include <optional>
#include <utility>

#include "gfdprop/field.hpp"
#include "gfdprop/grid.hpp"

namespace gfdprop {

/// Prognostic fields on the C-grid plus elapsed simulation time.
struct State {
    Field2D u;
    Field2D v;
    Field2D eta;
    std::optional<Field2D> tracer;  // at cell centers
    double time = 0.0;

    bool all_finite() const {
        if (!u.all_finite() || !v.all_finite() || !eta.all_finite()) return false;
        if (tracer && !tracer->all_finite()) return false;
        return true;
    }

    double max_speed() const { return std::max(u.max_abs(), v.max_abs()); }

    bool operator==(const State& o) const {
        return u == o.u && v == o.v && eta == o.eta && tracer == o.tracer && time == o.time;
    }
};

inline State make_state(const Grid& g) {
    State s;
    s.u = Field2D(g.unx(), g.uny());
    s.v = Field2D(g.vnx(), g.vny());
    s.eta = Field2D(g.nx, g.ny);
    s.time = 0.0;
    return s;
}

inline void add_tracer(State& s, const Grid& g) { s.tracer = Field2D(g.nx, g.ny); }

inline bool shapes_match(const State& s, const Grid& g) {
    if (s.u.nx() != g.unx() || s.u.ny() != g.uny()) return false;
    if (s.v.nx() != g.vnx() || s.v.ny() != g.vny()) return false;
    if (s.eta.nx() != g.nx || s.eta.ny() != g.ny) return false;
    if (s.tracer && (s.tracer->nx() != g.nx || s.tracer->ny() != g.ny)) return false;
    return true;
}

inline void require_shapes(const State& s, const Grid& g) {
    if (!shapes_match(s, g))
        throw Error(Errc::ShapeMismatch, "state field shapes do not match grid staggering");
}

/// Zero the wall-normal velocity faces for closed directions.
inline void enforce_walls(State& s, const Grid& g) {
    if (!g.periodic_x()) {
        for (int j = 0; j < s.u.ny(); ++j) {
            s.u(0, j) = 0.0;
            s.u(s.u.nx() - 1, j) = 0.0;
        }
    }
    if (!g.periodic_y()) {
        for (int i = 0; i < s.v.nx(); ++i) {
            s.v(i, 0) = 0.0;
            s.v(i, s.v.ny() - 1) = 0.0;
        }
    }
}

}  // namespace gfdprop
