#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "gfdprop/diagnostics.hpp"
#include "gfdprop/error.hpp"
#include "gfdprop/field.hpp"
#include "gfdprop/grid.hpp"
#include "gfdprop/params.hpp"
#include "gfdprop/state.hpp"

namespace gfdprop {

enum class SpatialPattern { Uniform, BasinMode, GaussianBlob };

/// Body force added to the momentum equations as amplitude * pattern * cos(frequency * t).
struct Forcing {
    double amplitude_x = 0.0;  // [m s^-2]
    double amplitude_y = 0.0;
    SpatialPattern pattern = SpatialPattern::Uniform;
    int m = 1, n = 1;                       // BasinMode indices
    double x0 = 0.0, y0 = 0.0, width = 0.0; // GaussianBlob geometry
    double frequency = 0.0;                 // [s^-1], 0 = steady

    void validate() const {
        if (pattern == SpatialPattern::GaussianBlob && !(width > 0.0))
            throw Error(Errc::UnsatisfiableConstraints, "GaussianBlob forcing requires width > 0");
        if (pattern == SpatialPattern::BasinMode && (m < 1 || n < 1))
            throw Error(Errc::UnsatisfiableConstraints, "BasinMode forcing requires m,n >= 1");
    }
};

/// Fault-injection switch used by the harness's mutation-sensitivity tests.
/// Production runs leave this at None.
enum class Mutation { None, CoriolisSign, DropBeta, BreakFluxForm };

struct StepConfig {
    double dt = 0.0;
    long n_steps = 0;
    std::optional<Forcing> forcing;
    Mutation mutation = Mutation::None;
};

/// dt <= 0.5 * min(dx,dy) / (sqrt(g H) + max_speed), inclusive.
inline bool check_cfl(const Grid& g, const PhysParams& p, double dt, double max_speed) {
    const double limit = 0.5 * std::min(g.dx, g.dy) / (std::sqrt(p.g * p.H) + max_speed);
    return dt <= limit;
}

namespace detail {

/// Coriolis parameter sampled at vorticity (corner) points.
inline Field2D coriolis_at_corners(const Grid& g, const PhysParams& p, Mutation mut) {
    Field2D fz(g.znx(), g.zny());
    const double beta = (mut == Mutation::DropBeta) ? 0.0 : p.beta;
    for (int j = 0; j < g.zny(); ++j) {
        const double f = p.f0 + beta * (g.yz(j) - 0.5 * g.ly());
        for (int i = 0; i < g.znx(); ++i) fz(i, j) = f;
    }
    return fz;
}

struct ForcingPattern {
    Field2D shape_u;  // pattern at u-points (multiplied by amplitude_x)
    Field2D shape_v;
    double frequency = 0.0;
    bool active = false;
};

inline ForcingPattern build_forcing_pattern(const std::optional<Forcing>& f, const Grid& g) {
    ForcingPattern fp;
    if (!f) return fp;
    f->validate();
    fp.active = true;
    fp.frequency = f->frequency;
    fp.shape_u = Field2D(g.unx(), g.uny());
    fp.shape_v = Field2D(g.vnx(), g.vny());
    const double pi = 3.14159265358979323846;
    switch (f->pattern) {
        case SpatialPattern::Uniform:
            for (int j = 0; j < fp.shape_u.ny(); ++j)
                for (int i = 0; i < fp.shape_u.nx(); ++i) fp.shape_u(i, j) = f->amplitude_x;
            for (int j = 0; j < fp.shape_v.ny(); ++j)
                for (int i = 0; i < fp.shape_v.nx(); ++i) fp.shape_v(i, j) = f->amplitude_y;
            break;
        case SpatialPattern::BasinMode:
            for (int j = 0; j < fp.shape_u.ny(); ++j)
                for (int i = 0; i < fp.shape_u.nx(); ++i)
                    fp.shape_u(i, j) = f->amplitude_x * std::sin(f->m * pi * g.xu(i) / g.lx()) *
                                       std::cos(f->n * pi * g.yu(j) / g.ly());
            for (int j = 0; j < fp.shape_v.ny(); ++j)
                for (int i = 0; i < fp.shape_v.nx(); ++i)
                    fp.shape_v(i, j) = f->amplitude_y * std::cos(f->m * pi * g.xv(i) / g.lx()) *
                                       std::sin(f->n * pi * g.yv(j) / g.ly());
            break;
        case SpatialPattern::GaussianBlob: {
            const double w2 = 2.0 * f->width * f->width;
            for (int j = 0; j < fp.shape_u.ny(); ++j)
                for (int i = 0; i < fp.shape_u.nx(); ++i) {
                    const double ddx = g.xu(i) - f->x0, ddy = g.yu(j) - f->y0;
                    fp.shape_u(i, j) = f->amplitude_x * std::exp(-(ddx * ddx + ddy * ddy) / w2);
                }
            for (int j = 0; j < fp.shape_v.ny(); ++j)
                for (int i = 0; i < fp.shape_v.nx(); ++i) {
                    const double ddx = g.xv(i) - f->x0, ddy = g.yv(j) - f->y0;
                    fp.shape_v(i, j) = f->amplitude_y * std::exp(-(ddx * ddx + ddy * ddy) / w2);
                }
            break;
        }
    }
    return fp;
}

/// Scratch arrays reused across RK stages of one step() call.
struct Workspace {
    Field2D fz;           // Coriolis at corners
    ForcingPattern forcing;
    Mutation mutation = Mutation::None;
    bool advect_tracer = false;
    // nonlinear scratch
    Field2D flux_u, flux_v, kin, q;
    // RK stage storage
    State k1, k2, k3, k4, stage;
};

/// Right-hand side of the semi-discrete system. Writes du, dv, deta (and dc
/// when a tracer is carried) into `tend`; wall faces receive zero tendency.
///
/// Linear mode:   du = f vbar - g deta/dx - r u + Fx,  deta = -H div(u)
/// Nonlinear mode (vector-invariant, energy-conserving):
///   du = q-flux(V) - d(g eta + K)/dx - r u + Fx,  deta = -div(h u)
/// The Coriolis/PV term couples each u-v pair through their shared corner so
/// the spatial operator is exactly skew in the energy inner product.
inline void compute_tendency(const State& s, const Grid& g, const PhysParams& p, Workspace& ws,
                             double t, State& tend) {
    const double rdx = 1.0 / g.dx;
    const double rdy = 1.0 / g.dy;
    const int nx = g.nx, ny = g.ny;
    const bool px = g.periodic_x(), py = g.periodic_y();
    const double cor_sign = (ws.mutation == Mutation::CoriolisSign) ? -1.0 : 1.0;
    const double tmod = ws.forcing.active ? std::cos(ws.forcing.frequency * t) : 0.0;

    const Field2D& fz = ws.fz;

    if (!p.nonlinear) {
        // u tendency
        const int iu0 = px ? 0 : 1;
        const int iu1 = px ? nx - 1 : nx - 1;
        for (int j = 0; j < g.uny(); ++j) {
            const int jp1v = py ? g.wy(j + 1) : j + 1;
            const int jp1z = jp1v;
            if (!px) tend.u(0, j) = 0.0, tend.u(nx, j) = 0.0;
            for (int i = iu0; i <= iu1; ++i) {
                const int im1 = px ? g.wx(i - 1) : i - 1;
                const double cor =
                    0.25 * (fz(i, j) * (s.v(im1, j) + s.v(i, j)) +
                            fz(i, jp1z) * (s.v(im1, jp1v) + s.v(i, jp1v)));
                const double pgf = -p.g * (s.eta(i, j) - s.eta(im1, j)) * rdx;
                double du = cor_sign * cor + pgf - p.r * s.u(i, j);
                if (ws.forcing.active) du += ws.forcing.shape_u(i, j) * tmod;
                tend.u(i, j) = du;
            }
        }
        // v tendency
        const int jv0 = py ? 0 : 1;
        const int jv1 = py ? ny - 1 : ny - 1;
        if (!py)
            for (int i = 0; i < nx; ++i) tend.v(i, 0) = 0.0, tend.v(i, ny) = 0.0;
        for (int j = jv0; j <= jv1; ++j) {
            const int jm1 = py ? g.wy(j - 1) : j - 1;
            for (int i = 0; i < nx; ++i) {
                const int ip1u = px ? g.wx(i + 1) : i + 1;
                const int ip1z = ip1u;
                const double cor =
                    0.25 * (fz(i, j) * (s.u(i, jm1) + s.u(i, j)) +
                            fz(ip1z, j) * (s.u(ip1u, jm1) + s.u(ip1u, j)));
                const double pgf = -p.g * (s.eta(i, j) - s.eta(i, jm1)) * rdy;
                double dv = -cor_sign * cor + pgf - p.r * s.v(i, j);
                if (ws.forcing.active) dv += ws.forcing.shape_v(i, j) * tmod;
                tend.v(i, j) = dv;
            }
        }
        // eta tendency: -H div(u)
        for (int j = 0; j < ny; ++j) {
            const int jp1 = py ? g.wy(j + 1) : j + 1;
            for (int i = 0; i < nx; ++i) {
                const int ip1 = px ? g.wx(i + 1) : i + 1;
                const double divu = (s.u(ip1, j) - s.u(i, j)) * rdx + (s.v(i, jp1) - s.v(i, j)) * rdy;
                tend.eta(i, j) = -p.H * divu;
            }
        }
    } else {
        // thickness-weighted fluxes, kinetic energy, potential vorticity
        Field2D& U = ws.flux_u;
        Field2D& V = ws.flux_v;
        Field2D& K = ws.kin;
        Field2D& q = ws.q;
        if (U.nx() != g.unx() || U.ny() != g.uny()) U = Field2D(g.unx(), g.uny());
        if (V.nx() != g.vnx() || V.ny() != g.vny()) V = Field2D(g.vnx(), g.vny());
        if (K.nx() != nx || K.ny() != ny) K = Field2D(nx, ny);
        if (q.nx() != g.znx() || q.ny() != g.zny()) q = Field2D(g.znx(), g.zny());

        for (int j = 0; j < g.uny(); ++j)
            for (int i = 0; i < g.unx(); ++i) U(i, j) = thickness_at_u(s, g, p, i, j) * s.u(i, j);
        for (int j = 0; j < g.vny(); ++j)
            for (int i = 0; i < g.vnx(); ++i) V(i, j) = thickness_at_v(s, g, p, i, j) * s.v(i, j);
        for (int j = 0; j < ny; ++j) {
            const int jp1 = py ? g.wy(j + 1) : j + 1;
            for (int i = 0; i < nx; ++i) {
                const int ip1 = px ? g.wx(i + 1) : i + 1;
                K(i, j) = 0.25 * (s.u(i, j) * s.u(i, j) + s.u(ip1, j) * s.u(ip1, j)) +
                          0.25 * (s.v(i, j) * s.v(i, j) + s.v(i, jp1) * s.v(i, jp1));
            }
        }
        Field2D zeta = relative_vorticity(s, g);
        for (int j = 0; j < g.zny(); ++j) {
            for (int i = 0; i < g.znx(); ++i) {
                // corner thickness: mirror-clamped 4-cell average
                const int il = px ? g.wx(i - 1) : std::max(i - 1, 0);
                const int ir = px ? i % nx : std::min(i, nx - 1);
                const int jb = py ? g.wy(j - 1) : std::max(j - 1, 0);
                const int jt = py ? j % ny : std::min(j, ny - 1);
                const double hz =
                    p.H + 0.25 * (s.eta(il, jb) + s.eta(ir, jb) + s.eta(il, jt) + s.eta(ir, jt));
                q(i, j) = (zeta(i, j) + cor_sign * fz(i, j)) / hz;
            }
        }

        const int iu0 = px ? 0 : 1;
        for (int j = 0; j < g.uny(); ++j) {
            const int jp1v = py ? g.wy(j + 1) : j + 1;
            if (!px) tend.u(0, j) = 0.0, tend.u(nx, j) = 0.0;
            for (int i = iu0; i <= nx - 1; ++i) {
                const int im1 = px ? g.wx(i - 1) : i - 1;
                const double pv =
                    0.25 * (q(i, j) * (V(im1, j) + V(i, j)) +
                            q(i, jp1v) * (V(im1, jp1v) + V(i, jp1v)));
                const double phi_r = p.g * s.eta(i, j) + K(i, j);
                const double phi_l = p.g * s.eta(im1, j) + K(im1, j);
                double du = pv - (phi_r - phi_l) * rdx - p.r * s.u(i, j);
                if (ws.forcing.active) du += ws.forcing.shape_u(i, j) * tmod;
                tend.u(i, j) = du;
            }
        }
        const int jv0 = py ? 0 : 1;
        if (!py)
            for (int i = 0; i < nx; ++i) tend.v(i, 0) = 0.0, tend.v(i, ny) = 0.0;
        for (int j = jv0; j <= ny - 1; ++j) {
            const int jm1 = py ? g.wy(j - 1) : j - 1;
            for (int i = 0; i < nx; ++i) {
                const int ip1u = px ? g.wx(i + 1) : i + 1;
                const double pv =
                    0.25 * (q(i, j) * (U(i, jm1) + U(i, j)) +
                            q(ip1u, j) * (U(ip1u, jm1) + U(ip1u, j)));
                const double phi_t = p.g * s.eta(i, j) + K(i, j);
                const double phi_b = p.g * s.eta(i, jm1) + K(i, jm1);
                double dv = -pv - (phi_t - phi_b) * rdy - p.r * s.v(i, j);
                if (ws.forcing.active) dv += ws.forcing.shape_v(i, j) * tmod;
                tend.v(i, j) = dv;
            }
        }
        if (ws.mutation == Mutation::BreakFluxForm) {
            // advective-form continuity: consistent but not mass-conserving
            for (int j = 0; j < ny; ++j) {
                const int jp1 = py ? g.wy(j + 1) : j + 1;
                const int jm1c = py ? g.wy(j - 1) : std::max(j - 1, 0);
                const int jp1c = py ? g.wy(j + 1) : std::min(j + 1, ny - 1);
                for (int i = 0; i < nx; ++i) {
                    const int ip1 = px ? g.wx(i + 1) : i + 1;
                    const int im1c = px ? g.wx(i - 1) : std::max(i - 1, 0);
                    const int ip1c = px ? g.wx(i + 1) : std::min(i + 1, nx - 1);
                    const double h = p.H + s.eta(i, j);
                    const double divu =
                        (s.u(ip1, j) - s.u(i, j)) * rdx + (s.v(i, jp1) - s.v(i, j)) * rdy;
                    const double uc = 0.5 * (s.u(i, j) + s.u(ip1, j));
                    const double vc = 0.5 * (s.v(i, j) + s.v(i, jp1));
                    const double dhdx = 0.5 * (s.eta(ip1c, j) - s.eta(im1c, j)) * rdx;
                    const double dhdy = 0.5 * (s.eta(i, jp1c) - s.eta(i, jm1c)) * rdy;
                    tend.eta(i, j) = -(h * divu + uc * dhdx + vc * dhdy);
                }
            }
        } else {
            for (int j = 0; j < ny; ++j) {
                const int jp1 = py ? g.wy(j + 1) : j + 1;
                for (int i = 0; i < nx; ++i) {
                    const int ip1 = px ? g.wx(i + 1) : i + 1;
                    tend.eta(i, j) =
                        -((U(ip1, j) - U(i, j)) * rdx + (V(i, jp1) - V(i, j)) * rdy);
                }
            }
        }
    }

    // passive tracer: flux-form centered advection by the instantaneous velocity
    if (ws.advect_tracer && s.tracer) {
        const Field2D& c = *s.tracer;
        Field2D& dc = *tend.tracer;
        for (int j = 0; j < ny; ++j) {
            const int jp1 = py ? g.wy(j + 1) : j + 1;
            for (int i = 0; i < nx; ++i) {
                const int ip1 = px ? g.wx(i + 1) : i + 1;
                const int ip1c = px ? g.wx(i + 1) : std::min(i + 1, nx - 1);
                const int im1c = px ? g.wx(i - 1) : std::max(i - 1, 0);
                const int jp1c = py ? g.wy(j + 1) : std::min(j + 1, ny - 1);
                const int jm1c = py ? g.wy(j - 1) : std::max(j - 1, 0);
                const double fxr = s.u(ip1, j) * 0.5 * (c(i, j) + c(ip1c, j));
                const double fxl = s.u(i, j) * 0.5 * (c(im1c, j) + c(i, j));
                const double fyt = s.v(i, jp1) * 0.5 * (c(i, j) + c(i, jp1c));
                const double fyb = s.v(i, j) * 0.5 * (c(i, jm1c) + c(i, j));
                dc(i, j) = -((fxr - fxl) * rdx + (fyt - fyb) * rdy);
            }
        }
    }
}

inline void axpy(Field2D& out, const Field2D& k, double a) {
    for (std::size_t n = 0; n < out.size(); ++n) out.raw()[n] += a * k.raw()[n];
}

inline void state_axpy(State& out, const State& k, double a, bool with_tracer) {
    axpy(out.u, k.u, a);
    axpy(out.v, k.v, a);
    axpy(out.eta, k.eta, a);
    if (with_tracer) axpy(*out.tracer, *k.tracer, a);
}

/// One classical RK4 step of the full system.
inline void rk4_step(State& s, const Grid& g, const PhysParams& p, Workspace& ws, double dt) {
    const bool wt = ws.advect_tracer && s.tracer.has_value();
    State& k1 = ws.k1;
    State& k2 = ws.k2;
    State& k3 = ws.k3;
    State& k4 = ws.k4;
    State& stage = ws.stage;
    k1 = s;
    k2 = s;
    k3 = s;
    k4 = s;

    compute_tendency(s, g, p, ws, s.time, k1);

    stage = s;
    state_axpy(stage, k1, 0.5 * dt, wt);
    compute_tendency(stage, g, p, ws, s.time + 0.5 * dt, k2);

    stage = s;
    state_axpy(stage, k2, 0.5 * dt, wt);
    compute_tendency(stage, g, p, ws, s.time + 0.5 * dt, k3);

    stage = s;
    state_axpy(stage, k3, dt, wt);
    compute_tendency(stage, g, p, ws, s.time + dt, k4);

    const double w1 = dt / 6.0;
    const double w2 = dt / 3.0;
    state_axpy(s, k1, w1, wt);
    state_axpy(s, k2, w2, wt);
    state_axpy(s, k3, w2, wt);
    state_axpy(s, k4, w1, wt);
    s.time += dt;
}

}  // namespace detail

/// Advance `config.n_steps` RK4 steps. Throws CflViolation when dt exceeds
/// the stated limit for the initial state, and Blowup (with the step index)
/// when any field goes non-finite.
inline State step(const State& state, const Grid& g, const PhysParams& p, const StepConfig& config) {
    require_shapes(state, g);
    p.validate();
    if (!(config.dt > 0.0)) throw Error(Errc::UnsatisfiableConstraints, "dt must be positive");
    if (!state.all_finite()) throw Error(Errc::Blowup, "non-finite initial state", 0);
    if (!check_cfl(g, p, config.dt, state.max_speed()))
        throw Error(Errc::CflViolation, "dt exceeds CFL limit for initial state");

    detail::Workspace ws;
    ws.fz = detail::coriolis_at_corners(g, p, config.mutation);
    ws.forcing = detail::build_forcing_pattern(config.forcing, g);
    ws.mutation = config.mutation;
    ws.advect_tracer = state.tracer.has_value();

    State s = state;
    for (long n = 0; n < config.n_steps; ++n) {
        detail::rk4_step(s, g, p, ws, config.dt);
        if (!s.all_finite())
            throw Error(Errc::Blowup, "non-finite field after step " + std::to_string(n + 1),
                        static_cast<std::size_t>(n + 1));
    }
    return s;
}

/// Kinematic mode: advance only the tracer with the velocities held frozen.
inline State advect_tracer_only(const State& state, const Grid& g, const StepConfig& config) {
    require_shapes(state, g);
    if (!state.tracer) throw Error(Errc::ShapeMismatch, "advect_tracer_only requires a tracer field");
    if (!(config.dt > 0.0)) throw Error(Errc::UnsatisfiableConstraints, "dt must be positive");
    if (!state.all_finite()) throw Error(Errc::Blowup, "non-finite initial state", 0);

    const double rdx = 1.0 / g.dx;
    const double rdy = 1.0 / g.dy;
    const int nx = g.nx, ny = g.ny;
    const bool px = g.periodic_x(), py = g.periodic_y();

    auto tendency = [&](const Field2D& c, Field2D& dc) {
        for (int j = 0; j < ny; ++j) {
            const int jp1 = py ? g.wy(j + 1) : j + 1;
            for (int i = 0; i < nx; ++i) {
                const int ip1 = px ? g.wx(i + 1) : i + 1;
                const int ip1c = px ? g.wx(i + 1) : std::min(i + 1, nx - 1);
                const int im1c = px ? g.wx(i - 1) : std::max(i - 1, 0);
                const int jp1c = py ? g.wy(j + 1) : std::min(j + 1, ny - 1);
                const int jm1c = py ? g.wy(j - 1) : std::max(j - 1, 0);
                const double fxr = state.u(ip1, j) * 0.5 * (c(i, j) + c(ip1c, j));
                const double fxl = state.u(i, j) * 0.5 * (c(im1c, j) + c(i, j));
                const double fyt = state.v(i, jp1) * 0.5 * (c(i, j) + c(i, jp1c));
                const double fyb = state.v(i, j) * 0.5 * (c(i, jm1c) + c(i, j));
                dc(i, j) = -((fxr - fxl) * rdx + (fyt - fyb) * rdy);
            }
        }
    };

    State s = state;
    Field2D k1(nx, ny), k2(nx, ny), k3(nx, ny), k4(nx, ny), stage(nx, ny);
    for (long n = 0; n < config.n_steps; ++n) {
        Field2D& c = *s.tracer;
        tendency(c, k1);
        stage = c;
        detail::axpy(stage, k1, 0.5 * config.dt);
        tendency(stage, k2);
        stage = c;
        detail::axpy(stage, k2, 0.5 * config.dt);
        tendency(stage, k3);
        stage = c;
        detail::axpy(stage, k3, config.dt);
        tendency(stage, k4);
        detail::axpy(c, k1, config.dt / 6.0);
        detail::axpy(c, k2, config.dt / 3.0);
        detail::axpy(c, k3, config.dt / 3.0);
        detail::axpy(c, k4, config.dt / 6.0);
        s.time += config.dt;
        if (!c.all_finite())
            throw Error(Errc::Blowup, "non-finite tracer after step " + std::to_string(n + 1),
                        static_cast<std::size_t>(n + 1));
    }
    return s;
}

}  // namespace gfdprop
