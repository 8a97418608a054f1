#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "gfdprop/error.hpp"
#include "gfdprop/field.hpp"
#include "gfdprop/grid.hpp"
#include "gfdprop/params.hpp"
#include "gfdprop/state.hpp"

namespace gfdprop {

namespace detail {

/// eta value with mirror ghosts outside closed walls (Neumann extension).
inline double eta_at(const Field2D& eta, const Grid& g, int i, int j) {
    if (g.periodic_x()) {
        i = g.wx(i);
    } else {
        if (i < 0) i = 0;
        if (i > g.nx - 1) i = g.nx - 1;
    }
    if (g.periodic_y()) {
        j = g.wy(j);
    } else {
        if (j < 0) j = 0;
        if (j > g.ny - 1) j = g.ny - 1;
    }
    return eta(i, j);
}

/// Apply the balance map B: eta -> (u, v). Forward declaration; definition
/// below with the adjoint.
inline void apply_balance_map(const Field2D& eta, const Grid& g, double gf, Field2D& u, Field2D& v);

}  // namespace detail

/// Remove the grid-scale elevation lines the cross-averaged geostrophic map
/// cannot see: Nyquist columns/rows are exactly null on periodic grids and
/// near-null (wall cells only) on closed ones, so the balance roundtrip is
/// only well posed on their complement. Smooth recipes carry ~1e-8 of them.
inline void remove_balance_null_modes(Field2D& eta, const Grid& g) {
    if (g.nx % 2 == 0) {
        for (int j = 0; j < g.ny; ++j) {
            double c = 0.0;
            for (int i = 0; i < g.nx; ++i) c += eta(i, j) * ((i % 2 == 0) ? 1.0 : -1.0);
            c /= g.nx;
            for (int i = 0; i < g.nx; ++i) eta(i, j) -= c * ((i % 2 == 0) ? 1.0 : -1.0);
        }
    }
    if (g.ny % 2 == 0) {
        for (int i = 0; i < g.nx; ++i) {
            double c = 0.0;
            for (int j = 0; j < g.ny; ++j) c += eta(i, j) * ((j % 2 == 0) ? 1.0 : -1.0);
            c /= g.ny;
            for (int j = 0; j < g.ny; ++j) eta(i, j) -= c * ((j % 2 == 0) ? 1.0 : -1.0);
        }
    }
}

/// Geostrophic velocities from an elevation field on the f-plane:
/// u = -(g/f) d(eta)/dy and v = +(g/f) d(eta)/dx evaluated at the face
/// points with the four-point cross average. The construction is the
/// discrete curl of the corner-averaged streamfunction (g/f)*eta, so its
/// divergence vanishes identically.
inline std::pair<Field2D, Field2D> geostrophic_from_eta(const Field2D& eta, const Grid& g,
                                                        const PhysParams& p) {
    if (eta.nx() != g.nx || eta.ny() != g.ny)
        throw Error(Errc::ShapeMismatch, "eta shape does not match grid");
    if (p.f0 == 0.0) throw Error(Errc::ZeroCoriolis, "geostrophic balance requires f0 != 0");

    Field2D u(g.unx(), g.uny());
    Field2D v(g.vnx(), g.vny());
    detail::apply_balance_map(eta, g, p.g / p.f0, u, v);
    return {std::move(u), std::move(v)};
}

/// Discrete divergence du/dx + dv/dy at cell centers.
inline Field2D divergence(const Field2D& u, const Field2D& v, const Grid& g) {
    Field2D d(g.nx, g.ny);
    const double rdx = 1.0 / g.dx, rdy = 1.0 / g.dy;
    for (int j = 0; j < g.ny; ++j) {
        const int jp1 = g.periodic_y() ? g.wy(j + 1) : j + 1;
        for (int i = 0; i < g.nx; ++i) {
            const int ip1 = g.periodic_x() ? g.wx(i + 1) : i + 1;
            d(i, j) = (u(ip1, j) - u(i, j)) * rdx + (v(i, jp1) - v(i, j)) * rdy;
        }
    }
    return d;
}

namespace detail {

inline void apply_balance_map(const Field2D& eta, const Grid& g, double gf, Field2D& u, Field2D& v) {
    const int iu0 = g.periodic_x() ? 0 : 1;
    for (int j = 0; j < g.uny(); ++j) {
        if (!g.periodic_x()) u(0, j) = 0.0, u(g.nx, j) = 0.0;
        for (int i = iu0; i <= g.nx - 1; ++i) {
            const double num = eta_at(eta, g, i - 1, j + 1) + eta_at(eta, g, i, j + 1) -
                               eta_at(eta, g, i - 1, j - 1) - eta_at(eta, g, i, j - 1);
            u(i, j) = -gf * num / (4.0 * g.dy);
        }
    }
    const int jv0 = g.periodic_y() ? 0 : 1;
    if (!g.periodic_y())
        for (int i = 0; i < g.vnx(); ++i) v(i, 0) = 0.0, v(i, g.ny) = 0.0;
    for (int j = jv0; j <= g.ny - 1; ++j) {
        for (int i = 0; i < g.vnx(); ++i) {
            const double num = eta_at(eta, g, i + 1, j - 1) + eta_at(eta, g, i + 1, j) -
                               eta_at(eta, g, i - 1, j - 1) - eta_at(eta, g, i - 1, j);
            v(i, j) = gf * num / (4.0 * g.dx);
        }
    }
}

/// Adjoint of apply_balance_map (loop-transposed scatter).
inline void apply_balance_map_adjoint(const Field2D& u, const Field2D& v, const Grid& g, double gf,
                                      Field2D& out) {
    out.fill(0.0);
    auto scatter = [&](int i, int j, double w) {
        if (g.periodic_x()) {
            i = g.wx(i);
        } else {
            if (i < 0) i = 0;
            if (i > g.nx - 1) i = g.nx - 1;
        }
        if (g.periodic_y()) {
            j = g.wy(j);
        } else {
            if (j < 0) j = 0;
            if (j > g.ny - 1) j = g.ny - 1;
        }
        out(i, j) += w;
    };
    const int iu0 = g.periodic_x() ? 0 : 1;
    for (int j = 0; j < g.uny(); ++j) {
        for (int i = iu0; i <= g.nx - 1; ++i) {
            const double w = -gf * u(i, j) / (4.0 * g.dy);
            scatter(i - 1, j + 1, w);
            scatter(i, j + 1, w);
            scatter(i - 1, j - 1, -w);
            scatter(i, j - 1, -w);
        }
    }
    const int jv0 = g.periodic_y() ? 0 : 1;
    for (int j = jv0; j <= g.ny - 1; ++j) {
        for (int i = 0; i < g.vnx(); ++i) {
            const double w = gf * v(i, j) / (4.0 * g.dx);
            scatter(i + 1, j - 1, w);
            scatter(i + 1, j, w);
            scatter(i - 1, j - 1, -w);
            scatter(i - 1, j, -w);
        }
    }
}

inline void subtract_mean(Field2D& f) {
    const double mean = f.sum() / static_cast<double>(f.size());
    for (double& v : f.raw()) v -= mean;
}

inline double dot(const Field2D& a, const Field2D& b) {
    double s = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) s += a.raw()[n] * b.raw()[n];
    return s;
}

}  // namespace detail

/// Recover the elevation field whose geostrophic velocities are (u, v):
/// conjugate-gradient solve of the normal equations B^T B eta = B^T (u, v)
/// of the discrete balance map, with the mean-zero gauge. For inputs in the
/// range of geostrophic_from_eta this inverts it exactly (to solver
/// tolerance); the forward map composed with this solve is the smoothed
/// five-point Poisson problem grad^2 eta = (f/g) zeta.
inline Field2D eta_from_velocity(const Field2D& u, const Field2D& v, const Grid& g,
                                 const PhysParams& p) {
    if (u.nx() != g.unx() || u.ny() != g.uny() || v.nx() != g.vnx() || v.ny() != g.vny())
        throw Error(Errc::ShapeMismatch, "velocity shapes do not match grid");
    if (p.f0 == 0.0) throw Error(Errc::ZeroCoriolis, "balance inversion requires f0 != 0");

    const double max_speed = std::max(u.max_abs(), v.max_abs());
    Field2D div = divergence(u, v, g);
    const double div_tol = 1e-10 * max_speed / std::min(g.dx, g.dy);
    if (div.max_abs() > div_tol)
        throw Error(Errc::DivergentInput, "velocity field is discretely divergent");
    if (max_speed == 0.0) return Field2D(g.nx, g.ny);

    const double gf = p.g / p.f0;

    // normal-equation operator: eta -> B^T B eta, restricted to mean zero
    Field2D tu(g.unx(), g.uny()), tv(g.vnx(), g.vny());
    auto apply_A = [&](const Field2D& x, Field2D& out) {
        detail::apply_balance_map(x, g, gf, tu, tv);
        detail::apply_balance_map_adjoint(tu, tv, g, gf, out);
        detail::subtract_mean(out);
    };

    Field2D rhs(g.nx, g.ny);
    detail::apply_balance_map_adjoint(u, v, g, gf, rhs);
    detail::subtract_mean(rhs);

    Field2D x(g.nx, g.ny), rr(g.nx, g.ny), pdir(g.nx, g.ny), Ap(g.nx, g.ny);
    rr = rhs;
    pdir = rr;
    double rs_old = detail::dot(rr, rr);
    const double rhs_norm = std::sqrt(rs_old);
    if (rhs_norm == 0.0) return x;
    // the normal equations square the conditioning, so drive the residual to
    // its roundoff floor; accept a stall only once it sits far below 1e-12
    const double tol = 1e-15 * rhs_norm;
    const double accept = 1e-12 * rhs_norm;
    const long max_iter = 100L * (g.nx + g.ny);
    double best = rhs_norm;
    long stagnant = 0;
    bool converged = false;
    for (long it = 0; it < max_iter; ++it) {
        apply_A(pdir, Ap);
        const double pAp = detail::dot(pdir, Ap);
        if (pAp <= 0.0) break;
        const double alpha = rs_old / pAp;
        for (std::size_t n = 0; n < x.size(); ++n) x.raw()[n] += alpha * pdir.raw()[n];
        for (std::size_t n = 0; n < rr.size(); ++n) rr.raw()[n] -= alpha * Ap.raw()[n];
        const double rs_new = detail::dot(rr, rr);
        const double rnorm = std::sqrt(rs_new);
        if (rnorm <= tol) {
            converged = true;
            break;
        }
        if (rnorm < 0.99 * best) {
            best = rnorm;
            stagnant = 0;
        } else if (++stagnant > 300) {
            break;  // residual floor reached
        }
        const double beta = rs_new / rs_old;
        for (std::size_t n = 0; n < pdir.size(); ++n)
            pdir.raw()[n] = rr.raw()[n] + beta * pdir.raw()[n];
        rs_old = rs_new;
    }
    if (!converged && best > accept)
        throw Error(Errc::NoConvergence, "balance inversion CG did not converge");
    detail::subtract_mean(x);
    return x;
}

/// Build a balanced state from a raw elevation recipe: strip the null modes
/// the balance map cannot see, then attach the geostrophic velocities.
inline State make_balanced_state(Field2D eta, const Grid& g, const PhysParams& p) {
    remove_balance_null_modes(eta, g);
    auto [u, v] = geostrophic_from_eta(eta, g, p);
    State s = make_state(g);
    s.u = std::move(u);
    s.v = std::move(v);
    s.eta = std::move(eta);
    return s;
}

/// Generator validity report: non-divergence, velocity/pressure-gradient
/// orthogonality at cell centers, and the balance roundtrip residual.
struct ValidityReport {
    bool div_ok = false;
    bool orth_ok = false;
    bool roundtrip_ok = false;
    double div_residual = 0.0;        // L-inf of divergence [s^-1]
    double orth_residual = 0.0;       // normalized
    double roundtrip_residual = 0.0;  // relative L-inf
    bool all_ok() const { return div_ok && orth_ok && roundtrip_ok; }
};

inline constexpr double kTolOrth = 1e-8;
inline constexpr double kTolRoundtrip = 1e-8;

inline ValidityReport validity_checks(const Field2D& u, const Field2D& v, const Field2D& eta,
                                      const Grid& g, const PhysParams& p) {
    ValidityReport rep;
    const double max_speed = std::max(u.max_abs(), v.max_abs());

    // (a) discrete divergence
    Field2D div = divergence(u, v, g);
    rep.div_residual = div.max_abs();
    const double div_tol = 1e-10 * max_speed / std::min(g.dx, g.dy);
    rep.div_ok = rep.div_residual <= div_tol;

    // (b) orthogonality of (u, v) and grad(eta) at cell centers. The center
    // gradient uses the wide centered difference smoothed in the conjugate
    // direction, which pairs exactly with the cross-averaged construction.
    double num = 0.0, den = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        const int jp1 = g.periodic_y() ? g.wy(j + 1) : j + 1;
        for (int i = 0; i < g.nx; ++i) {
            const int ip1 = g.periodic_x() ? g.wx(i + 1) : i + 1;
            const double uc = 0.5 * (u(i, j) + u(ip1, j));
            const double vc = 0.5 * (v(i, j) + v(i, jp1));
            const double px =
                (detail::eta_at(eta, g, i + 1, j - 1) + 2.0 * detail::eta_at(eta, g, i + 1, j) +
                 detail::eta_at(eta, g, i + 1, j + 1) - detail::eta_at(eta, g, i - 1, j - 1) -
                 2.0 * detail::eta_at(eta, g, i - 1, j) - detail::eta_at(eta, g, i - 1, j + 1)) /
                (8.0 * g.dx);
            const double py =
                (detail::eta_at(eta, g, i - 1, j + 1) + 2.0 * detail::eta_at(eta, g, i, j + 1) +
                 detail::eta_at(eta, g, i + 1, j + 1) - detail::eta_at(eta, g, i - 1, j - 1) -
                 2.0 * detail::eta_at(eta, g, i, j - 1) - detail::eta_at(eta, g, i + 1, j - 1)) /
                (8.0 * g.dy);
            num = std::max(num, std::abs(uc * px + vc * py));
            den = std::max(den, std::sqrt((uc * uc + vc * vc) * (px * px + py * py)));
        }
    }
    rep.orth_residual = (den > 0.0) ? num / den : 0.0;
    rep.orth_ok = rep.orth_residual <= kTolOrth;

    // (c) balance roundtrip
    try {
        Field2D eta_rec = eta_from_velocity(u, v, g, p);
        Field2D eta0 = eta;
        detail::subtract_mean(eta0);
        const double scale = std::max(eta0.max_abs(), 1e-300);
        rep.roundtrip_residual = max_abs_diff(eta_rec, eta0) / scale;
        rep.roundtrip_ok = rep.roundtrip_residual <= kTolRoundtrip;
    } catch (const Error&) {
        rep.roundtrip_ok = false;
        rep.roundtrip_residual = std::numeric_limits<double>::infinity();
    }
    return rep;
}

}  // namespace gfdprop
