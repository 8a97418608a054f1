#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "gfdprop/dispersion.hpp"
#include "gfdprop/error.hpp"
#include "gfdprop/field.hpp"
#include "gfdprop/grid.hpp"
#include "gfdprop/params.hpp"
#include "gfdprop/state.hpp"

namespace gfdprop {

/// Plane-wave description. (k, l) must sit on the periodic lattice when used
/// to initialize a state; omega carries the analytic dispersion value.
struct WaveSpec {
    double k = 0.0;      // [m^-1]
    double l = 0.0;
    double m = 0.0;      // vertical wavenumber, internal-wave calculator only
    double omega = 0.0;  // [s^-1]
    double amplitude = 0.0;  // eta amplitude [m]
};

/// Discrete symbols of the C-grid operators for lattice mode (jx, jy):
/// face difference  -> i * sk with sk = (2/dx) sin(k dx / 2)
/// 4-point average  -> ck * cl with ck = cos(k dx / 2)
struct LatticeMode {
    int jx = 0, jy = 0;
    double k = 0.0, l = 0.0;
    double sk = 0.0, sl = 0.0, ck = 1.0, cl = 1.0;
};

inline LatticeMode lattice_mode(int jx, int jy, const Grid& g) {
    LatticeMode md;
    md.jx = jx;
    md.jy = jy;
    md.k = 2.0 * std::numbers::pi * jx / g.lx();
    md.l = 2.0 * std::numbers::pi * jy / g.ly();
    md.sk = 2.0 / g.dx * std::sin(0.5 * md.k * g.dx);
    md.sl = 2.0 / g.dy * std::sin(0.5 * md.l * g.dy);
    md.ck = std::cos(0.5 * md.k * g.dx);
    md.cl = std::cos(0.5 * md.l * g.dy);
    return md;
}

/// Eigenfrequency of the discretized Poincare branch at a lattice mode.
inline double discrete_poincare_omega(const LatticeMode& md, const PhysParams& p) {
    const double C = md.ck * md.cl;
    return std::sqrt(p.f0 * p.f0 * C * C + p.g * p.H * (md.sk * md.sk + md.sl * md.sl));
}

/// Closed-basin gravity-mode eigenfrequency (f0 = 0) for mode (m, n):
/// the discrete analog of sqrt(gH) pi sqrt((m/Lx)^2 + (n/Ly)^2).
inline double discrete_basin_omega(int m, int n, const Grid& g, const PhysParams& p) {
    const double pi = std::numbers::pi;
    const double km = m * pi / g.lx();
    const double ln = n * pi / g.ly();
    const double sm = 2.0 / g.dx * std::sin(0.5 * km * g.dx);
    const double sn = 2.0 / g.dy * std::sin(0.5 * ln * g.dy);
    return std::sqrt(p.g * p.H * (sm * sm + sn * sn));
}

inline WaveSpec make_wave_spec(int jx, int jy, double amplitude, const Grid& g,
                               const PhysParams& p) {
    WaveSpec w;
    const LatticeMode md = lattice_mode(jx, jy, g);
    w.k = md.k;
    w.l = md.l;
    w.amplitude = amplitude;
    w.omega = (jx == 0 && jy == 0) ? 0.0 : dispersion_poincare(w.k, w.l, p);
    return w;
}

namespace detail {

/// Round k to the nearest lattice index and demand it is on the lattice.
inline int lattice_index(double k, double domain_len, const char* what) {
    const double j = k * domain_len / (2.0 * std::numbers::pi);
    const double jr = std::round(j);
    if (std::abs(j - jr) > 1e-9 * std::max(1.0, std::abs(j)) + 1e-12)
        throw Error(Errc::OffLatticeWavenumber, std::string(what) + " is not on the periodic lattice");
    return static_cast<int>(jr);
}

}  // namespace detail

/// Initialize the exact discrete Poincare eigenmode of the linearized scheme
/// with elevation amplitude A: eta = A cos(k x + l y) and (u, v) carrying the
/// discrete polarization for the positive-frequency branch, each field
/// sampled at its own staggered points. On the f-plane the state then
/// oscillates at the discrete eigenfrequency with no change of shape.
inline State init_poincare_wave(const WaveSpec& spec, const Grid& g, const PhysParams& p) {
    if (g.boundary != Boundary::PeriodicXY)
        throw Error(Errc::UnsatisfiableConstraints, "plane-wave initialization needs PeriodicXY");
    if (p.beta != 0.0)
        throw Error(Errc::UnsatisfiableConstraints, "plane-wave initialization is f-plane only");
    State s = make_state(g);
    if (spec.amplitude == 0.0) return s;

    const int jx = detail::lattice_index(spec.k, g.lx(), "k");
    const int jy = detail::lattice_index(spec.l, g.ly(), "l");
    if (jx == 0 && jy == 0) throw Error(Errc::ZeroWavevector, "wave needs a nonzero wavevector");
    const LatticeMode md = lattice_mode(jx, jy, g);

    const double omega = discrete_poincare_omega(md, p);
    const double C = md.ck * md.cl;
    const double denom = p.H * (md.sk * md.sk + md.sl * md.sl);
    // complex polarization (u, v) = (ur + i ui, vr + i vi) per unit eta
    const double ur = omega * md.sk / denom;
    const double ui = p.f0 * C * md.sl / denom;
    const double vr = omega * md.sl / denom;
    const double vi = -p.f0 * C * md.sk / denom;

    const double A = spec.amplitude;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            s.eta(i, j) = A * std::cos(md.k * g.xc(i) + md.l * g.yc(j));
    for (int j = 0; j < g.uny(); ++j)
        for (int i = 0; i < g.unx(); ++i) {
            const double ph = md.k * g.xu(i) + md.l * g.yu(j);
            s.u(i, j) = A * (ur * std::cos(ph) - ui * std::sin(ph));
        }
    for (int j = 0; j < g.vny(); ++j)
        for (int i = 0; i < g.vnx(); ++i) {
            const double ph = md.k * g.xv(i) + md.l * g.yv(j);
            s.v(i, j) = A * (vr * std::cos(ph) - vi * std::sin(ph));
        }
    return s;
}

namespace detail {

/// Energy of a field and of its projection onto the cos/sin pair at lattice
/// phases, as (sum of squares, projected sum of squares).
template <typename PhaseFn>
inline std::pair<double, double> mode_projection_energy(const Field2D& f, PhaseFn&& phase) {
    double sc = 0.0, ss = 0.0, scc = 0.0, sss = 0.0, scs = 0.0, s2 = 0.0;
    for (int j = 0; j < f.ny(); ++j)
        for (int i = 0; i < f.nx(); ++i) {
            const double ph = phase(i, j);
            const double c = std::cos(ph), sn = std::sin(ph);
            const double val = f(i, j);
            sc += val * c;
            ss += val * sn;
            scc += c * c;
            sss += sn * sn;
            scs += c * sn;
            s2 += val * val;
        }
    const double det = scc * sss - scs * scs;
    double proj = 0.0;
    if (det > 1e-12 * (scc + sss) * (scc + sss)) {
        const double a = (sc * sss - ss * scs) / det;
        const double b = (ss * scc - sc * scs) / det;
        proj = a * sc + b * ss;
    } else if (scc + sss > 0.0) {
        // degenerate pair (pure cosine or sine on this lattice)
        proj = (scc >= sss) ? sc * sc / scc : ss * ss / sss;
    }
    return {s2, proj};
}

}  // namespace detail

/// Energy fraction of a periodic linear-mode state outside the (jx, jy)
/// lattice bin, computed from exact lattice projections of each staggered
/// field onto its own cos/sin phases.
inline double mode_leakage(const State& s, const Grid& g, const PhysParams& p, int jx, int jy) {
    const LatticeMode md = lattice_mode(jx, jy, g);
    auto [u2, up] = detail::mode_projection_energy(
        s.u, [&](int i, int j) { return md.k * g.xu(i) + md.l * g.yu(j); });
    auto [v2, vp] = detail::mode_projection_energy(
        s.v, [&](int i, int j) { return md.k * g.xv(i) + md.l * g.yv(j); });
    auto [e2, ep] = detail::mode_projection_energy(
        s.eta, [&](int i, int j) { return md.k * g.xc(i) + md.l * g.yc(j); });
    const double total = 0.5 * p.H * (u2 + v2) + 0.5 * p.g * e2;
    if (total <= 0.0) return 0.0;
    const double resid = 0.5 * p.H * (u2 - up + v2 - vp) + 0.5 * p.g * (e2 - ep);
    return std::max(resid, 0.0) / total;
}

}  // namespace gfdprop
