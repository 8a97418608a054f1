#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>
#include <utility>

#include "gfdprop/dynamics.hpp"
#include "gfdprop/error.hpp"
#include "gfdprop/grid.hpp"
#include "gfdprop/params.hpp"
#include "gfdprop/state.hpp"
#include "gfdprop/waves.hpp"

namespace gfdprop {

/// Flattening order of the linear-system degrees of freedom: the u block,
/// then v, then eta, each row-major. Wall faces are carried as identically
/// zero rows/columns so the index map stays a clean bijection.
struct DofMap {
    int unx = 0, uny = 0, vnx = 0, vny = 0, nx = 0, ny = 0;

    int n_u() const { return unx * uny; }
    int n_v() const { return vnx * vny; }
    int n_eta() const { return nx * ny; }
    int n_dof() const { return n_u() + n_v() + n_eta(); }

    int u_index(int i, int j) const { return j * unx + i; }
    int v_index(int i, int j) const { return n_u() + j * vnx + i; }
    int eta_index(int i, int j) const { return n_u() + n_v() + j * nx + i; }

    static DofMap from_grid(const Grid& g) {
        return DofMap{g.unx(), g.uny(), g.vnx(), g.vny(), g.nx, g.ny};
    }
};

inline Eigen::VectorXd flatten(const State& s, const DofMap& m) {
    Eigen::VectorXd x(m.n_dof());
    int n = 0;
    for (double v : s.u.raw()) x[n++] = v;
    for (double v : s.v.raw()) x[n++] = v;
    for (double v : s.eta.raw()) x[n++] = v;
    return x;
}

inline State unflatten(const Eigen::VectorXd& x, const Grid& g, double time = 0.0) {
    State s = make_state(g);
    int n = 0;
    for (double& v : s.u.raw()) v = x[n++];
    for (double& v : s.v.raw()) v = x[n++];
    for (double& v : s.eta.raw()) v = x[n++];
    s.time = time;
    return s;
}

/// Dense matrix of the discretized linear shallow-water system on one grid,
/// built by probing the solver right-hand side with unit basis states.
struct LinearOperator {
    Grid grid;
    PhysParams params;
    DofMap dof;
    Eigen::MatrixXd matrix;
};

inline constexpr int kMaxDenseDof = 20000;

namespace detail {

inline void apply_rhs(const Grid& g, const PhysParams& p, Workspace& ws, const State& s,
                      State& tend) {
    compute_tendency(s, g, p, ws, 0.0, tend);
}

}  // namespace detail

inline LinearOperator assemble(const Grid& g, const PhysParams& p) {
    if (p.nonlinear)
        throw Error(Errc::UnsatisfiableConstraints, "the dense oracle covers the linear system only");
    const DofMap m = DofMap::from_grid(g);
    if (m.n_dof() > kMaxDenseDof)
        throw Error(Errc::TooLargeGrid,
                    "dense assembly capped at " + std::to_string(kMaxDenseDof) + " dofs");

    detail::Workspace ws;
    ws.fz = detail::coriolis_at_corners(g, p, Mutation::None);

    LinearOperator op{g, p, m, Eigen::MatrixXd::Zero(m.n_dof(), m.n_dof())};
    State basis = make_state(g);
    State tend = make_state(g);
    Eigen::VectorXd col(m.n_dof());
    for (int jdof = 0; jdof < m.n_dof(); ++jdof) {
        // place the unit basis state
        Eigen::VectorXd e = Eigen::VectorXd::Zero(m.n_dof());
        e[jdof] = 1.0;
        basis = unflatten(e, g);
        detail::apply_rhs(g, p, ws, basis, tend);
        col = flatten(tend, m);
        op.matrix.col(jdof) = col;
    }
    return op;
}

/// Exact solution of the space-discretized linear system: exp(t A) x by
/// scaling-and-squaring.
inline State evolve_exact(const LinearOperator& op, const State& state, double t) {
    require_shapes(state, op.grid);
    Eigen::VectorXd x = flatten(state, op.dof);
    Eigen::MatrixXd expAt = (t * op.matrix).exp();
    Eigen::VectorXd y = expAt * x;
    return unflatten(y, op.grid, state.time + t);
}

/// Diagonal weights of the discrete energy inner product E = x^T diag(w) x / 2.
inline Eigen::VectorXd energy_weights(const Grid& g, const PhysParams& p) {
    const DofMap m = DofMap::from_grid(g);
    Eigen::VectorXd w(m.n_dof());
    const double dA = g.cell_area();
    int n = 0;
    for (int k = 0; k < m.n_u() + m.n_v(); ++k) w[n++] = p.H * dA;
    for (int k = 0; k < m.n_eta(); ++k) w[n++] = p.g * dA;
    return w;
}

namespace detail {

/// Basis of the 6-dimensional invariant subspace of lattice mode (jx, jy):
/// cos and sin patterns in each of u, v, eta at their staggered phases.
inline std::array<Eigen::VectorXd, 6> mode_basis(const Grid& g, const DofMap& m, int jx, int jy) {
    const LatticeMode md = lattice_mode(jx, jy, g);
    std::array<Eigen::VectorXd, 6> b;
    for (auto& v : b) v = Eigen::VectorXd::Zero(m.n_dof());
    for (int j = 0; j < m.uny; ++j)
        for (int i = 0; i < m.unx; ++i) {
            const double ph = md.k * g.xu(i) + md.l * g.yu(j);
            b[0][m.u_index(i, j)] = std::cos(ph);
            b[1][m.u_index(i, j)] = std::sin(ph);
        }
    for (int j = 0; j < m.vny; ++j)
        for (int i = 0; i < m.vnx; ++i) {
            const double ph = md.k * g.xv(i) + md.l * g.yv(j);
            b[2][m.v_index(i, j)] = std::cos(ph);
            b[3][m.v_index(i, j)] = std::sin(ph);
        }
    for (int j = 0; j < m.ny; ++j)
        for (int i = 0; i < m.nx; ++i) {
            const double ph = md.k * g.xc(i) + md.l * g.yc(j);
            b[4][m.eta_index(i, j)] = std::cos(ph);
            b[5][m.eta_index(i, j)] = std::sin(ph);
        }
    return b;
}

/// Poincare eigenfrequency from the operator restricted to the (jx, jy)
/// subspace. `apply` maps a flattened state to the RHS.
template <typename ApplyFn>
inline double subspace_poincare_omega(const Grid& g, int jx, int jy, ApplyFn&& apply) {
    const DofMap m = DofMap::from_grid(g);
    auto basis = mode_basis(g, m, jx, jy);
    Eigen::MatrixXd B(m.n_dof(), 6), AB(m.n_dof(), 6);
    for (int c = 0; c < 6; ++c) {
        B.col(c) = basis[c];
        AB.col(c) = apply(basis[c]);
    }
    Eigen::MatrixXd G = B.transpose() * B;
    Eigen::MatrixXd M = B.transpose() * AB;
    // restricted operator in the mode basis (G is well conditioned on-lattice)
    Eigen::MatrixXd C = G.ldlt().solve(M);
    Eigen::EigenSolver<Eigen::MatrixXd> es(C);
    double omega = 0.0;
    for (int k = 0; k < 6; ++k) omega = std::max(omega, std::abs(es.eigenvalues()[k].imag()));
    return omega;
}

}  // namespace detail

/// Numerically determined dispersion frequency of the Poincare branch for a
/// lattice wave, from the assembled operator.
inline double discrete_dispersion(const LinearOperator& op, const WaveSpec& spec) {
    if (op.grid.boundary != Boundary::PeriodicXY)
        throw Error(Errc::UnsatisfiableConstraints, "discrete dispersion requires PeriodicXY");
    const int jx = detail::lattice_index(spec.k, op.grid.lx(), "k");
    const int jy = detail::lattice_index(spec.l, op.grid.ly(), "l");
    if (jx == 0 && jy == 0) throw Error(Errc::ZeroWavevector, "zero wavevector");
    return detail::subspace_poincare_omega(op.grid, jx, jy, [&](const Eigen::VectorXd& x) {
        return Eigen::VectorXd(op.matrix * x);
    });
}

/// Matrix-free variant for grids too large to assemble densely: applies the
/// solver RHS to the six basis states directly.
inline double discrete_dispersion(const Grid& g, const PhysParams& p, const WaveSpec& spec) {
    if (g.boundary != Boundary::PeriodicXY)
        throw Error(Errc::UnsatisfiableConstraints, "discrete dispersion requires PeriodicXY");
    if (p.nonlinear) throw Error(Errc::UnsatisfiableConstraints, "linear mode only");
    const int jx = detail::lattice_index(spec.k, g.lx(), "k");
    const int jy = detail::lattice_index(spec.l, g.ly(), "l");
    if (jx == 0 && jy == 0) throw Error(Errc::ZeroWavevector, "zero wavevector");

    detail::Workspace ws;
    ws.fz = detail::coriolis_at_corners(g, p, Mutation::None);
    State s = make_state(g), tend = make_state(g);
    const DofMap m = DofMap::from_grid(g);
    return detail::subspace_poincare_omega(g, jx, jy, [&](const Eigen::VectorXd& x) {
        s = unflatten(x, g);
        detail::apply_rhs(g, p, ws, s, tend);
        return flatten(tend, m);
    });
}

}  // namespace gfdprop
