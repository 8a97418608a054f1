#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "gfdprop/balance.hpp"
#include "gfdprop/checkpoint.hpp"
#include "gfdprop/diagnostics.hpp"
#include "gfdprop/dynamics.hpp"
#include "gfdprop/linear_oracle.hpp"
#include "gfdprop/rng.hpp"
#include "gfdprop/waves.hpp"

using namespace gfdprop;

namespace {

State gaussian_vortex_state(const Grid& g, const PhysParams& p, double eta0, double width) {
    Field2D eta(g.nx, g.ny);
    const double xm = 0.5 * g.lx(), ym = 0.5 * g.ly();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double dx = g.xc(i) - xm, dy = g.yc(j) - ym;
            eta(i, j) = eta0 * std::exp(-(dx * dx + dy * dy) / (2.0 * width * width));
        }
    auto [u, v] = geostrophic_from_eta(eta, g, p);
    State s = make_state(g);
    s.u = u;
    s.v = v;
    s.eta = eta;
    enforce_walls(s, g);
    return s;
}

}  // namespace

// ============================================================================
// check_cfl
// ============================================================================

TEST_CASE("check_cfl: arithmetic of the stated rule") {
    Grid g = make_grid(16, 16, 1e4, 1e4, Boundary::PeriodicXY);
    PhysParams p;
    p.g = 10.0;
    p.H = 1000.0;  // c = 100, limit = 0.5*1e4/100 = 50
    CHECK(check_cfl(g, p, 40.0, 0.0));
    CHECK_FALSE(check_cfl(g, p, 60.0, 0.0));
    CHECK(check_cfl(g, p, 50.0, 0.0));  // inclusive at the limit
    CHECK_FALSE(check_cfl(g, p, 50.0, 1.0));
}

// ============================================================================
// step(): degenerate dynamics
// ============================================================================

TEST_CASE("step: rest state stays at rest bitwise") {
    Grid g = make_grid(16, 16, 1e4, 1e4, Boundary::PeriodicXY);
    PhysParams p;
    State s0 = make_state(g);
    StepConfig cfg{30.0, 100, std::nullopt};
    State s1 = step(s0, g, p, cfg);
    CHECK(s1.u == s0.u);
    CHECK(s1.v == s0.v);
    CHECK(s1.eta == s0.eta);
    CHECK(s1.time == 3000.0);
}

TEST_CASE("step: uniform elevation on a periodic grid is steady") {
    Grid g = make_grid(16, 16, 1e4, 1e4, Boundary::PeriodicXY);
    PhysParams p;
    State s0 = make_state(g);
    s0.eta.fill(0.75);
    StepConfig cfg{30.0, 50, std::nullopt};
    State s1 = step(s0, g, p, cfg);
    CHECK(s1.u == s0.u);
    CHECK(s1.v == s0.v);
    CHECK(s1.eta == s0.eta);
}

TEST_CASE("step: deterministic, identical runs produce identical bits") {
    Grid g = make_grid(16, 16, 8e3, 8e3, Boundary::ClosedBasin);
    PhysParams p;
    p.f0 = 1e-4;
    State s0 = gaussian_vortex_state(g, p, 0.5, 3 * g.dx);
    StepConfig cfg{20.0, 57, std::nullopt};
    State a = step(s0, g, p, cfg);
    State b = step(s0, g, p, cfg);
    CHECK(a == b);
}

// ============================================================================
// step(): error contracts
// ============================================================================

TEST_CASE("step: CFL-violating configuration raises, never returns NaN") {
    Grid g = make_grid(16, 16, 1e4, 1e4, Boundary::PeriodicXY);
    PhysParams p;
    p.g = 10.0;
    p.H = 1000.0;
    State s0 = make_state(g);
    s0.eta(4, 4) = 1.0;
    StepConfig cfg{200.0, 100, std::nullopt};  // limit is 50
    CHECK_THROWS_MATCHES(step(s0, g, p, cfg), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == Errc::CflViolation; }));
}

TEST_CASE("step: blowup mid-run reports the step index") {
    Grid g = make_grid(16, 16, 1e4, 1e4, Boundary::PeriodicXY);
    PhysParams p;
    p.g = 10.0;
    p.H = 1000.0;
    p.nonlinear = true;
    // passes the formal CFL check at rest, but the finite-amplitude bump
    // carries a faster local wave speed: the run must end in Blowup rather
    // than return non-finite fields silently
    State s0 = make_state(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double dx = g.xc(i) - 0.5 * g.lx(), dy = g.yc(j) - 0.5 * g.ly();
            s0.eta(i, j) = 8000.0 * std::exp(-(dx * dx + dy * dy) / (2.0 * 9e8));
        }
    StepConfig cfg{49.9, 2000, std::nullopt};
    try {
        step(s0, g, p, cfg);
        FAIL("expected blowup");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::Blowup);
        CHECK(e.index() > 0);
    }
}

// ============================================================================
// Friction-only decay
// ============================================================================

TEST_CASE("step: Rayleigh friction decays velocity exponentially") {
    Grid g = make_grid(16, 16, 1e4, 1e4, Boundary::PeriodicXY);
    PhysParams p;
    p.f0 = 0.0;
    p.beta = 0.0;
    p.r = 1e-3;
    State s0 = make_state(g);
    for (double& v : s0.u.raw()) v = 0.2;  // uniform, eta = 0: no gradients
    const double dt = 10.0;                // r*dt = 0.01
    const long n = 300;
    StepConfig cfg{dt, n, std::nullopt};
    State s1 = step(s0, g, p, cfg);
    const double expected = 0.2 * std::exp(-p.r * dt * n);
    const double tol = n * std::pow(p.r * dt, 5.0) / 100.0 * 0.2 + 1e-15;
    double worst = 0.0;
    for (int j = 0; j < g.uny(); ++j)
        for (int i = 0; i < g.unx(); ++i)
            worst = std::max(worst, std::abs(s1.u(i, j) - expected));
    CHECK(worst <= tol);
    CHECK(s1.v.max_abs() == 0.0);
}

// ============================================================================
// Mass / energy over long runs
// ============================================================================

TEST_CASE("step: mass and energy conserved for a balanced vortex, 1000 steps") {
    for (Boundary b : {Boundary::PeriodicXY, Boundary::ClosedBasin}) {
        Grid g = make_grid(32, 32, 1e4, 1e4, b);
        PhysParams p;
        p.g = 10.0;
        p.H = 1000.0;
        p.f0 = 1e-4;
        State s0 = gaussian_vortex_state(g, p, 0.4, 4 * g.dx);
        Diagnostics d0 = compute_diagnostics(s0, g, p);
        const double dt = 0.5 * g.dx / (p.wave_speed() + d0.max_speed);
        StepConfig cfg{dt, 1000, std::nullopt};
        State s1 = step(s0, g, p, cfg);
        Diagnostics d1 = compute_diagnostics(s1, g, p);
        CHECK(std::abs(d1.mass - d0.mass) / mass_scale(s0, g) < 1e-12);
        CHECK(std::abs(d1.energy - d0.energy) / d0.energy < 1e-6);
        if (b == Boundary::PeriodicXY)
            CHECK(std::abs(d1.circulation - d0.circulation) / circulation_scale(s0, g, p) < 1e-12);
    }
}

TEST_CASE("step: nonlinear flux-form continuity conserves mass") {
    Grid g = make_grid(32, 32, 1e4, 1e4, Boundary::PeriodicXY);
    PhysParams p;
    p.g = 10.0;
    p.H = 1000.0;
    p.f0 = 1e-4;
    p.nonlinear = true;
    State s0 = gaussian_vortex_state(g, p, 2.0, 4 * g.dx);
    Diagnostics d0 = compute_diagnostics(s0, g, p);
    const double dt = 0.4 * g.dx / (p.wave_speed() + d0.max_speed);
    StepConfig cfg{dt, 500, std::nullopt};
    State s1 = step(s0, g, p, cfg);
    Diagnostics d1 = compute_diagnostics(s1, g, p);
    CHECK(std::abs(d1.mass - d0.mass) / mass_scale(s0, g) < 1e-12);
}

TEST_CASE("step: broken flux form (mutation) loses nonlinear mass") {
    Grid g = make_grid(32, 32, 1e4, 1e4, Boundary::PeriodicXY);
    PhysParams p;
    p.g = 10.0;
    p.H = 1000.0;
    p.f0 = 1e-4;
    p.nonlinear = true;
    State s0 = gaussian_vortex_state(g, p, 2.0, 4 * g.dx);
    Diagnostics d0 = compute_diagnostics(s0, g, p);
    const double dt = 0.4 * g.dx / (p.wave_speed() + d0.max_speed);
    StepConfig cfg{dt, 500, std::nullopt, Mutation::BreakFluxForm};
    State s1 = step(s0, g, p, cfg);
    Diagnostics d1 = compute_diagnostics(s1, g, p);
    CHECK(std::abs(d1.mass - d0.mass) / mass_scale(s0, g) > 1e-9);
}

// ============================================================================
// Wave frequency against the dense oracle
// ============================================================================

TEST_CASE("step: small plane gravity wave holds the oracle eigenfrequency") {
    Grid g = make_grid(32, 32, 1e4, 1e4, Boundary::PeriodicXY);
    PhysParams p;
    p.g = 10.0;
    p.H = 1000.0;
    p.f0 = 0.0;
    WaveSpec spec = make_wave_spec(1, 0, 0.01, g, p);
    State s0 = init_poincare_wave(spec, g, p);

    const double omega_ref = discrete_dispersion(g, p, spec);
    const long steps_per_period = 700;  // omega*dt ~ 0.009: phase error < 1e-10
    const double period = 2.0 * std::numbers::pi / omega_ref;
    const double dt = period / steps_per_period;
    REQUIRE(check_cfl(g, p, dt, s0.max_speed()));

    const double k = spec.k;
    auto project = [&](const State& s) {
        double re = 0.0, im = 0.0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                re += s.eta(i, j) * std::cos(k * g.xc(i));
                im += s.eta(i, j) * std::sin(k * g.xc(i));
            }
        return std::complex<double>(re, im);
    };

    State s = s0;
    double phase_prev = std::arg(project(s));
    double total = 0.0;
    StepConfig one{dt, 1, std::nullopt};
    const long n = 3 * steps_per_period;
    for (long step_i = 0; step_i < n; ++step_i) {
        s = step(s, g, p, one);
        const double ph = std::arg(project(s));
        double d = ph - phase_prev;
        while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
        while (d < -std::numbers::pi) d += 2.0 * std::numbers::pi;
        total += d;
        phase_prev = ph;
    }
    const double omega_measured = std::abs(total) / (n * dt);
    CHECK(std::abs(omega_measured - omega_ref) / omega_ref < 1e-10);
}

// ============================================================================
// Tracer kinematics
// ============================================================================

TEST_CASE("advect_tracer_only: zero velocity leaves the tracer bitwise") {
    Grid g = make_grid(16, 16, 1e3, 1e3, Boundary::PeriodicXY);
    State s = make_state(g);
    add_tracer(s, g);
    CounterRng rng(7);
    for (double& c : s.tracer->raw()) c = rng.uniform(0.0, 1.0);
    Field2D before = *s.tracer;
    StepConfig cfg{10.0, 40, std::nullopt};
    State out = advect_tracer_only(s, g, cfg);
    CHECK(*out.tracer == before);
}

TEST_CASE("advect_tracer_only: uniform flow full circuit returns the blob") {
    Grid g = make_grid(64, 64, 1.0, 1.0, Boundary::PeriodicXY);
    State s = make_state(g);
    add_tracer(s, g);
    const double sigma = 8.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double ddx = g.xc(i) - 32.0, ddy = g.yc(j) - 32.0;
            (*s.tracer)(i, j) = std::exp(-(ddx * ddx + ddy * ddy) / (2 * sigma * sigma));
        }
    for (double& u : s.u.raw()) u = 1.0;
    StepConfig cfg{1.0, 64, std::nullopt};  // Courant 1, one circuit
    Field2D before = *s.tracer;
    State out = advect_tracer_only(s, g, cfg);
    CHECK(max_abs_diff(*out.tracer, before) < 0.05);  // dispersion over one circuit

    CHECK(std::abs(out.tracer->sum() - before.sum()) / before.sum() < 1e-12);
}

TEST_CASE("advect_tracer_only: requires a tracer field") {
    Grid g = make_grid(16, 16, 1e3, 1e3, Boundary::PeriodicXY);
    State s = make_state(g);
    StepConfig cfg{1.0, 1, std::nullopt};
    CHECK_THROWS_AS(advect_tracer_only(s, g, cfg), Error);
}

// ============================================================================
// Checkpoints and perfect restart
// ============================================================================

TEST_CASE("checkpoint: roundtrip is bitwise identical") {
    Grid g = make_grid(16, 24, 1e4, 2e4, Boundary::ChannelPeriodicX);
    PhysParams p;
    p.beta = 1.7e-11;
    p.nonlinear = true;
    State s = make_state(g);
    add_tracer(s, g);
    CounterRng rng(5150);
    for (double& v : s.u.raw()) v = rng.uniform(-1, 1);
    for (double& v : s.v.raw()) v = rng.uniform(-1, 1);
    for (double& v : s.eta.raw()) v = rng.uniform(-1, 1);
    for (double& v : s.tracer->raw()) v = rng.uniform(0, 1);
    enforce_walls(s, g);
    s.time = 12345.678;

    auto bytes = serialize(s, g, p);
    auto [s2, g2, p2] = restore(bytes);
    CHECK(g2 == g);
    CHECK(p2 == p);
    CHECK(s2 == s);
}

TEST_CASE("checkpoint: corrupted magic, version, truncation") {
    Grid g = make_grid(8, 8, 1e3, 1e3, Boundary::PeriodicXY);
    PhysParams p;
    State s = make_state(g);
    auto bytes = serialize(s, g, p);

    auto bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_MATCHES(restore(bad), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == Errc::BadMagic; }));

    auto wrongver = bytes;
    wrongver[4] = 9;
    CHECK_THROWS_MATCHES(restore(wrongver), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == Errc::VersionMismatch; }));

    auto cut = bytes;
    cut.resize(bytes.size() - 17);
    CHECK_THROWS_MATCHES(restore(cut), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == Errc::TruncatedPayload; }));
}

TEST_CASE("checkpoint: 2N-step run equals restart at N, bitwise") {
    Grid g = make_grid(24, 24, 1e4, 1e4, Boundary::ClosedBasin);
    PhysParams p;
    p.f0 = 1e-4;
    p.r = 1e-6;
    State s0 = gaussian_vortex_state(g, p, 0.3, 3 * g.dx);
    add_tracer(s0, g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) (*s0.tracer)(i, j) = s0.eta(i, j);

    Forcing f;
    f.pattern = SpatialPattern::GaussianBlob;
    f.x0 = 0.3 * g.lx();
    f.y0 = 0.6 * g.ly();
    f.width = 2 * g.dx;
    f.amplitude_x = 1e-6;
    f.frequency = 3e-5;

    const long N = 40;
    StepConfig half{25.0, N, f};
    StepConfig full{25.0, 2 * N, f};

    State direct = step(s0, g, p, full);

    State mid = step(s0, g, p, half);
    auto bytes = serialize(mid, g, p);
    auto [restored, g2, p2] = restore(bytes);
    State resumed = step(restored, g2, p2, half);

    CHECK(resumed.u == direct.u);
    CHECK(resumed.v == direct.v);
    CHECK(resumed.eta == direct.eta);
    CHECK(*resumed.tracer == *direct.tracer);
    CHECK(resumed.time == direct.time);
}
