#pragma once

#include <cmath>

#include "gfdprop/error.hpp"
#include "gfdprop/params.hpp"

namespace gfdprop {

/// Internal-wave frequency for a rotating stratified fluid with constant N:
/// omega^2 = (f^2 m^2 + N^2 (k^2 + l^2)) / (k^2 + l^2 + m^2), nonnegative root.
inline double dispersion_internal_wave(double k, double l, double m, double f, double N) {
    if (k == 0.0 && l == 0.0 && m == 0.0)
        throw Error(Errc::ZeroWavevector, "internal-wave dispersion needs a nonzero wavevector");
    if (N < 0.0) throw Error(Errc::UnsatisfiableConstraints, "N must be nonnegative");
    const double kh2 = k * k + l * l;
    const double m2 = m * m;
    return std::sqrt((f * f * m2 + N * N * kh2) / (kh2 + m2));
}

/// Shallow-water Poincare (rotating gravity wave) branch:
/// omega = sqrt(f0^2 + g H (k^2 + l^2)).
inline double dispersion_poincare(double k, double l, const PhysParams& p) {
    if (k == 0.0 && l == 0.0)
        throw Error(Errc::ZeroWavevector, "Poincare dispersion needs a nonzero wavevector");
    return std::sqrt(p.f0 * p.f0 + p.g * p.H * (k * k + l * l));
}

/// Quasi-geostrophic shallow-water Rossby branch:
/// omega = -beta k / (k^2 + l^2 + 1/L_D^2), L_D = sqrt(gH)/|f0|.
inline double dispersion_rossby(double k, double l, const PhysParams& p) {
    if (p.f0 == 0.0) throw Error(Errc::ZeroCoriolis, "Rossby dispersion requires f0 != 0");
    if (!(p.beta > 0.0)) throw Error(Errc::ZeroBeta, "Rossby dispersion requires beta > 0");
    if (k == 0.0 && l == 0.0)
        throw Error(Errc::ZeroWavevector, "Rossby dispersion needs a nonzero wavevector");
    const double ld = p.deformation_radius();
    return -p.beta * k / (k * k + l * l + 1.0 / (ld * ld));
}

}  // namespace gfdprop
