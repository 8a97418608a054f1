#pragma once

#include <cmath>

#include "gfdprop/error.hpp"
#include "gfdprop/grid.hpp"

namespace gfdprop {

/// Physical constants of one shallow-water configuration.
/// f(y) = f0 + beta*(y - y_mid) with y_mid the domain mid-latitude.
struct PhysParams {
    double g = 9.81;      // gravitational acceleration [m s^-2]
    double H = 1000.0;    // resting depth [m]
    double f0 = 1e-4;     // Coriolis parameter at mid-latitude [s^-1]
    double beta = 0.0;    // meridional gradient of f [m^-1 s^-1]
    double r = 0.0;       // Rayleigh friction coefficient [s^-1]
    double rho0 = 1025.0; // reference density [kg m^-3]
    bool nonlinear = false;

    double coriolis(double y, double ly) const { return f0 + beta * (y - 0.5 * ly); }

    double wave_speed() const { return std::sqrt(g * H); }

    double deformation_radius() const {
        if (f0 == 0.0) throw Error(Errc::ZeroCoriolis, "deformation radius undefined for f0 = 0");
        return std::sqrt(g * H) / std::abs(f0);
    }

    void validate() const {
        if (!(g > 0.0) || !(H > 0.0) || !(rho0 > 0.0) || r < 0.0)
            throw Error(Errc::UnsatisfiableConstraints, "require g>0, H>0, rho0>0, r>=0");
    }

    bool operator==(const PhysParams& o) const {
        return g == o.g && H == o.H && f0 == o.f0 && beta == o.beta && r == o.r &&
               rho0 == o.rho0 && nonlinear == o.nonlinear;
    }
};

}  // namespace gfdprop
