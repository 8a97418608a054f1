#pragma once

#include <string>

#include "gfdprop/error.hpp"

namespace gfdprop {

enum class Boundary { PeriodicXY, ClosedBasin, ChannelPeriodicX };

inline const char* boundary_name(Boundary b) {
    switch (b) {
        case Boundary::PeriodicXY: return "PeriodicXY";
        case Boundary::ClosedBasin: return "ClosedBasin";
        case Boundary::ChannelPeriodicX: return "ChannelPeriodicX";
    }
    return "?";
}

/// Rectangular Arakawa C-grid: eta at cell centers, u at x-faces, v at
/// y-faces, vorticity at cell corners. Periodic directions drop the
/// duplicated boundary face; closed directions carry both wall faces.
struct Grid {
    int nx = 0;
    int ny = 0;
    double dx = 0.0;
    double dy = 0.0;
    Boundary boundary = Boundary::PeriodicXY;

    bool periodic_x() const { return boundary != Boundary::ClosedBasin; }
    bool periodic_y() const { return boundary == Boundary::PeriodicXY; }

    double lx() const { return nx * dx; }
    double ly() const { return ny * dy; }
    double cell_area() const { return dx * dy; }

    // staggered shapes
    int unx() const { return periodic_x() ? nx : nx + 1; }
    int uny() const { return ny; }
    int vnx() const { return nx; }
    int vny() const { return periodic_y() ? ny : ny + 1; }
    int znx() const { return periodic_x() ? nx : nx + 1; }  // vorticity points
    int zny() const { return periodic_y() ? ny : ny + 1; }

    // coordinates of each point family
    double xc(int i) const { return (i + 0.5) * dx; }
    double yc(int j) const { return (j + 0.5) * dy; }
    double xu(int i) const { return i * dx; }
    double yu(int j) const { return (j + 0.5) * dy; }
    double xv(int i) const { return (i + 0.5) * dx; }
    double yv(int j) const { return j * dy; }
    double xz(int i) const { return i * dx; }
    double yz(int j) const { return j * dy; }

    // periodic wrap helpers (valid for cell-count-sized index spaces)
    int wx(int i) const { return (i % nx + nx) % nx; }
    int wy(int j) const { return (j % ny + ny) % ny; }

    bool operator==(const Grid& o) const {
        return nx == o.nx && ny == o.ny && dx == o.dx && dy == o.dy && boundary == o.boundary;
    }
};

inline Grid make_grid(int nx, int ny, double dx, double dy, Boundary boundary) {
    if (nx < 8 || ny < 8)
        throw Error(Errc::DimensionTooSmall,
                    "grid must be at least 8x8, got " + std::to_string(nx) + "x" + std::to_string(ny));
    if (!(dx > 0.0) || !(dy > 0.0))
        throw Error(Errc::NonpositiveSpacing, "grid spacing must be positive");
    return Grid{nx, ny, dx, dy, boundary};
}

}  // namespace gfdprop
