#pragma once

#include <cstdint>
#include <cstring>
#include <tuple>
#include <type_traits>
#include <vector>

#include "gfdprop/error.hpp"
#include "gfdprop/grid.hpp"
#include "gfdprop/params.hpp"
#include "gfdprop/state.hpp"

namespace gfdprop {

// Checkpoint binary layout (little-endian):
//   bytes 0-3   magic "GFDC"
//   u32         version = 1
//   u32 u32     nx, ny
//   u8          boundary code (0 PeriodicXY, 1 ClosedBasin, 2 ChannelPeriodicX)
//   f64 x 9     dx, dy, g, H, f0, beta, r, rho0, time
//   u8          flags: bit0 nonlinear, bit1 tracer present
//   f64 ...     u, v, eta, [tracer] payloads, row-major in staggered shapes
inline constexpr std::uint32_t kCheckpointVersion = 1;

namespace detail {

inline void put_bytes(std::vector<std::uint8_t>& out, const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out.insert(out.end(), b, b + n);
}

template <typename T>
inline void put_le(std::vector<std::uint8_t>& out, T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    // host is little-endian; serialize by memcpy
    put_bytes(out, &v, sizeof(T));
}

class ByteReader {
public:
    ByteReader(const std::uint8_t* p, std::size_t n) : p_(p), n_(n) {}

    template <typename T>
    T get() {
        if (pos_ + sizeof(T) > n_)
            throw Error(Errc::TruncatedPayload, "checkpoint ends mid-field");
        T v;
        std::memcpy(&v, p_ + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }

    void get_doubles(double* dst, std::size_t count) {
        const std::size_t bytes = count * sizeof(double);
        if (pos_ + bytes > n_) throw Error(Errc::TruncatedPayload, "checkpoint payload truncated");
        std::memcpy(dst, p_ + pos_, bytes);
        pos_ += bytes;
    }

    std::size_t remaining() const { return n_ - pos_; }

private:
    const std::uint8_t* p_;
    std::size_t n_;
    std::size_t pos_ = 0;
};

inline std::uint8_t boundary_code(Boundary b) {
    switch (b) {
        case Boundary::PeriodicXY: return 0;
        case Boundary::ClosedBasin: return 1;
        case Boundary::ChannelPeriodicX: return 2;
    }
    return 0xFF;
}

inline Boundary boundary_from_code(std::uint8_t c) {
    switch (c) {
        case 0: return Boundary::PeriodicXY;
        case 1: return Boundary::ClosedBasin;
        case 2: return Boundary::ChannelPeriodicX;
    }
    throw Error(Errc::MalformedFile, "unknown boundary code");
}

}  // namespace detail

inline std::vector<std::uint8_t> serialize(const State& s, const Grid& g, const PhysParams& p) {
    require_shapes(s, g);
    std::vector<std::uint8_t> out;
    out.reserve(64 + sizeof(double) * (s.u.size() + s.v.size() + s.eta.size() +
                                       (s.tracer ? s.tracer->size() : 0)));
    detail::put_bytes(out, "GFDC", 4);
    detail::put_le<std::uint32_t>(out, kCheckpointVersion);
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.nx));
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.ny));
    detail::put_le<std::uint8_t>(out, detail::boundary_code(g.boundary));
    for (double v : {g.dx, g.dy, p.g, p.H, p.f0, p.beta, p.r, p.rho0, s.time})
        detail::put_le<double>(out, v);
    std::uint8_t flags = 0;
    if (p.nonlinear) flags |= 1;
    if (s.tracer) flags |= 2;
    detail::put_le<std::uint8_t>(out, flags);
    for (const Field2D* f : {&s.u, &s.v, &s.eta})
        detail::put_bytes(out, f->data(), f->size() * sizeof(double));
    if (s.tracer) detail::put_bytes(out, s.tracer->data(), s.tracer->size() * sizeof(double));
    return out;
}

inline std::tuple<State, Grid, PhysParams> restore(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), "GFDC", 4) != 0)
        throw Error(Errc::BadMagic, "missing GFDC magic");
    detail::ByteReader r(bytes.data() + 4, bytes.size() - 4);
    const auto version = r.get<std::uint32_t>();
    if (version != kCheckpointVersion)
        throw Error(Errc::VersionMismatch, "checkpoint version " + std::to_string(version));
    const auto nx = static_cast<int>(r.get<std::uint32_t>());
    const auto ny = static_cast<int>(r.get<std::uint32_t>());
    const Boundary boundary = detail::boundary_from_code(r.get<std::uint8_t>());

    double vals[9];
    for (double& v : vals) v = r.get<double>();
    PhysParams p;
    p.g = vals[2];
    p.H = vals[3];
    p.f0 = vals[4];
    p.beta = vals[5];
    p.r = vals[6];
    p.rho0 = vals[7];
    const std::uint8_t flags = r.get<std::uint8_t>();
    p.nonlinear = (flags & 1) != 0;

    Grid g = make_grid(nx, ny, vals[0], vals[1], boundary);
    State s = make_state(g);
    s.time = vals[8];
    r.get_doubles(s.u.data(), s.u.size());
    r.get_doubles(s.v.data(), s.v.size());
    r.get_doubles(s.eta.data(), s.eta.size());
    if (flags & 2) {
        add_tracer(s, g);
        r.get_doubles(s.tracer->data(), s.tracer->size());
    }
    return {std::move(s), g, p};
}

}  // namespace gfdprop
