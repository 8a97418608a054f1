#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gfdprop {

enum class Errc {
    DimensionTooSmall,
    NonpositiveSpacing,
    ShapeMismatch,
    CflViolation,
    Blowup,
    ZeroCoriolis,
    ZeroBeta,
    ZeroWavevector,
    OffLatticeWavenumber,
    DivergentInput,
    NoConvergence,
    TooLargeGrid,
    BadMagic,
    VersionMismatch,
    TruncatedPayload,
    MalformedFile,
    UnsatisfiableConstraints,
    IoError,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::DimensionTooSmall: return "dimension-too-small";
        case Errc::NonpositiveSpacing: return "nonpositive-spacing";
        case Errc::ShapeMismatch: return "shape-mismatch";
        case Errc::CflViolation: return "cfl-violation";
        case Errc::Blowup: return "blowup";
        case Errc::ZeroCoriolis: return "zero-coriolis";
        case Errc::ZeroBeta: return "zero-beta";
        case Errc::ZeroWavevector: return "zero-wavevector";
        case Errc::OffLatticeWavenumber: return "off-lattice-wavenumber";
        case Errc::DivergentInput: return "divergent-input";
        case Errc::NoConvergence: return "no-convergence";
        case Errc::TooLargeGrid: return "too-large-grid";
        case Errc::BadMagic: return "bad-magic";
        case Errc::VersionMismatch: return "version-mismatch";
        case Errc::TruncatedPayload: return "truncated-payload";
        case Errc::MalformedFile: return "malformed-file";
        case Errc::UnsatisfiableConstraints: return "unsatisfiable-constraints";
        case Errc::IoError: return "io-error";
    }
    return "unknown";
}

/// Exception carrying a machine-checkable error code. `index` holds the step
/// count at which a blowup was detected, when applicable.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what, std::size_t index = 0)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what),
          code_(code),
          index_(index) {}

    Errc code() const { return code_; }
    std::size_t index() const { return index_; }

private:
    Errc code_;
    std::size_t index_;
};

}  // namespace gfdprop
