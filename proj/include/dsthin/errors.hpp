#pragma once

#include <stdexcept>
#include <string>

namespace dsthin {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateLattice : Error {
    explicit DegenerateLattice(double nu)
        : Error("degenerate lattice: |nu| = " + std::to_string(nu) + " <= 1e-9") {}
};

struct NotADifferenceSet : Error {
    int s, t;
    NotADifferenceSet(int s_, int t_, const std::string& detail)
        : Error("not a difference set at lag (" + std::to_string(s_) + ", " + std::to_string(t_) +
                "): " + detail),
          s(s_), t(t_) {}
};

struct NotTwinPrimes : Error {
    using Error::Error;
};

struct NonPrimitivePolynomial : Error {
    using Error::Error;
};

struct NotCoprime : Error {
    using Error::Error;
};

struct SizeMismatch : Error {
    using Error::Error;
};

struct SearchSpaceTooLarge : Error {
    using Error::Error;
};

struct InvalidDescriptors : Error {
    using Error::Error;
};

struct TabulatedOutOfRange : Error {
    using Error::Error;
};

struct EmptySidelobeRegion : Error {
    using Error::Error;
};

struct BeamNotResolved : Error {
    using Error::Error;
};

struct InvisibleDirection : Error {
    using Error::Error;
};

struct NoVisibleSamples : Error {
    using Error::Error;
};

struct ApertureTooSmall : Error {
    using Error::Error;
};

struct ElementInadmissible : Error {
    using Error::Error;
};

struct NoFeasibleLattice : Error {
    using Error::Error;
};

struct Infeasible : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace dsthin
