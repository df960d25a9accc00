#pragma once

#include <stdexcept>
#include <string>

namespace hmm {

/// Base class for all errors raised by the pipeline.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParameterError : Error {
    using Error::Error;
};

/// Covolume saturation / packing limit reached in the EOS.
struct SingularDensityError : Error {
    using Error::Error;
};

/// State lies in the spinodal region where the bulk model is invalid.
struct PhaseError : Error {
    using Error::Error;
};

struct SingularDistanceError : Error {
    using Error::Error;
};

/// Particles closer than the overlap floor; the MD run is unusable.
struct BlowUpError : Error {
    using Error::Error;
};

struct InfeasibleDensityError : Error {
    using Error::Error;
};

/// Interface tracking lost the density crossing (single-phase box).
struct InterfaceLostError : Error {
    using Error::Error;
};

struct NormalizationError : Error {
    using Error::Error;
};

struct DegenerateStencilError : Error {
    using Error::Error;
};

struct ConstraintSingularityError : Error {
    using Error::Error;
};

struct DivergenceError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct IncompatibleFormatError : Error {
    using Error::Error;
};

/// A finite-volume cell left its phase region during a step.
struct PhaseEscapeError : Error {
    using Error::Error;
};

struct SimulationEnd : Error {
    using Error::Error;
};

}  // namespace hmm
