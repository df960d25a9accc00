#pragma once

namespace hmm::units {

/// The eight quantity kinds of the reduced-unit system (A for length,
/// u for mass, K for energy).
enum class QuantityKind {
    Mass,
    Length,
    Energy,
    Velocity,
    Time,
    Pressure,
    Temperature,
    Density,
};

enum class Direction { ReducedToSi, SiToReduced };

/// Multiplicative factor taking one reduced unit to SI.
double factor(QuantityKind kind);

double convert(double value, QuantityKind kind, Direction dir);

inline double to_si(double value, QuantityKind kind) {
    return convert(value, kind, Direction::ReducedToSi);
}

inline double to_reduced(double value, QuantityKind kind) {
    return convert(value, kind, Direction::SiToReduced);
}

}  // namespace hmm::units
