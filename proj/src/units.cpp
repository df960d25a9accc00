#include "hmm/units.hpp"

#include <cassert>

namespace hmm::units {

namespace {

// Conversion factors reduced -> SI at full printed precision.
// density = mass / length^3 holds to ~3e-16; velocity = sqrt(energy/mass)
// to ~5e-13; time = length*sqrt(mass/energy) to ~2e-8 (rounded upstream).
constexpr double kMass = 1.660539040e-27;      // kg
constexpr double kLength = 1.0e-10;            // m
constexpr double kEnergy = 1.380e-23;          // J
constexpr double kVelocity = 91.1622421005;    // m/s
constexpr double kTime = 1.0969454e-12;        // s
constexpr double kPressure = 1.380e+7;         // Pa
constexpr double kTemperature = 1.0;           // K
constexpr double kDensity = 1.66053904e+3;     // kg/m^3

}  // namespace

double factor(QuantityKind kind) {
    switch (kind) {
        case QuantityKind::Mass: return kMass;
        case QuantityKind::Length: return kLength;
        case QuantityKind::Energy: return kEnergy;
        case QuantityKind::Velocity: return kVelocity;
        case QuantityKind::Time: return kTime;
        case QuantityKind::Pressure: return kPressure;
        case QuantityKind::Temperature: return kTemperature;
        case QuantityKind::Density: return kDensity;
    }
    assert(false);
    return 0.0;
}

double convert(double value, QuantityKind kind, Direction dir) {
    const double f = factor(kind);
    return dir == Direction::ReducedToSi ? value * f : value / f;
}

}  // namespace hmm::units
