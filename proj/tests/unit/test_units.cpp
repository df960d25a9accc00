#include <doctest.h>

#include <cmath>

#include "hmm/units.hpp"

using hmm::units::convert;
using hmm::units::Direction;
using hmm::units::factor;
using hmm::units::QuantityKind;

namespace {

constexpr QuantityKind kAllKinds[] = {
    QuantityKind::Mass,     QuantityKind::Length,      QuantityKind::Energy,
    QuantityKind::Velocity, QuantityKind::Time,        QuantityKind::Pressure,
    QuantityKind::Temperature, QuantityKind::Density,
};

}  // namespace

TEST_CASE("unit table rows at printed precision") {
    CHECK(factor(QuantityKind::Mass) == doctest::Approx(1.660539040e-27).epsilon(1e-12));
    CHECK(factor(QuantityKind::Length) == 1e-10);
    CHECK(factor(QuantityKind::Energy) == doctest::Approx(1.380e-23).epsilon(1e-12));
    CHECK(factor(QuantityKind::Velocity) == doctest::Approx(91.1622421005).epsilon(1e-12));
    CHECK(factor(QuantityKind::Time) == doctest::Approx(1.0969454e-12).epsilon(1e-12));
    CHECK(factor(QuantityKind::Pressure) == doctest::Approx(1.380e+7).epsilon(1e-12));
    CHECK(factor(QuantityKind::Temperature) == 1.0);
    CHECK(factor(QuantityKind::Density) == doctest::Approx(1.66053904e+3).epsilon(1e-12));
}

TEST_CASE("one reduced velocity and time unit in SI") {
    CHECK(convert(1.0, QuantityKind::Velocity, Direction::ReducedToSi) == 91.1622421005);
    CHECK(convert(1.0, QuantityKind::Time, Direction::ReducedToSi) == 1.0969454e-12);
}

TEST_CASE("zero maps to zero for every kind and direction") {
    for (QuantityKind k : kAllKinds) {
        CHECK(convert(0.0, k, Direction::ReducedToSi) == 0.0);
        CHECK(convert(0.0, k, Direction::SiToReduced) == 0.0);
    }
}

TEST_CASE("round-trip identity to relative 1e-15") {
    const double values[] = {1.0, -3.5, 1e-9, 7.25e11, 0.3333333333333333};
    for (QuantityKind k : kAllKinds) {
        for (double v : values) {
            const double forth = convert(v, k, Direction::ReducedToSi);
            const double back = convert(forth, k, Direction::SiToReduced);
            CHECK(std::abs(back - v) <= 1e-15 * std::abs(v));
        }
    }
}

TEST_CASE("density factor equals mass factor over length cubed") {
    const double derived = factor(QuantityKind::Mass) / std::pow(factor(QuantityKind::Length), 3);
    CHECK(std::abs(derived - 1.66053904e+3) / 1.66053904e+3 <= 1e-9);
    CHECK(std::abs(derived - factor(QuantityKind::Density)) / derived <= 1e-9);
}

TEST_CASE("velocity factor is sqrt(energy/mass)") {
    const double derived =
        std::sqrt(factor(QuantityKind::Energy) / factor(QuantityKind::Mass));
    CHECK(std::abs(derived - factor(QuantityKind::Velocity)) / derived <= 1e-12);
}
