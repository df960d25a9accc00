#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hmm/md/lj.hpp"

namespace hmm::md {

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

enum class BoundaryKind { Periodic, Reflective };

/// Axis-aligned simulation box in reduced length units. The interface
/// normal is axis 2 (z); transverse axes default to periodic.
struct Box {
    Vec3 lo{0.0, 0.0, 0.0};
    Vec3 hi{1.0, 1.0, 1.0};
    std::array<BoundaryKind, 3> boundary{BoundaryKind::Periodic, BoundaryKind::Periodic,
                                         BoundaryKind::Reflective};

    double length(int axis) const { return hi[axis] - lo[axis]; }
    double volume() const { return length(0) * length(1) * length(2); }
};

constexpr int kNormalAxis = 2;

/// Binary-mixture particle ensemble in reduced units.
struct ParticleSystem {
    std::vector<Vec3> pos;   // [A]
    std::vector<Vec3> vel;   // [K^0.5 u^-0.5]
    std::vector<Vec3> acc;
    std::vector<std::uint8_t> species;
    std::array<double, 2> species_mass{1.0, 1.0};  // [u]
    Box box;

    std::size_t size() const { return pos.size(); }
    double mass_of(std::size_t i) const { return species_mass[species[i]]; }

    /// Total mass per species [u].
    std::array<double, 2> species_total_mass() const;

    /// Total momentum [u * reduced velocity].
    Vec3 total_momentum() const;

    double kinetic_energy() const;
};

/// Columnar snapshot (id, species, x, y, z, vx, vy, vz), reduced units.
void dump_snapshot(const ParticleSystem& sys, const std::string& path);

}  // namespace hmm::md
