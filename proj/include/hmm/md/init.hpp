#pragma once

#include <cstdint>

#include "hmm/frame.hpp"
#include "hmm/md/system.hpp"

namespace hmm::md {

/// Two-cuboid box layout in reduced length units. The liquid cuboid spans
/// [0, interface_z) along the normal axis, the vapor one the remainder.
struct TwoPhaseGeometry {
    double l_perp = 0.0;      // transverse edge [A]
    double l_liquid = 0.0;    // liquid extent along the normal [A]
    double l_vapor = 0.0;
    BoundaryKind normal_boundary = BoundaryKind::Reflective;

    double interface_z() const { return l_liquid; }
    double l_total() const { return l_liquid + l_vapor; }
};

/// Sizes the box for a target particle budget. liquid_fraction is the
/// volume share of the liquid cuboid, aspect the normal-to-transverse
/// edge ratio. States are SI; conversion happens internally.
TwoPhaseGeometry make_two_phase_geometry(const frame::RotatedState& u_liq,
                                         const frame::RotatedState& u_vap,
                                         const std::array<double, 2>& species_mass_u,
                                         std::size_t n_target, double aspect = 3.0,
                                         double liquid_fraction = 0.35);

/// Populates the two cuboids on per-species jittered lattices at the
/// requested partial densities and draws Maxwell-Boltzmann velocities at
/// temperature T plus the per-species drifts implied by the states.
/// Group mean velocities are shifted to the exact drift afterwards.
/// States are in SI units (Table 1 conversion applied internally).
ParticleSystem initialize_two_phase_box(const frame::RotatedState& u_liq,
                                        const frame::RotatedState& u_vap,
                                        const TwoPhaseGeometry& geometry,
                                        const std::array<double, 2>& species_mass_u, double T,
                                        std::uint64_t seed, double sigma_min = 3.3967);

}  // namespace hmm::md
