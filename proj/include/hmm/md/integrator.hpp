#pragma once

#include <optional>

#include "hmm/md/system.hpp"

namespace hmm::md {

/// One Velocity-Verlet step: position update (with boundary handling),
/// half kick, force recomputation, half kick. Accelerations must be
/// current on entry; returns the new potential energy [K].
double velocity_verlet_step(ParticleSystem& sys, double dtau, const LjTable& table);

/// Kinetic temperature [K] from peculiar velocities. Drifts are removed
/// per species, and per side of the split plane when one is given.
double kinetic_temperature(const ParticleSystem& sys, std::optional<double> split_z = {});

/// Isokinetic rescaling of the peculiar velocities toward temperature T;
/// the mean drift of each (species, side) group is preserved exactly.
void rescale_velocities(ParticleSystem& sys, double T, std::optional<double> split_z = {});

/// Runs n_steps Verlet steps with isokinetic velocity rescaling toward T
/// after each step.
void thermalize(ParticleSystem& sys, double T, int n_steps, double dtau, const LjTable& table,
                std::optional<double> split_z = {});

}  // namespace hmm::md
