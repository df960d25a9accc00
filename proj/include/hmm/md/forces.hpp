#pragma once

#include "hmm/md/system.hpp"

namespace hmm::md {

/// Recomputes all accelerations with a linked-cell sweep (minimum-image on
/// periodic axes) and returns the total potential energy [K]. Falls back to
/// an all-pairs sweep when the box is too small for a 3-cell-wide grid.
/// Throws BlowUpError when any pair distance falls below 0.3 sigma_min.
double compute_accelerations(ParticleSystem& sys, const LjTable& table);

}  // namespace hmm::md
