#pragma once

#include <array>
#include <functional>
#include <utility>

namespace hmm::frame {

/// Continuum state with d-dimensional momenta (unused components zero).
struct FullState {
    double rho0 = 0.0;  // [kg/m^3]
    double rho1 = 0.0;
    std::array<double, 3> m0{0.0, 0.0, 0.0};  // [kg/(m^2 s)]
    std::array<double, 3> m1{0.0, 0.0, 0.0};
    int dim = 3;
};

/// Normal-projected 4-state (rho0, rho1, m0, m1) with scalar momenta.
struct RotatedState {
    double rho0 = 0.0;
    double rho1 = 0.0;
    double m0 = 0.0;
    double m1 = 0.0;
};

/// Momentum components orthogonal to the interface normal; carried around
/// the micro-solver untouched and added back verbatim.
struct TangentialRemainder {
    std::array<double, 3> m0{0.0, 0.0, 0.0};
    std::array<double, 3> m1{0.0, 0.0, 0.0};
    int dim = 3;
};

/// Normal projection u = (rho0, rho1, m0.n, m1.n); throws
/// NormalizationError unless |n| = 1 within 1e-12.
std::pair<RotatedState, TangentialRemainder> rotate_to_normal(const FullState& state,
                                                              const std::array<double, 3>& n);

/// Inverse of rotate_to_normal: P_n(u) + perp.
FullState back_project(const RotatedState& u, const std::array<double, 3>& n,
                       const TangentialRemainder& perp);

/// 7-dimensional micro-solver input in the rotated, liquid-comoving frame
/// (the liquid barycentric normal velocity is zero by construction).
struct MicroInput {
    double rho0_liq, rho1_liq, vrel_liq;
    double rho0_vap, rho1_vap, v_vap, vrel_vap;
};

/// 9-dimensional micro-solver output: star states as (rho, momentum) pairs
/// per side plus the interface speed, all in the shifted rotated frame.
struct MicroOutput {
    double rho0_liq, rho1_liq, m0_liq, m1_liq;
    double rho0_vap, rho1_vap, m0_vap, m1_vap;
    double speed;
};

using MicroSolver = std::function<MicroOutput(const MicroInput&)>;

struct InterfaceResult {
    FullState star_minus;
    FullState star_plus;
    double speed = 0.0;  // [m/s]
};

/// Galilean- and rotation-compatible wrapper around a micro-solver:
/// decomposes into barycentric/relative velocities, rotates onto n,
/// subtracts the liquid barycentric reference velocity, runs the micro
/// solver, restores reference velocity and tangential momenta.
InterfaceResult interface_solve(const FullState& u_minus, const FullState& u_plus,
                                const std::array<double, 3>& n, const MicroSolver& micro);

/// Species velocities from barycentric/relative ones at given densities.
std::pair<double, double> species_velocities(double rho0, double rho1, double vbar, double vrel);

/// Micro-solver that reproduces its input states with zero shifted-frame
/// interface speed; interface_solve composed with it is the identity.
MicroOutput identity_micro(const MicroInput& in);

}  // namespace hmm::frame
