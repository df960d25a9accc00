#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "hmm/eos.hpp"
#include "hmm/frame.hpp"

namespace hmm::fv {

/// One-dimensional moving mesh with a single tracked interface node.
struct Mesh1D {
    std::vector<double> nodes;            // strictly increasing, size = cells + 1
    std::vector<eos::Phase> phase;        // per cell, Liquid or Vapor
    std::size_t interface_node = 0;       // node index on the phase boundary
    double dx_min = 0.0;
    double dx_max = 0.0;

    std::size_t cells() const { return phase.size(); }
    double width(std::size_t i) const { return nodes[i + 1] - nodes[i]; }
    double center(std::size_t i) const { return 0.5 * (nodes[i] + nodes[i + 1]); }
    void check_invariants() const;
};

using States = std::vector<frame::RotatedState>;

/// Uniform mesh with the interface at x_interface, which must coincide
/// with a node (x_interface - xmin has to be an integer multiple of dx).
Mesh1D make_interface_mesh(double xmin, double xmax, double dx, double x_interface);

/// Exact cell averages of piecewise-constant initial data with phase tags
/// assigned by side of the interface. Cells sampling different values at
/// their two ends (straddling a discontinuity) raise ParameterError.
States project_initial_data(const std::function<frame::RotatedState(double)>& u0,
                            const Mesh1D& mesh, const eos::EosModel& eos);

/// Physical flux of the rotated system: (m0, m1, m0 v0, m1 v1).
std::array<double, 4> physical_flux(const frame::RotatedState& u);

/// Rusanov flux on the conservative part with dissipation speed lambda.
std::array<double, 4> bulk_flux(const frame::RotatedState& ul, const frame::RotatedState& ur,
                                double lambda);

/// Godunov flux in the frame moving with the interface: f(U*) - s U*.
std::array<double, 4> interface_flux(const frame::RotatedState& star, double s);

/// Maxwell-Stefan friction factor f01 = R / (M0 M1 c) / D01.
double friction_factor(double rho0, double rho1, double M0, double M1, double D01);

/// Momentum source pair (component 0, component 1) from inter-species
/// friction; the two entries sum to zero exactly.
std::array<double, 2> friction_source(const frame::RotatedState& u, double T, double M0,
                                      double M1, double D01);

enum class BoundaryCondition { Outflow, Reflective };

struct SimConfig {
    double t_end = 0.003;
    double dt = 1e-7;
    double xmin = -5.0;
    double xmax = 5.0;
    double dx = 2e-3;
    double x_interface = 0.0;
    double D01 = 1.0;  // Maxwell-Stefan diffusion coefficient
    BoundaryCondition boundary = BoundaryCondition::Outflow;
    bool friction_on = true;
    bool gradmu_on = true;
    int snapshot_every = 0;        // steps between snapshot files; 0 = end only
    std::string out_dir;           // empty: no files
};

struct StepInfo {
    double interface_speed = 0.0;   // m/s
    double interface_position = 0.0;
    double max_lambda = 0.0;
    std::array<double, 2> injected_momentum{0.0, 0.0};  // grad-mu source integral
};

/// One HMM step: interface solve at the tracked node, explicit Euler
/// finite-volume update with bulk/interface fluxes and sources, node
/// displacement and remeshing. Throws PhaseEscapeError when a cell leaves
/// its phase region and SimulationEnd when the interface reaches the
/// domain boundary.
StepInfo hmm_step(Mesh1D& mesh, States& states, const frame::MicroSolver& micro,
                  const eos::EosModel& eos, const SimConfig& config);

/// Displaces the interface node by s dt, then merges cells below dx_min
/// into their same-phase neighbor (mass-weighted average) and splits
/// cells above dx_max. Merge and split preserve the discrete mass of
/// every component exactly.
void move_and_remesh(Mesh1D& mesh, double s, double dt, States& states);

struct SimResult {
    Mesh1D mesh;
    States states;
    std::size_t steps_taken = 0;
    std::vector<double> interface_positions;  // one per step
    std::vector<double> interface_speeds;
    bool ended_at_boundary = false;
};

/// Time loop to t_end with snapshot output; aborts re-throw after writing
/// the last-good snapshot when out_dir is set.
SimResult run_simulation(const frame::RotatedState& u_liq, const frame::RotatedState& u_vap,
                         const frame::MicroSolver& micro, const eos::EosModel& eos,
                         const SimConfig& config);

void write_snapshot(const Mesh1D& mesh, const States& states, double time,
                    const std::string& path);

}  // namespace hmm::fv
