#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hmm/eos.hpp"
#include "hmm/frame.hpp"
#include "hmm/md/init.hpp"
#include "hmm/md/system.hpp"

namespace hmm::md_riemann {

/// Spatial sampling parameters, lengths in multiples of sigma_max.
struct SamplingConfig {
    int bins = 128;
    double slab_offset_sigma = 3.0;  // gap between interface and slab
    double slab_width_sigma = 6.0;
    double kernel_eps_sigma = 2.0;   // Gaussian kernel width for vbar
    double t_smpl_ratio = 0.2;       // final fraction of steps averaged
};

/// Binned fields along the normal axis, reduced units.
struct BinProfile {
    std::vector<double> rho0, rho1;  // [u/A^3]
    std::vector<double> m0, m1;      // momentum density, normal component
    std::vector<double> temperature; // [K]; NaN where a bin is empty
    double z_lo = 0.0;
    double dz = 0.0;
    double bin_volume = 0.0;

    std::vector<double> rho_total() const;
};

/// Irving-Kirkwood histogram fields; the temperature column uses peculiar
/// velocities relative to the kernel-averaged barycentric velocity and is
/// skipped when with_temperature is false (it is the expensive part).
BinProfile field_profiles(const md::ParticleSystem& sys, int bins, double kernel_eps,
                          bool with_temperature = true);

struct DetectResult {
    std::vector<double> position;  // [A] per profile
    double speed = 0.0;            // [A per reduced time] regression slope
    double speed_stderr = 0.0;
};

/// Midpoint-crossing position of one smoothed total-density profile [A].
double detect_crossing(const std::vector<double>& rho_total, double z_lo, double dz);

/// Positions for a series of profiles plus the least-squares speed over
/// the series. Throws InterfaceLostError when no crossing exists.
DetectResult detect_interface(const std::vector<std::vector<double>>& rho_profiles, double z_lo,
                              double dz, double dtau);

/// Per-species slab states next to the interface, Eq.-(17) style sums.
struct SlabStates {
    std::array<double, 2> rho_liq{0.0, 0.0};  // [u/A^3]
    std::array<double, 2> rho_vap{0.0, 0.0};
    std::array<double, 2> v_liq{0.0, 0.0};    // [reduced]; meaningful iff defined
    std::array<double, 2> v_vap{0.0, 0.0};
    std::array<bool, 2> v_liq_defined{false, false};
    std::array<bool, 2> v_vap_defined{false, false};
};

SlabStates sample_interface_states(const md::ParticleSystem& sys, double gamma,
                                   const SamplingConfig& cfg, double sigma_max);

struct MdRiemannParams {
    std::size_t n_particles = 4096;  // desk-scale default; paper value 32768
    int n_end = 500;
    double dtau = 5e-4;
    double r_cutoff = 2.5;
    double therm_fraction = 1.0;     // thermalization steps as share of n_end
    bool thermostat_production = true;
    double aspect = 3.0;
    double liquid_fraction = 0.35;
    md::LjSpecies species0 = md::argon();
    md::LjSpecies species1 = md::methane();
    double eta = md::kArgonMethaneEta;
    double xi = md::kArgonMethaneXi;
    double T = 110.0;                // K
    SamplingConfig sampling{};
    std::string diagnostics_path;    // empty: no dump
    int snapshot_every = 0;          // particle snapshots; 0: never
    const eos::EosModel* eos = nullptr;  // optional phase classifier for flags
};

/// Interface solver output in SI units: wave states adjacent to the phase
/// boundary and its speed. Flags report sampling quality and, when an EOS
/// was supplied, whether the states classify into the expected phases.
struct InterfaceSolution {
    frame::RotatedState star_liq;
    frame::RotatedState star_vap;
    double speed = 0.0;         // m/s
    double speed_stderr = 0.0;  // m/s
    /// Change of the vapor-region species inventory [u] over the production
    /// run (mass beyond the detected interface at the last step minus mass
    /// beyond it at the first); positive = net liquid -> vapor transfer.
    std::array<double, 2> mass_transfer{0.0, 0.0};
    bool degenerate = false;    // phase classification failed (needs eos)
    bool poor_sampling = false; // a populated far field produced empty slabs
};

/// Runs the atomistic interface solver: initialize the two-phase box from
/// the rotated Riemann data, thermalize, integrate n_end Velocity-Verlet
/// steps while tracking the interface and slab states, then average the
/// final t_smpl_ratio share of the steps. Inputs and outputs are SI.
InterfaceSolution solve_md_riemann(const frame::RotatedState& u_liq,
                                   const frame::RotatedState& u_vap,
                                   const MdRiemannParams& params, std::uint64_t seed);

/// frame::MicroSolver adapter around solve_md_riemann.
frame::MicroOutput md_micro_solver(const frame::MicroInput& in, const MdRiemannParams& params,
                                   std::uint64_t seed);

}  // namespace hmm::md_riemann
