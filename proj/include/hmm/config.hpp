#pragma once

#include <cstdint>
#include <string>

#include "hmm/dataset.hpp"
#include "hmm/eos.hpp"
#include "hmm/fv/solver.hpp"
#include "hmm/md_riemann.hpp"
#include "hmm/surrogate.hpp"

namespace hmm::config {

/// Atomistic-solver block; defaults mirror the MD parameter table
/// (r_cutoff 2.5, n_end 500, dtau 5e-4, sampling ratio 0.2) with a
/// desk-scale particle budget.
struct MdBlock {
    std::size_t n_particles = 4096;
    int n_end = 500;
    double dtau = 5e-4;
    double r_cutoff = 2.5;
    double t_smpl_ratio = 0.2;
    double therm_fraction = 1.0;
    bool thermostat_production = true;
    int bins = 128;
    double aspect = 3.0;
    double liquid_fraction = 0.35;
    double slab_offset_sigma = 3.0;
    double slab_width_sigma = 6.0;
    double kernel_eps_sigma = 2.0;
    double sigma0 = 3.3967, eps0 = 117.05, mass0 = 39.948;   // argon
    double sigma1 = 3.7275, eps1 = 148.99, mass1 = 16.043;   // methane
    double eta = 1.00141;
    double xi = 0.96400;
    double T = 110.0;
};

/// Riemann initial data, SI; defaults are the pressure-driven shock setup.
struct InitialDataBlock {
    double rho0_liq = 1200.0, rho1_liq = 100.0, v0_liq = 0.0, v1_liq = 0.0;
    double rho0_vap = 10.0, rho1_vap = 20.0, v0_vap = 0.0, v1_vap = 0.0;
};

struct EosBlock {
    eos::EosParams params{};
    std::size_t grid = 512;
    std::string file;  // optional parameter file overriding the inline values
};

struct DatasetBlock {
    std::size_t n_samples = 200;  // desk-scale; full-scale value is 12000
    int pool = 64;
    int jobs = 1;
    std::string path = "dataset.csv";
};

struct TrainBlock {
    int epochs = 500;
    int batch_size = 32;
    double learning_rate = 2e-3;
    double momentum = 0.9;
    double lr_decay = 0.999;
    double val_fraction = 0.1;
    int hidden_layers = 5;
    int hidden_width = 60;
    std::string dataset = "dataset.csv";
    std::string model = "surrogate.json";
};

/// 1D continuum run; defaults mirror the d=1 simulation table
/// (t_end 0.003, dt 1e-7, domain [-5,5], dx 2e-3, D01 1.0).
struct SimulateBlock {
    double t_end = 0.003;
    double dt = 1e-7;
    double xmin = -5.0;
    double xmax = 5.0;
    double dx = 2e-3;
    double x_interface = 0.0;
    double D01 = 1.0;
    std::string boundary = "outflow";  // outflow | reflective
    bool friction = true;
    bool gradmu = true;
    int snapshot_every = 0;
    std::string solver = "surrogate";  // surrogate | md
    std::string model = "surrogate.json";
};

struct PipelineConfig {
    std::string stage;  // optional; the CLI subcommand takes precedence
    std::uint64_t seed = 0;
    std::string out = "out";
    EosBlock eos;
    MdBlock md;
    InitialDataBlock initial;
    DatasetBlock dataset;
    TrainBlock train;
    SimulateBlock simulate;
};

/// Strict parse: unknown keys, type mismatches, and constraint violations
/// raise errors naming the offending key path. An empty file yields the
/// all-defaults config.
PipelineConfig parse_config(const std::string& path);
PipelineConfig parse_config_text(const std::string& text);

std::string emit_config(const PipelineConfig& config);

/// FNV-1a hash of the canonical emitted form, hex encoded.
std::string config_hash(const PipelineConfig& config);

md_riemann::MdRiemannParams to_md_params(const PipelineConfig& config,
                                         const eos::EosModel* eos_model);
fv::SimConfig to_sim_config(const PipelineConfig& config);

}  // namespace hmm::config
