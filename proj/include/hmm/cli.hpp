#pragma once

#include <string>

#include "hmm/config.hpp"
#include "hmm/frame.hpp"
#include "hmm/surrogate.hpp"

namespace hmm::cli {

/// Exit codes mapped from error categories.
enum ExitCode {
    kOk = 0,
    kGenericError = 1,
    kConfigError = 2,
    kMdError = 3,
    kPhaseError = 4,
    kIoError = 5,
};

/// Wraps a trained network as an interface micro-solver.
frame::MicroSolver make_surrogate_micro(surrogate::NetworkParams params);

/// Wraps the MD solver as an interface micro-solver; successive calls fork
/// deterministic seeds from base_seed.
frame::MicroSolver make_md_micro(const config::PipelineConfig& config,
                                 const eos::EosModel* eos_model, std::uint64_t base_seed);

/// Runs one pipeline stage (md-riemann | dataset | train | simulate).
/// Artifacts land in config.out; a manifest (config hash, seed, versions,
/// wall time, status) is written beside them even on failure. Returns the
/// process exit code.
int execute(const std::string& stage, const config::PipelineConfig& config);

}  // namespace hmm::cli
