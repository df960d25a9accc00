#include "hmm/cli.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>

#include <nlohmann/json.hpp>

#include "hmm/dataset.hpp"
#include "hmm/errors.hpp"
#include "hmm/fv/solver.hpp"
#include "hmm/md_riemann.hpp"
#include "hmm/rng.hpp"

namespace hmm::cli {

namespace {

constexpr const char* kVersion = "hmm2p 1.0.0";

std::array<double, 9> to_array(const frame::MicroOutput& o) {
    return {o.rho0_liq, o.rho1_liq, o.m0_liq, o.m1_liq, o.rho0_vap,
            o.rho1_vap, o.m0_vap,   o.m1_vap, o.speed};
}

void write_manifest(const config::PipelineConfig& cfg, const std::string& stage,
                    const std::string& status, double wall_s, const std::string& error) {
    try {
        std::filesystem::create_directories(cfg.out);
        nlohmann::json j = {
            {"stage", stage},       {"config_hash", config::config_hash(cfg)},
            {"seed", cfg.seed},     {"version", kVersion},
            {"wall_time_s", wall_s}, {"status", status},
        };
        if (!error.empty()) j["error"] = error;
        std::ofstream out(cfg.out + "/manifest-" + stage + ".json");
        out << j.dump(2) << "\n";
    } catch (...) {
        // manifest failures must not mask the stage outcome
    }
}

frame::RotatedState liquid_state(const config::InitialDataBlock& d) {
    return {d.rho0_liq, d.rho1_liq, d.rho0_liq * d.v0_liq, d.rho1_liq * d.v1_liq};
}

frame::RotatedState vapor_state(const config::InitialDataBlock& d) {
    return {d.rho0_vap, d.rho1_vap, d.rho0_vap * d.v0_vap, d.rho1_vap * d.v1_vap};
}

std::unique_ptr<eos::VdwMixtureEos> build_eos(const config::PipelineConfig& cfg) {
    eos::EosParams params = cfg.eos.params;
    if (!cfg.eos.file.empty()) params = eos::load_eos_params(cfg.eos.file);
    return std::make_unique<eos::VdwMixtureEos>(params, cfg.eos.grid);
}

void run_md_riemann_stage(const config::PipelineConfig& cfg) {
    const auto eos_model = build_eos(cfg);
    md_riemann::MdRiemannParams params = config::to_md_params(cfg, eos_model.get());
    std::filesystem::create_directories(cfg.out);
    params.diagnostics_path = cfg.out + "/md_riemann_diag.txt";
    const auto sol = md_riemann::solve_md_riemann(liquid_state(cfg.initial),
                                                  vapor_state(cfg.initial), params, cfg.seed);
    nlohmann::json j = {
        {"star_liq", {{"rho0", sol.star_liq.rho0},
                      {"rho1", sol.star_liq.rho1},
                      {"m0", sol.star_liq.m0},
                      {"m1", sol.star_liq.m1}}},
        {"star_vap", {{"rho0", sol.star_vap.rho0},
                      {"rho1", sol.star_vap.rho1},
                      {"m0", sol.star_vap.m0},
                      {"m1", sol.star_vap.m1}}},
        {"speed", sol.speed},
        {"speed_stderr", sol.speed_stderr},
        {"degenerate", sol.degenerate},
        {"poor_sampling", sol.poor_sampling},
        {"units", "SI"},
    };
    std::ofstream out(cfg.out + "/interface_solution.json");
    out << j.dump(2) << "\n";
    std::printf("md-riemann: s = %.6g m/s (stderr %.3g), star_liq rho = (%.6g, %.6g), "
                "star_vap rho = (%.6g, %.6g)\n",
                sol.speed, sol.speed_stderr, sol.star_liq.rho0, sol.star_liq.rho1,
                sol.star_vap.rho0, sol.star_vap.rho1);
}

void run_dataset_stage(const config::PipelineConfig& cfg) {
    const auto eos_model = build_eos(cfg);
    const md_riemann::MdRiemannParams base = config::to_md_params(cfg, eos_model.get());
    const dataset::Bounds bounds = dataset::table4_bounds();
    const auto samples = dataset::sample_inputs(cfg.dataset.n_samples, bounds, cfg.seed,
                                                cfg.dataset.pool);
    dataset::MicroFn micro = [&base](const dataset::InputSample& s, std::uint64_t seed) {
        frame::MicroInput in{s.v[0], s.v[1], s.v[2], s.v[3], s.v[4], s.v[5], s.v[6]};
        return to_array(md_riemann::md_micro_solver(in, base, seed));
    };
    const auto records = dataset::generate_records(samples, micro, cfg.seed, cfg.dataset.jobs);
    std::filesystem::create_directories(cfg.out);
    dataset::write_dataset(cfg.out + "/" + cfg.dataset.path, records, config::config_hash(cfg));
    std::size_t failed = 0;
    for (const auto& r : records) failed += r.failed ? 1 : 0;
    std::printf("dataset: %zu records written (%zu failed) to %s\n", records.size(), failed,
                (cfg.out + "/" + cfg.dataset.path).c_str());
}

void run_train_stage(const config::PipelineConfig& cfg) {
    const auto records = dataset::read_dataset(cfg.train.dataset);
    std::vector<std::array<double, 7>> x;
    std::vector<std::array<double, 9>> y;
    for (const auto& r : records) {
        if (r.failed) continue;
        x.push_back(r.input.v);
        y.push_back(r.output);
    }
    surrogate::NetworkShape shape;
    shape.hidden_layers = cfg.train.hidden_layers;
    shape.hidden_width = cfg.train.hidden_width;
    surrogate::TrainConfig tc;
    tc.epochs = cfg.train.epochs;
    tc.batch_size = cfg.train.batch_size;
    tc.learning_rate = cfg.train.learning_rate;
    tc.momentum = cfg.train.momentum;
    tc.lr_decay = cfg.train.lr_decay;
    tc.val_fraction = cfg.train.val_fraction;
    tc.seed = cfg.seed;
    const auto result = surrogate::train(x, y, shape, tc);
    std::filesystem::create_directories(cfg.out);
    surrogate::save_network(result.params, cfg.out + "/" + cfg.train.model);
    std::ofstream loss(cfg.out + "/loss_history.csv");
    loss << "epoch,train_loss,val_loss\n";
    for (std::size_t e = 0; e < result.train_loss.size(); ++e) {
        char line[80];
        std::snprintf(line, sizeof(line), "%zu,%.17g,%.17g\n", e, result.train_loss[e],
                      result.val_loss[e]);
        loss << line;
    }
    std::printf("train: %zu usable records, best epoch %d, val loss %.6g, model %s\n", x.size(),
                result.best_epoch,
                result.best_epoch >= 0 ? result.val_loss[result.best_epoch] : -1.0,
                (cfg.out + "/" + cfg.train.model).c_str());
}

void run_simulate_stage(const config::PipelineConfig& cfg) {
    const auto eos_model = build_eos(cfg);
    frame::MicroSolver micro;
    if (cfg.simulate.solver == "surrogate") {
        micro = make_surrogate_micro(surrogate::load_network(cfg.simulate.model));
    } else {
        micro = make_md_micro(cfg, eos_model.get(), cfg.seed);
    }
    fv::SimConfig sim = config::to_sim_config(cfg);
    sim.out_dir = cfg.out;
    const auto result = fv::run_simulation(liquid_state(cfg.initial), vapor_state(cfg.initial),
                                           micro, *eos_model, sim);
    std::printf("simulate: %zu steps, final interface at %.6g m%s\n", result.steps_taken,
                result.interface_positions.empty() ? sim.x_interface
                                                   : result.interface_positions.back(),
                result.ended_at_boundary ? " (stopped at domain boundary)" : "");
}

}  // namespace

frame::MicroSolver make_surrogate_micro(surrogate::NetworkParams params) {
    return [params = std::move(params)](const frame::MicroInput& in) {
        const std::array<double, 7> x = {in.rho0_liq, in.rho1_liq, in.vrel_liq, in.rho0_vap,
                                         in.rho1_vap, in.v_vap,    in.vrel_vap};
        const auto o = surrogate::forward_constrained(params, x);
        return frame::MicroOutput{o[0], o[1], o[2], o[3], o[4], o[5], o[6], o[7], o[8]};
    };
}

frame::MicroSolver make_md_micro(const config::PipelineConfig& cfg,
                                 const eos::EosModel* eos_model, std::uint64_t base_seed) {
    const md_riemann::MdRiemannParams base = config::to_md_params(cfg, eos_model);
    auto counter = std::make_shared<std::atomic<std::uint64_t>>(0);
    return [base, counter, base_seed](const frame::MicroInput& in) {
        const std::uint64_t call = counter->fetch_add(1);
        return md_riemann::md_micro_solver(in, base, split_seed(base_seed, call));
    };
}

int execute(const std::string& stage, const config::PipelineConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&]() {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    try {
        if (stage == "md-riemann") {
            run_md_riemann_stage(cfg);
        } else if (stage == "dataset") {
            run_dataset_stage(cfg);
        } else if (stage == "train") {
            run_train_stage(cfg);
        } else if (stage == "simulate") {
            run_simulate_stage(cfg);
        } else {
            throw ParameterError("cli: unknown stage '" + stage + "'");
        }
        write_manifest(cfg, stage, "ok", elapsed(), "");
        return kOk;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        write_manifest(cfg, stage, "failed", elapsed(), e.what());
        return kIoError;
    } catch (const ParameterError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        write_manifest(cfg, stage, "failed", elapsed(), e.what());
        return kConfigError;
    } catch (const PhaseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        write_manifest(cfg, stage, "failed", elapsed(), e.what());
        return kPhaseError;
    } catch (const PhaseEscapeError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        write_manifest(cfg, stage, "failed", elapsed(), e.what());
        return kPhaseError;
    } catch (const BlowUpError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        write_manifest(cfg, stage, "failed", elapsed(), e.what());
        return kMdError;
    } catch (const InterfaceLostError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        write_manifest(cfg, stage, "failed", elapsed(), e.what());
        return kMdError;
    } catch (const InfeasibleDensityError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        write_manifest(cfg, stage, "failed", elapsed(), e.what());
        return kMdError;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        write_manifest(cfg, stage, "failed", elapsed(), e.what());
        return kGenericError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        write_manifest(cfg, stage, "failed", elapsed(), e.what());
        return kGenericError;
    }
}

}  // namespace hmm::cli
