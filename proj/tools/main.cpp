#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "hmm/cli.hpp"
#include "hmm/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"hmm2p - multiscale two-component two-phase flow pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string solver;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 0;

    app.add_option("--config", config_path, "pipeline configuration file (JSON)");
    app.add_option_function<std::uint64_t>(
           "--seed", [&](std::uint64_t s) { seed = s; seed_set = true; }, "global seed")
        ->type_name("UINT");
    app.add_option("--out", out_dir, "output directory");

    auto* md = app.add_subcommand("md-riemann", "solve one MD interface Riemann problem");
    md->fallthrough();
    auto* ds = app.add_subcommand("dataset", "generate the surrogate training set");
    ds->fallthrough();
    ds->add_option("--jobs", jobs, "parallel MD workers");
    auto* tr = app.add_subcommand("train", "train the surrogate network");
    tr->fallthrough();
    auto* sim = app.add_subcommand("simulate", "run the 1D continuum simulation");
    sim->fallthrough();
    sim->add_option("--solver", solver, "interface solver: surrogate|md");

    CLI11_PARSE(app, argc, argv);

    try {
        hmm::config::PipelineConfig cfg = config_path.empty()
                                              ? hmm::config::parse_config_text("")
                                              : hmm::config::parse_config(config_path);
        if (seed_set) cfg.seed = seed;
        if (!out_dir.empty()) cfg.out = out_dir;
        if (jobs > 0) cfg.dataset.jobs = jobs;
        if (!solver.empty()) cfg.simulate.solver = solver;

        std::string stage;
        if (md->parsed()) stage = "md-riemann";
        if (ds->parsed()) stage = "dataset";
        if (tr->parsed()) stage = "train";
        if (sim->parsed()) stage = "simulate";
        return hmm::cli::execute(stage, cfg);
    } catch (const hmm::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return hmm::cli::kIoError;
    } catch (const hmm::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return hmm::cli::kConfigError;
    }
}
