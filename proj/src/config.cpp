#include "hmm/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hmm/errors.hpp"

namespace hmm::config {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ParseError("config: " + path + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (allowed.find(it.key()) == allowed.end()) {
            throw ParseError("config: unknown key '" + (path.empty() ? it.key()
                                                                     : path + "." + it.key()) +
                             "'");
        }
    }
}

template <typename T>
void read_field(const json& j, const std::string& path, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        j.at(key).get_to(out);
    } catch (const json::exception&) {
        throw ParseError("config: type mismatch at '" + path + "." + key + "'");
    }
}

void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ParameterError("config: constraint violated at '" + key + "': " + what);
}

}  // namespace

PipelineConfig parse_config_text(const std::string& text) {
    std::string trimmed = text;
    trimmed.erase(0, trimmed.find_first_not_of(" \t\r\n"));
    json j;
    if (trimmed.empty()) {
        j = json::object();
    } else {
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            throw ParseError(std::string("config: malformed JSON: ") + e.what());
        }
    }

    PipelineConfig c;
    check_keys(j, "", {"stage", "seed", "out", "eos", "md", "initial", "dataset", "train",
                       "simulate"});
    read_field(j, "", "stage", c.stage);
    read_field(j, "", "seed", c.seed);
    read_field(j, "", "out", c.out);

    if (j.contains("eos")) {
        const json& e = j["eos"];
        check_keys(e, "eos", {"M0", "M1", "a00", "a01", "a11", "b0", "b1", "T", "grid", "file"});
        read_field(e, "eos", "M0", c.eos.params.M0);
        read_field(e, "eos", "M1", c.eos.params.M1);
        read_field(e, "eos", "a00", c.eos.params.a00);
        read_field(e, "eos", "a01", c.eos.params.a01);
        read_field(e, "eos", "a11", c.eos.params.a11);
        read_field(e, "eos", "b0", c.eos.params.b0);
        read_field(e, "eos", "b1", c.eos.params.b1);
        read_field(e, "eos", "T", c.eos.params.T);
        read_field(e, "eos", "grid", c.eos.grid);
        read_field(e, "eos", "file", c.eos.file);
    }
    if (j.contains("md")) {
        const json& m = j["md"];
        check_keys(m, "md",
                   {"n_particles", "n_end", "dtau", "r_cutoff", "t_smpl_ratio", "therm_fraction",
                    "thermostat_production", "bins", "aspect", "liquid_fraction",
                    "slab_offset_sigma", "slab_width_sigma", "kernel_eps_sigma", "sigma0",
                    "eps0", "mass0", "sigma1", "eps1", "mass1", "eta", "xi", "T"});
        read_field(m, "md", "n_particles", c.md.n_particles);
        read_field(m, "md", "n_end", c.md.n_end);
        read_field(m, "md", "dtau", c.md.dtau);
        read_field(m, "md", "r_cutoff", c.md.r_cutoff);
        read_field(m, "md", "t_smpl_ratio", c.md.t_smpl_ratio);
        read_field(m, "md", "therm_fraction", c.md.therm_fraction);
        read_field(m, "md", "thermostat_production", c.md.thermostat_production);
        read_field(m, "md", "bins", c.md.bins);
        read_field(m, "md", "aspect", c.md.aspect);
        read_field(m, "md", "liquid_fraction", c.md.liquid_fraction);
        read_field(m, "md", "slab_offset_sigma", c.md.slab_offset_sigma);
        read_field(m, "md", "slab_width_sigma", c.md.slab_width_sigma);
        read_field(m, "md", "kernel_eps_sigma", c.md.kernel_eps_sigma);
        read_field(m, "md", "sigma0", c.md.sigma0);
        read_field(m, "md", "eps0", c.md.eps0);
        read_field(m, "md", "mass0", c.md.mass0);
        read_field(m, "md", "sigma1", c.md.sigma1);
        read_field(m, "md", "eps1", c.md.eps1);
        read_field(m, "md", "mass1", c.md.mass1);
        read_field(m, "md", "eta", c.md.eta);
        read_field(m, "md", "xi", c.md.xi);
        read_field(m, "md", "T", c.md.T);
    }
    if (j.contains("initial")) {
        const json& d = j["initial"];
        check_keys(d, "initial", {"rho0_liq", "rho1_liq", "v0_liq", "v1_liq", "rho0_vap",
                                  "rho1_vap", "v0_vap", "v1_vap"});
        read_field(d, "initial", "rho0_liq", c.initial.rho0_liq);
        read_field(d, "initial", "rho1_liq", c.initial.rho1_liq);
        read_field(d, "initial", "v0_liq", c.initial.v0_liq);
        read_field(d, "initial", "v1_liq", c.initial.v1_liq);
        read_field(d, "initial", "rho0_vap", c.initial.rho0_vap);
        read_field(d, "initial", "rho1_vap", c.initial.rho1_vap);
        read_field(d, "initial", "v0_vap", c.initial.v0_vap);
        read_field(d, "initial", "v1_vap", c.initial.v1_vap);
    }
    if (j.contains("dataset")) {
        const json& d = j["dataset"];
        check_keys(d, "dataset", {"n_samples", "pool", "jobs", "path"});
        read_field(d, "dataset", "n_samples", c.dataset.n_samples);
        read_field(d, "dataset", "pool", c.dataset.pool);
        read_field(d, "dataset", "jobs", c.dataset.jobs);
        read_field(d, "dataset", "path", c.dataset.path);
    }
    if (j.contains("train")) {
        const json& t = j["train"];
        check_keys(t, "train",
                   {"epochs", "batch_size", "learning_rate", "momentum", "lr_decay",
                    "val_fraction", "hidden_layers", "hidden_width", "dataset", "model"});
        read_field(t, "train", "epochs", c.train.epochs);
        read_field(t, "train", "batch_size", c.train.batch_size);
        read_field(t, "train", "learning_rate", c.train.learning_rate);
        read_field(t, "train", "momentum", c.train.momentum);
        read_field(t, "train", "lr_decay", c.train.lr_decay);
        read_field(t, "train", "val_fraction", c.train.val_fraction);
        read_field(t, "train", "hidden_layers", c.train.hidden_layers);
        read_field(t, "train", "hidden_width", c.train.hidden_width);
        read_field(t, "train", "dataset", c.train.dataset);
        read_field(t, "train", "model", c.train.model);
    }
    if (j.contains("simulate")) {
        const json& s = j["simulate"];
        check_keys(s, "simulate",
                   {"t_end", "dt", "xmin", "xmax", "dx", "x_interface", "D01", "boundary",
                    "friction", "gradmu", "snapshot_every", "solver", "model"});
        read_field(s, "simulate", "t_end", c.simulate.t_end);
        read_field(s, "simulate", "dt", c.simulate.dt);
        read_field(s, "simulate", "xmin", c.simulate.xmin);
        read_field(s, "simulate", "xmax", c.simulate.xmax);
        read_field(s, "simulate", "dx", c.simulate.dx);
        read_field(s, "simulate", "x_interface", c.simulate.x_interface);
        read_field(s, "simulate", "D01", c.simulate.D01);
        read_field(s, "simulate", "boundary", c.simulate.boundary);
        read_field(s, "simulate", "friction", c.simulate.friction);
        read_field(s, "simulate", "gradmu", c.simulate.gradmu);
        read_field(s, "simulate", "snapshot_every", c.simulate.snapshot_every);
        read_field(s, "simulate", "solver", c.simulate.solver);
        read_field(s, "simulate", "model", c.simulate.model);
    }

    // constraint validation, each with its key path
    require(c.stage.empty() || c.stage == "md-riemann" || c.stage == "dataset" ||
                c.stage == "train" || c.stage == "simulate",
            "stage", "must be md-riemann|dataset|train|simulate");
    c.eos.params.validate();
    require(c.eos.grid >= 16, "eos.grid", "must be >= 16");
    require(c.md.n_particles >= 64, "md.n_particles", "must be >= 64");
    require(c.md.n_end >= 2, "md.n_end", "must be >= 2");
    require(c.md.dtau > 0.0, "md.dtau", "must be positive");
    require(c.md.r_cutoff > 1.0, "md.r_cutoff", "must exceed 1");
    require(c.md.t_smpl_ratio > 0.0 && c.md.t_smpl_ratio <= 1.0, "md.t_smpl_ratio",
            "must lie in (0, 1]");
    require(c.md.therm_fraction >= 0.0, "md.therm_fraction", "must be >= 0");
    require(c.md.bins >= 8, "md.bins", "must be >= 8");
    require(c.md.liquid_fraction > 0.0 && c.md.liquid_fraction < 1.0, "md.liquid_fraction",
            "must lie in (0, 1)");
    require(c.md.T > 0.0, "md.T", "must be positive");
    require(c.dataset.n_samples >= 1, "dataset.n_samples", "must be >= 1");
    require(c.dataset.pool >= 1, "dataset.pool", "must be >= 1");
    require(c.dataset.jobs >= 1, "dataset.jobs", "must be >= 1");
    require(c.train.epochs >= 1, "train.epochs", "must be >= 1");
    require(c.train.batch_size >= 1, "train.batch_size", "must be >= 1");
    require(c.train.learning_rate > 0.0, "train.learning_rate", "must be positive");
    require(c.train.val_fraction >= 0.0 && c.train.val_fraction < 1.0, "train.val_fraction",
            "must lie in [0, 1)");
    require(c.train.hidden_layers >= 1 && c.train.hidden_width >= 1, "train.hidden_layers",
            "network shape must be positive");
    require(c.simulate.t_end >= 0.0, "simulate.t_end", "must be >= 0");
    require(c.simulate.dt > 0.0, "simulate.dt", "must be positive");
    require(c.simulate.xmax > c.simulate.xmin, "simulate.xmax", "domain must be non-empty");
    require(c.simulate.dx > 0.0, "simulate.dx", "must be positive");
    require(c.simulate.D01 > 0.0, "simulate.D01", "must be positive");
    require(c.simulate.boundary == "outflow" || c.simulate.boundary == "reflective",
            "simulate.boundary", "must be outflow|reflective");
    require(c.simulate.solver == "surrogate" || c.simulate.solver == "md", "simulate.solver",
            "must be surrogate|md");
    return c;
}

PipelineConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string emit_config(const PipelineConfig& c) {
    json j;
    j["stage"] = c.stage;
    j["seed"] = c.seed;
    j["out"] = c.out;
    j["eos"] = {{"M0", c.eos.params.M0}, {"M1", c.eos.params.M1}, {"a00", c.eos.params.a00},
                {"a01", c.eos.params.a01}, {"a11", c.eos.params.a11}, {"b0", c.eos.params.b0},
                {"b1", c.eos.params.b1},   {"T", c.eos.params.T},     {"grid", c.eos.grid},
                {"file", c.eos.file}};
    j["md"] = {{"n_particles", c.md.n_particles},
               {"n_end", c.md.n_end},
               {"dtau", c.md.dtau},
               {"r_cutoff", c.md.r_cutoff},
               {"t_smpl_ratio", c.md.t_smpl_ratio},
               {"therm_fraction", c.md.therm_fraction},
               {"thermostat_production", c.md.thermostat_production},
               {"bins", c.md.bins},
               {"aspect", c.md.aspect},
               {"liquid_fraction", c.md.liquid_fraction},
               {"slab_offset_sigma", c.md.slab_offset_sigma},
               {"slab_width_sigma", c.md.slab_width_sigma},
               {"kernel_eps_sigma", c.md.kernel_eps_sigma},
               {"sigma0", c.md.sigma0},
               {"eps0", c.md.eps0},
               {"mass0", c.md.mass0},
               {"sigma1", c.md.sigma1},
               {"eps1", c.md.eps1},
               {"mass1", c.md.mass1},
               {"eta", c.md.eta},
               {"xi", c.md.xi},
               {"T", c.md.T}};
    j["initial"] = {{"rho0_liq", c.initial.rho0_liq}, {"rho1_liq", c.initial.rho1_liq},
                    {"v0_liq", c.initial.v0_liq},     {"v1_liq", c.initial.v1_liq},
                    {"rho0_vap", c.initial.rho0_vap}, {"rho1_vap", c.initial.rho1_vap},
                    {"v0_vap", c.initial.v0_vap},     {"v1_vap", c.initial.v1_vap}};
    j["dataset"] = {{"n_samples", c.dataset.n_samples},
                    {"pool", c.dataset.pool},
                    {"jobs", c.dataset.jobs},
                    {"path", c.dataset.path}};
    j["train"] = {{"epochs", c.train.epochs},
                  {"batch_size", c.train.batch_size},
                  {"learning_rate", c.train.learning_rate},
                  {"momentum", c.train.momentum},
                  {"lr_decay", c.train.lr_decay},
                  {"val_fraction", c.train.val_fraction},
                  {"hidden_layers", c.train.hidden_layers},
                  {"hidden_width", c.train.hidden_width},
                  {"dataset", c.train.dataset},
                  {"model", c.train.model}};
    j["simulate"] = {{"t_end", c.simulate.t_end},
                     {"dt", c.simulate.dt},
                     {"xmin", c.simulate.xmin},
                     {"xmax", c.simulate.xmax},
                     {"dx", c.simulate.dx},
                     {"x_interface", c.simulate.x_interface},
                     {"D01", c.simulate.D01},
                     {"boundary", c.simulate.boundary},
                     {"friction", c.simulate.friction},
                     {"gradmu", c.simulate.gradmu},
                     {"snapshot_every", c.simulate.snapshot_every},
                     {"solver", c.simulate.solver},
                     {"model", c.simulate.model}};
    return j.dump(2);
}

std::string config_hash(const PipelineConfig& c) {
    const std::string text = emit_config(c);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

md_riemann::MdRiemannParams to_md_params(const PipelineConfig& c,
                                         const eos::EosModel* eos_model) {
    md_riemann::MdRiemannParams p;
    p.n_particles = c.md.n_particles;
    p.n_end = c.md.n_end;
    p.dtau = c.md.dtau;
    p.r_cutoff = c.md.r_cutoff;
    p.therm_fraction = c.md.therm_fraction;
    p.thermostat_production = c.md.thermostat_production;
    p.aspect = c.md.aspect;
    p.liquid_fraction = c.md.liquid_fraction;
    p.species0 = {c.md.sigma0, c.md.eps0, c.md.mass0};
    p.species1 = {c.md.sigma1, c.md.eps1, c.md.mass1};
    p.eta = c.md.eta;
    p.xi = c.md.xi;
    p.T = c.md.T;
    p.sampling.bins = c.md.bins;
    p.sampling.slab_offset_sigma = c.md.slab_offset_sigma;
    p.sampling.slab_width_sigma = c.md.slab_width_sigma;
    p.sampling.kernel_eps_sigma = c.md.kernel_eps_sigma;
    p.sampling.t_smpl_ratio = c.md.t_smpl_ratio;
    p.eos = eos_model;
    return p;
}

fv::SimConfig to_sim_config(const PipelineConfig& c) {
    fv::SimConfig s;
    s.t_end = c.simulate.t_end;
    s.dt = c.simulate.dt;
    s.xmin = c.simulate.xmin;
    s.xmax = c.simulate.xmax;
    s.dx = c.simulate.dx;
    s.x_interface = c.simulate.x_interface;
    s.D01 = c.simulate.D01;
    s.boundary = c.simulate.boundary == "reflective" ? fv::BoundaryCondition::Reflective
                                                     : fv::BoundaryCondition::Outflow;
    s.friction_on = c.simulate.friction;
    s.gradmu_on = c.simulate.gradmu;
    s.snapshot_every = c.simulate.snapshot_every;
    return s;
}

}  // namespace hmm::config
