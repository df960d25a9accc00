#include "hmm/fv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "hmm/errors.hpp"

namespace hmm::fv {

namespace {

constexpr std::array<double, 3> kNormalX = {1.0, 0.0, 0.0};

frame::FullState to_full(const frame::RotatedState& u) {
    frame::FullState f;
    f.dim = 1;
    f.rho0 = u.rho0;
    f.rho1 = u.rho1;
    f.m0 = {u.m0, 0.0, 0.0};
    f.m1 = {u.m1, 0.0, 0.0};
    return f;
}

frame::RotatedState to_rotated(const frame::FullState& f) {
    return {f.rho0, f.rho1, f.m0[0], f.m1[0]};
}

frame::RotatedState mirror(const frame::RotatedState& u) {
    return {u.rho0, u.rho1, -u.m0, -u.m1};
}

std::array<double, 2> velocities(const frame::RotatedState& u) {
    return {u.rho0 > 0.0 ? u.m0 / u.rho0 : 0.0, u.rho1 > 0.0 ? u.m1 / u.rho1 : 0.0};
}

}  // namespace

void Mesh1D::check_invariants() const {
    if (nodes.size() != cells() + 1) throw ParameterError("mesh: node/cell count mismatch");
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        if (!(nodes[i] < nodes[i + 1])) throw ParameterError("mesh: nodes not increasing");
    }
    if (interface_node == 0 || interface_node >= cells()) {
        throw ParameterError("mesh: interface node must be interior");
    }
    for (std::size_t i = 0; i < cells(); ++i) {
        const eos::Phase expect = i < interface_node ? eos::Phase::Liquid : eos::Phase::Vapor;
        if (phase[i] != expect) throw ParameterError("mesh: phase tags inconsistent");
    }
}

Mesh1D make_interface_mesh(double xmin, double xmax, double dx, double x_interface) {
    if (!(dx > 0.0) || !(xmax > xmin)) throw ParameterError("mesh: bad extents");
    const double cells_f = (xmax - xmin) / dx;
    const std::size_t n = static_cast<std::size_t>(std::llround(cells_f));
    if (n < 4 || std::abs(cells_f - static_cast<double>(n)) > 1e-9) {
        throw ParameterError("mesh: dx must evenly divide the domain");
    }
    const double if_f = (x_interface - xmin) / dx;
    const std::size_t k = static_cast<std::size_t>(std::llround(if_f));
    if (std::abs(if_f - static_cast<double>(k)) > 1e-9 || k == 0 || k >= n) {
        throw ParameterError("mesh: interface must coincide with an interior node");
    }
    Mesh1D mesh;
    mesh.nodes.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        mesh.nodes[i] = xmin + dx * static_cast<double>(i);
    }
    mesh.phase.assign(n, eos::Phase::Vapor);
    for (std::size_t i = 0; i < k; ++i) mesh.phase[i] = eos::Phase::Liquid;
    mesh.interface_node = k;
    mesh.dx_min = 0.5 * dx;
    mesh.dx_max = 1.5 * dx;
    return mesh;
}

States project_initial_data(const std::function<frame::RotatedState(double)>& u0,
                            const Mesh1D& mesh, const eos::EosModel& eos) {
    States states(mesh.cells());
    for (std::size_t i = 0; i < mesh.cells(); ++i) {
        const double w = mesh.width(i);
        const double xl = mesh.nodes[i] + 1e-12 * w;
        const double xr = mesh.nodes[i + 1] - 1e-12 * w;
        const frame::RotatedState a = u0(xl);
        const frame::RotatedState c = u0(mesh.center(i));
        const frame::RotatedState b = u0(xr);
        auto same = [](const frame::RotatedState& p, const frame::RotatedState& q) {
            return p.rho0 == q.rho0 && p.rho1 == q.rho1 && p.m0 == q.m0 && p.m1 == q.m1;
        };
        if (!same(a, c) || !same(c, b)) {
            throw ParameterError("fv: cell " + std::to_string(i) +
                                 " straddles a discontinuity of the initial data");
        }
        if (eos.classify_phase(c.rho0, c.rho1) != mesh.phase[i]) {
            throw ParameterError("fv: initial datum in cell " + std::to_string(i) +
                                 " is not in the phase of its side of the interface");
        }
        states[i] = c;
    }
    return states;
}

std::array<double, 4> physical_flux(const frame::RotatedState& u) {
    const auto [v0, v1] = velocities(u);
    return {u.m0, u.m1, u.m0 * v0, u.m1 * v1};
}

std::array<double, 4> bulk_flux(const frame::RotatedState& ul, const frame::RotatedState& ur,
                                double lambda) {
    const auto fl = physical_flux(ul);
    const auto fr = physical_flux(ur);
    const std::array<double, 4> du = {ur.rho0 - ul.rho0, ur.rho1 - ul.rho1, ur.m0 - ul.m0,
                                      ur.m1 - ul.m1};
    std::array<double, 4> f{};
    for (int k = 0; k < 4; ++k) f[k] = 0.5 * (fl[k] + fr[k]) - 0.5 * lambda * du[k];
    return f;
}

std::array<double, 4> interface_flux(const frame::RotatedState& star, double s) {
    const auto f = physical_flux(star);
    return {f[0] - s * star.rho0, f[1] - s * star.rho1, f[2] - s * star.m0, f[3] - s * star.m1};
}

double friction_factor(double rho0, double rho1, double M0, double M1, double D01) {
    const double c = rho0 / M0 + rho1 / M1;
    if (!(c > 0.0)) return 0.0;
    return eos::kGasConstant / (M0 * M1 * c) / D01;
}

std::array<double, 2> friction_source(const frame::RotatedState& u, double T, double M0,
                                      double M1, double D01) {
    const auto [v0, v1] = velocities(u);
    const double f01 = friction_factor(u.rho0, u.rho1, M0, M1, D01);
    const double g = -T * f01 * u.rho0 * u.rho1 * (v0 - v1);
    return {g, -g};
}

void move_and_remesh(Mesh1D& mesh, double s, double dt, States& states) {
    mesh.nodes[mesh.interface_node] += s * dt;

    // merge cells that fell below dx_min into their same-phase neighbor
    for (std::size_t i = 0; i < mesh.cells();) {
        if (mesh.width(i) >= mesh.dx_min) {
            ++i;
            continue;
        }
        const bool left_ok = i > 0 && mesh.phase[i - 1] == mesh.phase[i];
        const bool right_ok = i + 1 < mesh.cells() && mesh.phase[i + 1] == mesh.phase[i];
        if (!left_ok && !right_ok) {
            throw SimulationEnd("fv: interface reached the domain boundary");
        }
        const std::size_t j = left_ok ? i - 1 : i + 1;  // merge partner
        const std::size_t lo = std::min(i, j);
        const double wi = mesh.width(i), wj = mesh.width(j);
        frame::RotatedState merged;
        merged.rho0 = (wi * states[i].rho0 + wj * states[j].rho0) / (wi + wj);
        merged.rho1 = (wi * states[i].rho1 + wj * states[j].rho1) / (wi + wj);
        merged.m0 = (wi * states[i].m0 + wj * states[j].m0) / (wi + wj);
        merged.m1 = (wi * states[i].m1 + wj * states[j].m1) / (wi + wj);
        states[lo] = merged;
        states.erase(states.begin() + static_cast<std::ptrdiff_t>(lo) + 1);
        mesh.phase.erase(mesh.phase.begin() + static_cast<std::ptrdiff_t>(lo) + 1);
        mesh.nodes.erase(mesh.nodes.begin() + static_cast<std::ptrdiff_t>(lo) + 1);
        if (lo + 1 < mesh.interface_node) {
            --mesh.interface_node;
        }
        i = lo;  // re-examine the merged cell (it may now exceed dx_max)
    }

    // split cells that exceed dx_max
    for (std::size_t i = 0; i < mesh.cells(); ++i) {
        if (mesh.width(i) <= mesh.dx_max) continue;
        const double mid = 0.5 * (mesh.nodes[i] + mesh.nodes[i + 1]);
        mesh.nodes.insert(mesh.nodes.begin() + static_cast<std::ptrdiff_t>(i) + 1, mid);
        mesh.phase.insert(mesh.phase.begin() + static_cast<std::ptrdiff_t>(i), mesh.phase[i]);
        states.insert(states.begin() + static_cast<std::ptrdiff_t>(i), states[i]);
        if (i < mesh.interface_node) ++mesh.interface_node;
    }
}

StepInfo hmm_step(Mesh1D& mesh, States& states, const frame::MicroSolver& micro,
                  const eos::EosModel& eos_model, const SimConfig& config) {
    const std::size_t n = mesh.cells();
    const std::size_t k = mesh.interface_node;
    if (k < 2 || k + 2 > n) throw SimulationEnd("fv: interface reached the domain boundary");

    // interface solve at the tracked node (Godunov data for the two
    // adjacent cells; normal points into the vapor domain)
    const frame::InterfaceResult itf =
        frame::interface_solve(to_full(states[k - 1]), to_full(states[k]), kNormalX, micro);
    const frame::RotatedState star_m = to_rotated(itf.star_minus);
    const frame::RotatedState star_p = to_rotated(itf.star_plus);
    const double s = itf.speed;

    // per-cell wave speed bound and chemical potentials
    std::vector<double> lambda(n);
    std::vector<std::array<double, 2>> mu(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto [v0, v1] = velocities(states[i]);
        lambda[i] = eos_model.max_wave_speed(states[i].rho0, states[i].rho1, v0, v1);
        if (config.gradmu_on) {
            mu[i] = eos_model.chemical_potential(std::max(states[i].rho0, 1e-12),
                                                 std::max(states[i].rho1, 1e-12));
        }
    }
    double max_lambda = std::max(*std::max_element(lambda.begin(), lambda.end()), std::abs(s));
    if (config.dt * max_lambda > mesh.dx_min) {
        throw ParameterError("fv: CFL violation, dt * " + std::to_string(max_lambda) + " > " +
                             std::to_string(mesh.dx_min));
    }

    // node fluxes; the interface node carries one flux per side
    std::vector<std::array<double, 4>> flux(n + 1);
    std::array<double, 4> flux_if_left{}, flux_if_right{};
    for (std::size_t j = 0; j <= n; ++j) {
        if (j == k) {
            flux_if_left = interface_flux(star_m, s);
            flux_if_right = interface_flux(star_p, s);
        } else if (j == 0) {
            flux[j] = config.boundary == BoundaryCondition::Reflective
                          ? bulk_flux(mirror(states[0]), states[0], lambda[0])
                          : physical_flux(states[0]);
        } else if (j == n) {
            flux[j] = config.boundary == BoundaryCondition::Reflective
                          ? bulk_flux(states[n - 1], mirror(states[n - 1]), lambda[n - 1])
                          : physical_flux(states[n - 1]);
        } else {
            flux[j] = bulk_flux(states[j - 1], states[j], std::max(lambda[j - 1], lambda[j]));
        }
    }

    StepInfo info;
    info.max_lambda = max_lambda;
    info.interface_speed = s;
    info.interface_position = mesh.nodes[k] + s * config.dt;

    const double T = eos_model.temperature();
    const double M0 = eos_model.params().M0;
    const double M1 = eos_model.params().M1;

    States next(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double vol_old = mesh.width(i);
        double vol_new = vol_old;
        if (i == k - 1) vol_new += s * config.dt;
        if (i == k) vol_new -= s * config.dt;

        const std::array<double, 4>& fl = i == k ? flux_if_right : flux[i];
        const std::array<double, 4>& fr = i == k - 1 ? flux_if_left : flux[i + 1];

        std::array<double, 4> src{0.0, 0.0, 0.0, 0.0};
        if (config.friction_on) {
            const auto fs = friction_source(states[i], T, M0, M1, config.D01);
            src[2] += fs[0];
            src[3] += fs[1];
        }
        if (config.gradmu_on) {
            // central difference in the bulk, one-sided next to the
            // interface and at the domain ends
            std::size_t il = i, ir = i;
            if (i > 0 && i != k && mesh.phase[i - 1] == mesh.phase[i]) il = i - 1;
            if (i + 1 < n && i + 1 != k && mesh.phase[i + 1] == mesh.phase[i]) ir = i + 1;
            if (il != ir) {
                const double span = mesh.center(ir) - mesh.center(il);
                const double dmu0 = (mu[ir][0] - mu[il][0]) / span;
                const double dmu1 = (mu[ir][1] - mu[il][1]) / span;
                src[2] -= states[i].rho0 * dmu0;
                src[3] -= states[i].rho1 * dmu1;
                info.injected_momentum[0] += config.dt * vol_old * (-states[i].rho0 * dmu0);
                info.injected_momentum[1] += config.dt * vol_old * (-states[i].rho1 * dmu1);
            }
        }

        const std::array<double, 4> u_old = {states[i].rho0, states[i].rho1, states[i].m0,
                                             states[i].m1};
        std::array<double, 4> u_new{};
        for (int c = 0; c < 4; ++c) {
            u_new[c] = (vol_old * u_old[c] - config.dt * (fr[c] - fl[c]) +
                        config.dt * vol_old * src[c]) /
                       vol_new;
        }
        next[i] = {u_new[0], u_new[1], u_new[2], u_new[3]};
        if (!(next[i].rho0 >= 0.0) || !(next[i].rho1 >= 0.0)) {
            throw PhaseEscapeError("fv: negative density in cell " + std::to_string(i) +
                                   " after update");
        }
    }

    // post-state phase check: every cell must remain in its region
    for (std::size_t i = 0; i < n; ++i) {
        if (eos_model.classify_phase(next[i].rho0, next[i].rho1) != mesh.phase[i]) {
            throw PhaseEscapeError(
                "fv: cell " + std::to_string(i) + " left its phase region (rho0=" +
                std::to_string(next[i].rho0) + ", rho1=" + std::to_string(next[i].rho1) + ")");
        }
    }

    states = std::move(next);
    move_and_remesh(mesh, s, config.dt, states);
    return info;
}

void write_snapshot(const Mesh1D& mesh, const States& states, double time,
                    const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw ParseError("fv: cannot open snapshot file " + path);
    std::fprintf(f, "# t = %.17g s; columns: x_center[m] rho0[kg/m3] rho1[kg/m3] "
                    "v0[m/s] v1[m/s] phase(0=liquid,1=vapor)\n",
                 time);
    for (std::size_t i = 0; i < mesh.cells(); ++i) {
        const auto [v0, v1] = velocities(states[i]);
        std::fprintf(f, "%.17g %.17g %.17g %.17g %.17g %d\n", mesh.center(i), states[i].rho0,
                     states[i].rho1, v0, v1, mesh.phase[i] == eos::Phase::Liquid ? 0 : 1);
    }
    std::fclose(f);
}

SimResult run_simulation(const frame::RotatedState& u_liq, const frame::RotatedState& u_vap,
                         const frame::MicroSolver& micro, const eos::EosModel& eos_model,
                         const SimConfig& config) {
    SimResult result;
    result.mesh = make_interface_mesh(config.xmin, config.xmax, config.dx, config.x_interface);
    const double x_if = config.x_interface;
    result.states = project_initial_data(
        [&](double x) { return x < x_if ? u_liq : u_vap; }, result.mesh, eos_model);
    result.mesh.check_invariants();

    const std::size_t n_steps =
        static_cast<std::size_t>(std::llround(std::max(config.t_end, 0.0) / config.dt));
    const bool io = !config.out_dir.empty();
    if (io) {
        std::filesystem::create_directories(config.out_dir);
        write_snapshot(result.mesh, result.states, 0.0, config.out_dir + "/snapshot_000000.txt");
    }

    for (std::size_t step = 1; step <= n_steps; ++step) {
        StepInfo info;
        try {
            info = hmm_step(result.mesh, result.states, micro, eos_model, config);
        } catch (const SimulationEnd&) {
            result.ended_at_boundary = true;
            break;
        } catch (const Error&) {
            if (io) {
                write_snapshot(result.mesh, result.states, (step - 1) * config.dt,
                               config.out_dir + "/snapshot_lastgood.txt");
            }
            throw;
        }
        result.steps_taken = step;
        result.interface_positions.push_back(info.interface_position);
        result.interface_speeds.push_back(info.interface_speed);
        if (io && config.snapshot_every > 0 && step % config.snapshot_every == 0) {
            char name[64];
            std::snprintf(name, sizeof(name), "/snapshot_%06zu.txt", step);
            write_snapshot(result.mesh, result.states, step * config.dt, config.out_dir + name);
        }
    }

    if (io) {
        write_snapshot(result.mesh, result.states, result.steps_taken * config.dt,
                       config.out_dir + "/snapshot_final.txt");
        std::FILE* f = std::fopen((config.out_dir + "/interface_trajectory.csv").c_str(), "w");
        if (f) {
            std::fprintf(f, "step,t,position,speed\n");
            for (std::size_t i = 0; i < result.interface_positions.size(); ++i) {
                std::fprintf(f, "%zu,%.17g,%.17g,%.17g\n", i + 1, (i + 1) * config.dt,
                             result.interface_positions[i], result.interface_speeds[i]);
            }
            std::fclose(f);
        }
    }
    return result;
}

}  // namespace hmm::fv
