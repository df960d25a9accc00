#include "hmm/md_riemann.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "hmm/errors.hpp"
#include "hmm/md/forces.hpp"
#include "hmm/md/integrator.hpp"
#include "hmm/rng.hpp"
#include "hmm/units.hpp"

namespace hmm::md_riemann {

using md::operator+;
using md::operator-;
using md::operator*;

namespace {

using md::kNormalAxis;
using md::ParticleSystem;
using md::Vec3;
using units::QuantityKind;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::vector<double> gaussian_smooth(const std::vector<double>& v, double width_bins) {
    const int n = static_cast<int>(v.size());
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * width_bins)));
    std::vector<double> out(v.size());
    for (int i = 0; i < n; ++i) {
        double num = 0.0, den = 0.0;
        for (int j = std::max(0, i - radius); j <= std::min(n - 1, i + radius); ++j) {
            const double w = std::exp(-0.5 * (j - i) * (j - i) / (width_bins * width_bins));
            num += w * v[j];
            den += w;
        }
        out[i] = num / den;
    }
    return out;
}

struct LinearFit {
    double slope = 0.0;
    double stderr_slope = 0.0;
};

double ols_slope(const double* t, const double* y, std::size_t n, double* stderr_out) {
    double tm = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        tm += t[i];
        ym += y[i];
    }
    tm /= static_cast<double>(n);
    ym /= static_cast<double>(n);
    double stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        stt += (t[i] - tm) * (t[i] - tm);
        sty += (t[i] - tm) * (y[i] - ym);
    }
    const double slope = stt > 0.0 ? sty / stt : 0.0;
    if (stderr_out != nullptr) {
        *stderr_out = 0.0;
        if (n > 2 && stt > 0.0) {
            double ss = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double r = y[i] - ym - slope * (t[i] - tm);
                ss += r * r;
            }
            *stderr_out = std::sqrt(ss / static_cast<double>(n - 2) / stt);
        }
    }
    return slope;
}

LinearFit fit_line(const std::vector<double>& t, const std::vector<double>& y) {
    LinearFit f;
    double naive = 0.0;
    f.slope = ols_slope(t.data(), y.data(), t.size(), &naive);
    // interface positions are strongly autocorrelated, so the plain OLS
    // standard error is too optimistic; a batch-means estimate over 8
    // disjoint blocks captures the slow wander. Keep the larger of the two.
    double block = 0.0;
    const std::size_t blocks = 8;
    if (t.size() >= 4 * blocks) {
        const std::size_t len = t.size() / blocks;
        double mean = 0.0, m2 = 0.0;
        for (std::size_t b = 0; b < blocks; ++b) {
            const double s = ols_slope(t.data() + b * len, y.data() + b * len, len, nullptr);
            mean += s;
            m2 += s * s;
        }
        mean /= static_cast<double>(blocks);
        const double var = std::max(m2 / static_cast<double>(blocks) - mean * mean, 0.0);
        block = std::sqrt(var / static_cast<double>(blocks));
    }
    f.stderr_slope = std::max(naive, block);
    return f;
}

}  // namespace

std::vector<double> BinProfile::rho_total() const {
    std::vector<double> t(rho0.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = rho0[i] + rho1[i];
    return t;
}

BinProfile field_profiles(const ParticleSystem& sys, int bins, double kernel_eps,
                          bool with_temperature) {
    if (bins < 2) throw ParameterError("md_riemann: need at least 2 bins");
    BinProfile p;
    p.z_lo = sys.box.lo[kNormalAxis];
    p.dz = sys.box.length(kNormalAxis) / bins;
    p.bin_volume = sys.box.length(0) * sys.box.length(1) * p.dz;
    p.rho0.assign(bins, 0.0);
    p.rho1.assign(bins, 0.0);
    p.m0.assign(bins, 0.0);
    p.m1.assign(bins, 0.0);
    p.temperature.assign(bins, kNan);

    std::vector<int> bin_of(sys.size());
    for (std::size_t i = 0; i < sys.size(); ++i) {
        const int b = std::clamp(static_cast<int>((sys.pos[i][kNormalAxis] - p.z_lo) / p.dz), 0,
                                 bins - 1);
        bin_of[i] = b;
        const double m = sys.mass_of(i);
        auto& rho = sys.species[i] == 0 ? p.rho0 : p.rho1;
        auto& mom = sys.species[i] == 0 ? p.m0 : p.m1;
        rho[b] += m;
        mom[b] += m * sys.vel[i][kNormalAxis];
    }
    for (int b = 0; b < bins; ++b) {
        p.rho0[b] /= p.bin_volume;
        p.rho1[b] /= p.bin_volume;
        p.m0[b] /= p.bin_volume;
        p.m1[b] /= p.bin_volume;
    }

    if (with_temperature) {
        for (int b = 0; b < bins; ++b) {
            const double zc = p.z_lo + (b + 0.5) * p.dz;
            // kernel-averaged barycentric velocity at the bin center
            double wsum = 0.0;
            Vec3 vbar{0.0, 0.0, 0.0};
            for (std::size_t i = 0; i < sys.size(); ++i) {
                const double dzp = sys.pos[i][kNormalAxis] - zc;
                const double w = std::exp(-0.5 * dzp * dzp / (kernel_eps * kernel_eps));
                wsum += w;
                vbar = vbar + w * sys.vel[i];
            }
            if (wsum <= 0.0) continue;
            vbar = (1.0 / wsum) * vbar;
            double acc = 0.0;
            std::size_t count = 0;
            for (std::size_t i = 0; i < sys.size(); ++i) {
                if (bin_of[i] != b) continue;
                const Vec3 pec = sys.vel[i] - vbar;
                acc += sys.mass_of(i) * md::dot(pec, pec);
                ++count;
            }
            if (count > 0) p.temperature[b] = acc / (3.0 * static_cast<double>(count));
        }
    }
    return p;
}

double detect_crossing(const std::vector<double>& rho_total, double z_lo, double dz) {
    const int n = static_cast<int>(rho_total.size());
    if (n < 8) throw ParameterError("md_riemann: profile too short for detection");
    const std::vector<double> sm = gaussian_smooth(rho_total, 2.0);

    const int w = std::max(3, n * 15 / 100);
    auto window_mean = [&](int begin, int end) {
        double s = 0.0;
        for (int i = begin; i < end; ++i) s += sm[i];
        return s / (end - begin);
    };
    const double plat_lo = window_mean(1, 1 + w);
    const double plat_hi = window_mean(n - 1 - w, n - 1);
    const double mid = 0.5 * (plat_lo + plat_hi);
    const bool liquid_low = plat_lo > plat_hi;

    auto center = [&](int i) { return z_lo + (i + 0.5) * dz; };
    if (liquid_low) {
        for (int i = 0; i + 1 < n; ++i) {
            if (sm[i] >= mid && sm[i + 1] < mid) {
                const double t = (sm[i] - mid) / (sm[i] - sm[i + 1]);
                return center(i) + t * dz;
            }
        }
    } else {
        for (int i = n - 2; i >= 0; --i) {
            if (sm[i + 1] >= mid && sm[i] < mid) {
                const double t = (sm[i + 1] - mid) / (sm[i + 1] - sm[i]);
                return center(i + 1) - t * dz;
            }
        }
    }
    throw InterfaceLostError("md_riemann: no density midpoint crossing found");
}

DetectResult detect_interface(const std::vector<std::vector<double>>& rho_profiles, double z_lo,
                              double dz, double dtau) {
    if (rho_profiles.size() < 2) {
        throw ParameterError("md_riemann: interface detection needs >= 2 profiles");
    }
    DetectResult r;
    std::vector<double> t;
    for (std::size_t k = 0; k < rho_profiles.size(); ++k) {
        r.position.push_back(detect_crossing(rho_profiles[k], z_lo, dz));
        t.push_back(static_cast<double>(k) * dtau);
    }
    const LinearFit fit = fit_line(t, r.position);
    r.speed = fit.slope;
    r.speed_stderr = fit.stderr_slope;
    return r;
}

SlabStates sample_interface_states(const ParticleSystem& sys, double gamma,
                                   const SamplingConfig& cfg, double sigma_max) {
    const double off = cfg.slab_offset_sigma * sigma_max;
    const double width = cfg.slab_width_sigma * sigma_max;
    const double area = sys.box.length(0) * sys.box.length(1);
    const double vol = area * width;

    const double liq_lo = gamma - off - width;
    const double liq_hi = gamma - off;
    const double vap_lo = gamma + off;
    const double vap_hi = gamma + off + width;

    SlabStates s;
    std::array<double, 2> vsum_l{0.0, 0.0}, vsum_v{0.0, 0.0};
    std::array<std::size_t, 2> n_l{0, 0}, n_v{0, 0};
    for (std::size_t i = 0; i < sys.size(); ++i) {
        const double z = sys.pos[i][kNormalAxis];
        const int a = sys.species[i];
        if (z >= liq_lo && z < liq_hi) {
            s.rho_liq[a] += sys.mass_of(i);
            vsum_l[a] += sys.vel[i][kNormalAxis];
            ++n_l[a];
        } else if (z >= vap_lo && z < vap_hi) {
            s.rho_vap[a] += sys.mass_of(i);
            vsum_v[a] += sys.vel[i][kNormalAxis];
            ++n_v[a];
        }
    }
    for (int a = 0; a < 2; ++a) {
        s.rho_liq[a] /= vol;
        s.rho_vap[a] /= vol;
        s.v_liq_defined[a] = n_l[a] > 0;
        s.v_vap_defined[a] = n_v[a] > 0;
        s.v_liq[a] = n_l[a] > 0 ? vsum_l[a] / static_cast<double>(n_l[a]) : kNan;
        s.v_vap[a] = n_v[a] > 0 ? vsum_v[a] / static_cast<double>(n_v[a]) : kNan;
    }
    return s;
}

namespace {

struct TraceRow {
    double tau;
    double gamma;
    SlabStates slab;
    bool in_window;
};

void dump_diagnostics(const std::string& path, const std::vector<TraceRow>& trace,
                      const InterfaceSolution& sol) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw ParseError("md_riemann: cannot open diagnostics file " + path);
    std::fprintf(f, "# md-riemann trace; units: tau [reduced time], gamma [A], "
                    "rho [u/A^3], v [reduced velocity]; in_window marks the averaging span\n");
    std::fprintf(f, "# tau gamma in_window rho0_liq rho1_liq v0_liq v1_liq rho0_vap rho1_vap "
                    "v0_vap v1_vap\n");
    for (const auto& r : trace) {
        std::fprintf(f, "%.17g %.17g %d %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n",
                     r.tau, r.gamma, r.in_window ? 1 : 0, r.slab.rho_liq[0], r.slab.rho_liq[1],
                     r.slab.v_liq[0], r.slab.v_liq[1], r.slab.rho_vap[0], r.slab.rho_vap[1],
                     r.slab.v_vap[0], r.slab.v_vap[1]);
    }
    std::fprintf(f, "# final: units SI (kg/m^3, kg/(m^2 s), m/s)\n");
    std::fprintf(f, "# final star_liq %.17g %.17g %.17g %.17g\n", sol.star_liq.rho0,
                 sol.star_liq.rho1, sol.star_liq.m0, sol.star_liq.m1);
    std::fprintf(f, "# final star_vap %.17g %.17g %.17g %.17g\n", sol.star_vap.rho0,
                 sol.star_vap.rho1, sol.star_vap.m0, sol.star_vap.m1);
    std::fprintf(f, "# final speed %.17g stderr %.17g degenerate %d poor_sampling %d\n",
                 sol.speed, sol.speed_stderr, sol.degenerate ? 1 : 0, sol.poor_sampling ? 1 : 0);
    std::fprintf(f, "# final mass_transfer[u] %.17g %.17g\n", sol.mass_transfer[0],
                 sol.mass_transfer[1]);
    std::fclose(f);
}

}  // namespace

InterfaceSolution solve_md_riemann(const frame::RotatedState& u_liq,
                                   const frame::RotatedState& u_vap,
                                   const MdRiemannParams& params, std::uint64_t seed) {
    if (u_liq.rho0 < 0.0 || u_liq.rho1 < 0.0 || u_vap.rho0 < 0.0 || u_vap.rho1 < 0.0) {
        throw ParameterError("md_riemann: negative input density");
    }
    const md::LjTable table =
        md::combine_lj(params.species0, params.species1, params.eta, params.xi, params.r_cutoff);
    const std::array<double, 2> masses = {params.species0.mass, params.species1.mass};
    double sigma_min = table.sigma[0][0], sigma_max = table.sigma[0][0];
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            sigma_min = std::min(sigma_min, table.sigma[a][b]);
            sigma_max = std::max(sigma_max, table.sigma[a][b]);
        }

    const md::TwoPhaseGeometry geom = md::make_two_phase_geometry(
        u_liq, u_vap, masses, params.n_particles, params.aspect, params.liquid_fraction);
    ParticleSystem sys = md::initialize_two_phase_box(u_liq, u_vap, geom, masses, params.T,
                                                      split_seed(seed, 0), sigma_min);
    md::compute_accelerations(sys, table);

    // Pre-relax each bulk phase behind a virtual wall at the interface so
    // the lattice's structural energy drains without eroding the Riemann
    // data, then thermalize the united box briefly.
    const int n_therm = static_cast<int>(std::lround(params.therm_fraction * params.n_end));
    if (n_therm > 0) {
        auto relax_side = [&](double z_lo, double z_hi) {
            ParticleSystem part;
            part.species_mass = sys.species_mass;
            part.box = sys.box;
            part.box.lo[md::kNormalAxis] = z_lo;
            part.box.hi[md::kNormalAxis] = z_hi;
            part.box.boundary[md::kNormalAxis] = md::BoundaryKind::Reflective;
            std::vector<std::size_t> ids;
            for (std::size_t i = 0; i < sys.size(); ++i) {
                const double z = sys.pos[i][md::kNormalAxis];
                if (z >= z_lo && z < z_hi) {
                    ids.push_back(i);
                    part.pos.push_back(sys.pos[i]);
                    part.vel.push_back(sys.vel[i]);
                    part.species.push_back(sys.species[i]);
                }
            }
            if (part.size() == 0) return;
            md::compute_accelerations(part, table);
            // defuse lattice hot spots at a reduced step before full-step
            // thermalization
            const int warmup = std::max(50, n_therm / 5);
            md::thermalize(part, params.T, warmup, 0.2 * params.dtau, table);
            md::thermalize(part, params.T, n_therm, params.dtau, table);
            for (std::size_t k = 0; k < ids.size(); ++k) {
                sys.pos[ids[k]] = part.pos[k];
                sys.vel[ids[k]] = part.vel[k];
            }
        };
        // a small standoff keeps the wall-adsorbed layers of the two relax
        // boxes from overlapping when the phases are united
        const double standoff = 0.75 * sigma_min;
        relax_side(sys.box.lo[md::kNormalAxis], geom.interface_z());
        relax_side(geom.interface_z() + standoff, sys.box.hi[md::kNormalAxis]);
        md::compute_accelerations(sys, table);
        md::thermalize(sys, params.T, std::max(20, n_therm / 10), 0.2 * params.dtau, table,
                       geom.interface_z());
        md::thermalize(sys, params.T, std::max(20, n_therm / 10), params.dtau, table,
                       geom.interface_z());
    }

    const int n_end = params.n_end;
    const int window_begin = std::max(1, static_cast<int>(std::ceil(
                                             (1.0 - params.sampling.t_smpl_ratio) * n_end)));
    std::vector<TraceRow> trace;
    trace.reserve(n_end);

    auto snapshot_on_error = [&](const char* stage) {
        if (!params.diagnostics_path.empty()) {
            try {
                md::dump_snapshot(sys, params.diagnostics_path + ".snapshot");
            } catch (...) {
            }
        }
        (void)stage;
    };

    double gamma_ref = 0.0;
    std::array<double, 2> mass_beyond_start{0.0, 0.0};
    auto species_mass_beyond = [&](double z) {
        std::array<double, 2> m{0.0, 0.0};
        for (std::size_t i = 0; i < sys.size(); ++i) {
            if (sys.pos[i][md::kNormalAxis] > z) m[sys.species[i]] += sys.mass_of(i);
        }
        return m;
    };

    try {
        for (int n = 1; n <= n_end; ++n) {
            md::velocity_verlet_step(sys, params.dtau, table);
            if (params.thermostat_production) {
                md::rescale_velocities(sys, params.T, geom.interface_z());
            }
            const BinProfile prof = field_profiles(sys, params.sampling.bins,
                                                   params.sampling.kernel_eps_sigma * sigma_max,
                                                   /*with_temperature=*/false);
            const double gamma = detect_crossing(prof.rho_total(), prof.z_lo, prof.dz);
            if (n == 1) mass_beyond_start = species_mass_beyond(gamma);
            gamma_ref = gamma;
            TraceRow row;
            row.tau = n * params.dtau;
            row.gamma = gamma;
            row.slab = sample_interface_states(sys, gamma, params.sampling, sigma_max);
            row.in_window = n >= window_begin;
            trace.push_back(row);
            if (params.snapshot_every > 0 && n % params.snapshot_every == 0 &&
                !params.diagnostics_path.empty()) {
                md::dump_snapshot(sys, params.diagnostics_path + ".step" + std::to_string(n));
            }
        }
    } catch (const Error&) {
        snapshot_on_error("production");
        throw;
    }

    // regression slope of the interface position over the sampling window
    std::vector<double> t, y;
    for (const auto& r : trace) {
        if (!r.in_window) continue;
        t.push_back(r.tau);
        y.push_back(r.gamma);
    }
    const LinearFit fit = fit_line(t, y);

    InterfaceSolution sol;
    std::array<double, 2> rho_l{0.0, 0.0}, rho_v{0.0, 0.0}, v_l{0.0, 0.0}, v_v{0.0, 0.0};
    std::array<std::size_t, 2> nv_l{0, 0}, nv_v{0, 0};
    std::size_t n_window = 0;
    for (const auto& r : trace) {
        if (!r.in_window) continue;
        ++n_window;
        for (int a = 0; a < 2; ++a) {
            rho_l[a] += r.slab.rho_liq[a];
            rho_v[a] += r.slab.rho_vap[a];
            if (r.slab.v_liq_defined[a]) {
                v_l[a] += r.slab.v_liq[a];
                ++nv_l[a];
            }
            if (r.slab.v_vap_defined[a]) {
                v_v[a] += r.slab.v_vap[a];
                ++nv_v[a];
            }
        }
    }
    const auto to_si_rho = [](double r) { return units::to_si(r, QuantityKind::Density); };
    const auto to_si_v = [](double v) { return units::to_si(v, QuantityKind::Velocity); };
    std::array<double, 2> vl_si{0.0, 0.0}, vv_si{0.0, 0.0};
    for (int a = 0; a < 2; ++a) {
        rho_l[a] /= static_cast<double>(n_window);
        rho_v[a] /= static_cast<double>(n_window);
        if (nv_l[a] > 0) {
            vl_si[a] = to_si_v(v_l[a] / static_cast<double>(nv_l[a]));
        } else if ((a == 0 ? u_liq.rho0 : u_liq.rho1) > 0.0) {
            sol.poor_sampling = true;
        }
        if (nv_v[a] > 0) {
            vv_si[a] = to_si_v(v_v[a] / static_cast<double>(nv_v[a]));
        } else if ((a == 0 ? u_vap.rho0 : u_vap.rho1) > 0.0) {
            sol.poor_sampling = true;
        }
    }
    sol.star_liq.rho0 = to_si_rho(rho_l[0]);
    sol.star_liq.rho1 = to_si_rho(rho_l[1]);
    sol.star_liq.m0 = sol.star_liq.rho0 * vl_si[0];
    sol.star_liq.m1 = sol.star_liq.rho1 * vl_si[1];
    sol.star_vap.rho0 = to_si_rho(rho_v[0]);
    sol.star_vap.rho1 = to_si_rho(rho_v[1]);
    sol.star_vap.m0 = sol.star_vap.rho0 * vv_si[0];
    sol.star_vap.m1 = sol.star_vap.rho1 * vv_si[1];
    sol.speed = to_si_v(fit.slope);
    sol.speed_stderr = to_si_v(fit.stderr_slope);
    const auto mass_beyond_end = species_mass_beyond(gamma_ref);
    sol.mass_transfer = {mass_beyond_end[0] - mass_beyond_start[0],
                         mass_beyond_end[1] - mass_beyond_start[1]};

    if (params.eos != nullptr) {
        const bool liq_ok =
            params.eos->classify_phase(sol.star_liq.rho0, sol.star_liq.rho1) == eos::Phase::Liquid;
        const bool vap_ok =
            params.eos->classify_phase(sol.star_vap.rho0, sol.star_vap.rho1) == eos::Phase::Vapor;
        sol.degenerate = !(liq_ok && vap_ok);
    }

    if (!params.diagnostics_path.empty()) dump_diagnostics(params.diagnostics_path, trace, sol);
    return sol;
}

frame::MicroOutput md_micro_solver(const frame::MicroInput& in, const MdRiemannParams& params,
                                   std::uint64_t seed) {
    frame::RotatedState liq, vap;
    liq.rho0 = in.rho0_liq;
    liq.rho1 = in.rho1_liq;
    const auto [v0l, v1l] = frame::species_velocities(in.rho0_liq, in.rho1_liq, 0.0, in.vrel_liq);
    liq.m0 = liq.rho0 * v0l;
    liq.m1 = liq.rho1 * v1l;
    vap.rho0 = in.rho0_vap;
    vap.rho1 = in.rho1_vap;
    const auto [v0v, v1v] =
        frame::species_velocities(in.rho0_vap, in.rho1_vap, in.v_vap, in.vrel_vap);
    vap.m0 = vap.rho0 * v0v;
    vap.m1 = vap.rho1 * v1v;

    const InterfaceSolution sol = solve_md_riemann(liq, vap, params, seed);
    frame::MicroOutput out;
    out.rho0_liq = sol.star_liq.rho0;
    out.rho1_liq = sol.star_liq.rho1;
    out.m0_liq = sol.star_liq.m0;
    out.m1_liq = sol.star_liq.m1;
    out.rho0_vap = sol.star_vap.rho0;
    out.rho1_vap = sol.star_vap.rho1;
    out.m0_vap = sol.star_vap.m0;
    out.m1_vap = sol.star_vap.m1;
    out.speed = sol.speed;
    return out;
}

}  // namespace hmm::md_riemann
