#include "hmm/md/init.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hmm/errors.hpp"
#include "hmm/rng.hpp"
#include "hmm/units.hpp"

namespace hmm::md {

namespace {

using units::QuantityKind;

struct CuboidTarget {
    double z_lo, z_hi;
    std::array<double, 2> rho_red;   // [u/A^3]
    std::array<double, 2> drift_red; // normal-axis drift [reduced]
};

double number_density(const CuboidTarget& c, const std::array<double, 2>& mass_u) {
    return c.rho_red[0] / mass_u[0] + c.rho_red[1] / mass_u[1];
}

CuboidTarget make_target(const frame::RotatedState& u, double z_lo, double z_hi) {
    CuboidTarget t;
    t.z_lo = z_lo;
    t.z_hi = z_hi;
    t.rho_red = {units::to_reduced(u.rho0, QuantityKind::Density),
                 units::to_reduced(u.rho1, QuantityKind::Density)};
    const double v0 = u.rho0 > 0.0 ? u.m0 / u.rho0 : 0.0;
    const double v1 = u.rho1 > 0.0 ? u.m1 / u.rho1 : 0.0;
    t.drift_red = {units::to_reduced(v0, QuantityKind::Velocity),
                   units::to_reduced(v1, QuantityKind::Velocity)};
    return t;
}

void fill_cuboid(ParticleSystem& sys, const CuboidTarget& target, double T, Rng& rng,
                 double sigma_min) {
    const double lx = sys.box.length(0);
    const double ly = sys.box.length(1);
    const double lz = target.z_hi - target.z_lo;
    const double vol = lx * ly * lz;

    std::array<std::size_t, 2> count{};
    std::size_t n_total = 0;
    for (int a = 0; a < 2; ++a) {
        count[a] = static_cast<std::size_t>(
            std::llround(target.rho_red[a] * vol / sys.species_mass[a]));
        n_total += count[a];
    }
    if (n_total == 0) return;

    const double spacing = std::cbrt(vol / static_cast<double>(n_total));
    if (spacing < 0.8 * sigma_min) {
        throw InfeasibleDensityError("md: requested density exceeds lattice packing (spacing " +
                                     std::to_string(spacing) + " A)");
    }

    // simple cubic lattice sized to hold all particles
    const double scale = std::cbrt(static_cast<double>(n_total) / vol);
    int nx = std::max(1, static_cast<int>(std::ceil(lx * scale)));
    int ny = std::max(1, static_cast<int>(std::ceil(ly * scale)));
    int nz = std::max(1, static_cast<int>(std::ceil(
                             static_cast<double>(n_total) / (static_cast<double>(nx) * ny))));
    std::vector<std::size_t> sites(static_cast<std::size_t>(nx) * ny * nz);
    std::iota(sites.begin(), sites.end(), 0);
    rng.shuffle(sites);

    // species labels interleaved by shuffling
    std::vector<std::uint8_t> labels;
    labels.reserve(n_total);
    labels.insert(labels.end(), count[0], 0);
    labels.insert(labels.end(), count[1], 1);
    rng.shuffle(labels);

    const double hx = lx / nx, hy = ly / ny, hz = lz / nz;
    for (std::size_t p = 0; p < n_total; ++p) {
        const std::size_t s = sites[p];
        const int ix = static_cast<int>(s % nx);
        const int iy = static_cast<int>((s / nx) % ny);
        const int iz = static_cast<int>(s / (static_cast<std::size_t>(nx) * ny));
        const std::uint8_t a = labels[p];
        const double jit = 0.05 * sigma_min;
        Vec3 x{sys.box.lo[0] + (ix + 0.5) * hx + rng.uniform(-jit, jit),
               sys.box.lo[1] + (iy + 0.5) * hy + rng.uniform(-jit, jit),
               target.z_lo + (iz + 0.5) * hz + rng.uniform(-jit, jit)};
        x[2] = std::clamp(x[2], target.z_lo + 1e-9, target.z_hi - 1e-9);
        const double vth = std::sqrt(T / sys.species_mass[a]);
        Vec3 v{rng.normal(0.0, vth), rng.normal(0.0, vth),
               target.drift_red[a] + rng.normal(0.0, vth)};
        sys.pos.push_back(x);
        sys.vel.push_back(v);
        sys.species.push_back(a);
    }

    // shift each species' sample mean onto the exact requested drift
    const std::size_t begin = sys.size() - n_total;
    for (int a = 0; a < 2; ++a) {
        if (count[a] == 0) continue;
        Vec3 mean{0.0, 0.0, 0.0};
        for (std::size_t i = begin; i < sys.size(); ++i) {
            if (sys.species[i] == a) mean = mean + sys.vel[i];
        }
        mean = (1.0 / static_cast<double>(count[a])) * mean;
        const Vec3 shift = Vec3{0.0, 0.0, target.drift_red[a]} - mean;
        for (std::size_t i = begin; i < sys.size(); ++i) {
            if (sys.species[i] == a) sys.vel[i] = sys.vel[i] + shift;
        }
    }
}

}  // namespace

TwoPhaseGeometry make_two_phase_geometry(const frame::RotatedState& u_liq,
                                         const frame::RotatedState& u_vap,
                                         const std::array<double, 2>& species_mass_u,
                                         std::size_t n_target, double aspect,
                                         double liquid_fraction) {
    if (n_target == 0) throw ParameterError("md: particle budget must be positive");
    if (!(liquid_fraction > 0.0) || !(liquid_fraction < 1.0)) {
        throw ParameterError("md: liquid volume fraction must lie in (0, 1)");
    }
    const CuboidTarget liq = make_target(u_liq, 0.0, 1.0);
    const CuboidTarget vap = make_target(u_vap, 0.0, 1.0);
    const double n_liq = number_density(liq, species_mass_u);
    const double n_vap = number_density(vap, species_mass_u);
    const double mix = liquid_fraction * n_liq + (1.0 - liquid_fraction) * n_vap;
    if (!(mix > 0.0)) throw InfeasibleDensityError("md: zero number density on both sides");
    TwoPhaseGeometry g;
    g.l_perp = std::cbrt(static_cast<double>(n_target) / (aspect * mix));
    const double lz = aspect * g.l_perp;
    g.l_liquid = liquid_fraction * lz;
    g.l_vapor = lz - g.l_liquid;
    return g;
}

ParticleSystem initialize_two_phase_box(const frame::RotatedState& u_liq,
                                        const frame::RotatedState& u_vap,
                                        const TwoPhaseGeometry& geometry,
                                        const std::array<double, 2>& species_mass_u, double T,
                                        std::uint64_t seed, double sigma_min) {
    ParticleSystem sys;
    sys.species_mass = species_mass_u;
    sys.box.lo = {0.0, 0.0, 0.0};
    sys.box.hi = {geometry.l_perp, geometry.l_perp, geometry.l_total()};
    sys.box.boundary = {BoundaryKind::Periodic, BoundaryKind::Periodic,
                        geometry.normal_boundary};

    Rng rng(seed);
    fill_cuboid(sys, make_target(u_liq, 0.0, geometry.interface_z()), T, rng, sigma_min);
    fill_cuboid(sys, make_target(u_vap, geometry.interface_z(), geometry.l_total()), T, rng,
                sigma_min);
    sys.acc.assign(sys.size(), Vec3{0.0, 0.0, 0.0});
    return sys;
}

}  // namespace hmm::md
