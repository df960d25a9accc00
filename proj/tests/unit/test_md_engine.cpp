#include <doctest.h>

#include <cmath>

#include "hmm/errors.hpp"
#include "hmm/md/forces.hpp"
#include "hmm/md/init.hpp"
#include "hmm/md/integrator.hpp"
#include "hmm/md/lj.hpp"
#include "hmm/md/system.hpp"
#include "hmm/rng.hpp"
#include "hmm/units.hpp"

using namespace hmm;
using namespace hmm::md;

namespace {

LjTable ar_me_table() {
    return combine_lj(argon(), methane(), kArgonMethaneEta, kArgonMethaneXi);
}

/// Independent O(N^2) force oracle with minimum image; no linked cells.
std::vector<Vec3> brute_force_accelerations(const ParticleSystem& sys, const LjTable& t) {
    std::vector<Vec3> acc(sys.size(), Vec3{0.0, 0.0, 0.0});
    for (std::size_t i = 0; i < sys.size(); ++i) {
        for (std::size_t j = 0; j < sys.size(); ++j) {
            if (i == j) continue;
            Vec3 d = sys.pos[i] - sys.pos[j];
            for (int k = 0; k < 3; ++k) {
                if (sys.box.boundary[k] == BoundaryKind::Periodic) {
                    const double L = sys.box.length(k);
                    d[k] -= L * std::round(d[k] / L);
                }
            }
            const double r = std::sqrt(dot(d, d));
            const int a = sys.species[i], b = sys.species[j];
            if (r >= t.cutoff_radius(a, b)) continue;
            const double sr6 = std::pow(t.sigma[a][b] / r, 6.0);
            const double f = 24.0 * t.epsilon[a][b] * (2.0 * sr6 * sr6 - sr6) / r;
            for (int k = 0; k < 3; ++k) acc[i][k] += f * d[k] / r / sys.species_mass[a];
        }
    }
    return acc;
}

double brute_potential(const ParticleSystem& sys, const LjTable& t) {
    double e = 0.0;
    for (std::size_t i = 0; i < sys.size(); ++i) {
        for (std::size_t j = i + 1; j < sys.size(); ++j) {
            Vec3 d = sys.pos[i] - sys.pos[j];
            for (int k = 0; k < 3; ++k) {
                if (sys.box.boundary[k] == BoundaryKind::Periodic) {
                    const double L = sys.box.length(k);
                    d[k] -= L * std::round(d[k] / L);
                }
            }
            const double r = std::sqrt(dot(d, d));
            e += pair_interaction(r, sys.species[i], sys.species[j], t).potential;
        }
    }
    return e;
}

ParticleSystem random_gas(std::size_t n, double box_len, std::uint64_t seed,
                          double min_sep = 3.2) {
    ParticleSystem sys;
    sys.species_mass = {argon().mass, methane().mass};
    sys.box.lo = {0.0, 0.0, 0.0};
    sys.box.hi = {box_len, box_len, box_len};
    sys.box.boundary = {BoundaryKind::Periodic, BoundaryKind::Periodic, BoundaryKind::Periodic};
    Rng rng(seed);
    while (sys.size() < n) {
        Vec3 x{rng.uniform(0.0, box_len), rng.uniform(0.0, box_len), rng.uniform(0.0, box_len)};
        bool ok = true;
        for (const auto& p : sys.pos) {
            Vec3 d = x - p;
            for (int k = 0; k < 3; ++k) d[k] -= box_len * std::round(d[k] / box_len);
            if (dot(d, d) < min_sep * min_sep) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        sys.pos.push_back(x);
        const std::uint8_t s = rng.uniform01() < 0.5 ? 0 : 1;
        sys.species.push_back(s);
        const double vth = std::sqrt(110.0 / sys.species_mass[s]);
        sys.vel.push_back({rng.normal(0.0, vth), rng.normal(0.0, vth), rng.normal(0.0, vth)});
    }
    sys.acc.assign(n, Vec3{0.0, 0.0, 0.0});
    return sys;
}

frame::RotatedState si_state(double rho0, double rho1, double v0 = 0.0, double v1 = 0.0) {
    return {rho0, rho1, rho0 * v0, rho1 * v1};
}

}  // namespace

TEST_CASE("two particles at the potential minimum feel no force") {
    const LjTable t = ar_me_table();
    ParticleSystem sys;
    sys.species_mass = {argon().mass, methane().mass};
    sys.box.hi = {60.0, 60.0, 60.0};
    sys.box.boundary = {BoundaryKind::Reflective, BoundaryKind::Reflective,
                        BoundaryKind::Reflective};
    const double rmin = std::pow(2.0, 1.0 / 6.0) * t.sigma[0][1];
    sys.pos = {{20.0, 20.0, 20.0}, {20.0 + rmin, 20.0, 20.0}};
    sys.vel = {{0, 0, 0}, {0, 0, 0}};
    sys.species = {0, 1};
    sys.acc.assign(2, Vec3{});
    compute_accelerations(sys, t);
    for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(sys.acc[0][k]) < 1e-12);
        CHECK(std::abs(sys.acc[1][k]) < 1e-12);
    }
}

TEST_CASE("Newton's third law: mass-weighted accelerations sum to zero") {
    const LjTable t = ar_me_table();
    ParticleSystem sys = random_gas(150, 40.0, 2);
    compute_accelerations(sys, t);
    Vec3 total{0.0, 0.0, 0.0};
    double scale = 0.0;
    for (std::size_t i = 0; i < sys.size(); ++i) {
        for (int k = 0; k < 3; ++k) {
            total[k] += sys.species_mass[sys.species[i]] * sys.acc[i][k];
            scale += std::abs(sys.species_mass[sys.species[i]] * sys.acc[i][k]);
        }
    }
    for (int k = 0; k < 3; ++k) CHECK(std::abs(total[k]) <= 1e-13 * (scale + 1.0));
}

TEST_CASE("linked cells match the brute-force oracle for 200 random particles") {
    const LjTable t = ar_me_table();
    ParticleSystem sys = random_gas(200, 42.0, 3);
    const auto oracle = brute_force_accelerations(sys, t);
    compute_accelerations(sys, t);
    double amax = 0.0;
    for (const auto& a : oracle)
        for (int k = 0; k < 3; ++k) amax = std::max(amax, std::abs(a[k]));
    for (std::size_t i = 0; i < sys.size(); ++i) {
        for (int k = 0; k < 3; ++k) {
            CHECK(std::abs(sys.acc[i][k] - oracle[i][k]) <= 1e-12 * std::max(amax, 1.0));
        }
    }
}

TEST_CASE("overlapping particles raise the blow-up error") {
    const LjTable t = ar_me_table();
    ParticleSystem sys;
    sys.species_mass = {argon().mass, methane().mass};
    sys.box.hi = {30.0, 30.0, 30.0};
    sys.pos = {{5.0, 5.0, 5.0}, {5.0 + 0.2 * t.sigma[0][0], 5.0, 5.0}};
    sys.vel.assign(2, Vec3{});
    sys.species = {0, 0};
    sys.acc.assign(2, Vec3{});
    CHECK_THROWS_AS(compute_accelerations(sys, t), BlowUpError);
}

TEST_CASE("free streaming when forces vanish") {
    const LjTable t = ar_me_table();
    ParticleSystem sys;
    sys.species_mass = {argon().mass, methane().mass};
    sys.box.hi = {100.0, 100.0, 100.0};
    sys.box.boundary = {BoundaryKind::Periodic, BoundaryKind::Periodic, BoundaryKind::Periodic};
    sys.pos = {{10.0, 10.0, 10.0}, {80.0, 80.0, 80.0}};  // far beyond cutoff
    sys.vel = {{1.0, -2.0, 0.5}, {0.0, 0.25, -1.0}};
    sys.species = {0, 1};
    sys.acc.assign(2, Vec3{});
    const double dtau = 0.01;
    velocity_verlet_step(sys, dtau, t);
    CHECK(sys.pos[0][0] == doctest::Approx(10.0 + dtau * 1.0).epsilon(1e-14));
    CHECK(sys.pos[0][1] == doctest::Approx(10.0 - dtau * 2.0).epsilon(1e-14));
    CHECK(sys.vel[0][0] == 1.0);
    CHECK(sys.vel[1][2] == -1.0);
}

TEST_CASE("Verlet time reversibility over 50 steps") {
    const LjTable t = ar_me_table();
    ParticleSystem sys = random_gas(64, 30.0, 7);
    compute_accelerations(sys, t);
    const ParticleSystem initial = sys;
    const double dtau = 5e-4;
    for (int n = 0; n < 50; ++n) velocity_verlet_step(sys, dtau, t);
    for (auto& v : sys.vel) v = -1.0 * v;
    compute_accelerations(sys, t);
    for (int n = 0; n < 50; ++n) velocity_verlet_step(sys, dtau, t);
    for (std::size_t i = 0; i < sys.size(); ++i) {
        for (int k = 0; k < 3; ++k) {
            CHECK(std::abs(sys.pos[i][k] - initial.pos[i][k]) <= 1e-10);
            CHECK(std::abs(sys.vel[i][k] + initial.vel[i][k]) <= 1e-10);
        }
    }
}

TEST_CASE("bound pair conserves energy over 500 steps") {
    const LjTable t = ar_me_table();
    ParticleSystem sys;
    sys.species_mass = {argon().mass, methane().mass};
    sys.box.hi = {40.0, 40.0, 40.0};
    sys.box.boundary = {BoundaryKind::Reflective, BoundaryKind::Reflective,
                        BoundaryKind::Reflective};
    const double rmin = std::pow(2.0, 1.0 / 6.0) * t.sigma[0][0];
    sys.pos = {{20.0, 20.0, 20.0}, {20.0 + 0.98 * rmin, 20.0, 20.0}};
    sys.vel = {{0.0, 0.3, 0.0}, {0.0, -0.3, 0.0}};
    sys.species = {0, 0};
    sys.acc.assign(2, Vec3{});
    compute_accelerations(sys, t);
    const double e0 = sys.kinetic_energy() + brute_potential(sys, t);
    for (int n = 0; n < 500; ++n) velocity_verlet_step(sys, 5e-4, t);
    const double e1 = sys.kinetic_energy() + brute_potential(sys, t);
    CHECK(std::abs(e1 - e0) <= 1e-4 * std::abs(e0));
}

TEST_CASE("total momentum conserved under periodic boundaries") {
    const LjTable t = ar_me_table();
    ParticleSystem sys = random_gas(216, 42.0, 11);
    compute_accelerations(sys, t);
    const Vec3 p0 = sys.total_momentum();
    double pscale = 0.0;
    for (std::size_t i = 0; i < sys.size(); ++i) {
        pscale += sys.mass_of(i) * std::sqrt(dot(sys.vel[i], sys.vel[i]));
    }
    for (int n = 0; n < 20; ++n) {
        velocity_verlet_step(sys, 5e-4, t);
        const Vec3 p = sys.total_momentum();
        for (int k = 0; k < 3; ++k) CHECK(std::abs(p[k] - p0[k]) <= 1e-10 * pscale);
    }
}

TEST_CASE("two-phase initialization hits the requested counts, drifts, temperature") {
    const LjTable t = ar_me_table();
    const std::array<double, 2> masses{argon().mass, methane().mass};
    const auto u_liq = si_state(1200.0, 100.0, 30.0, -20.0);
    const auto u_vap = si_state(10.0, 20.0, 55.0, 55.0);
    const auto geom = make_two_phase_geometry(u_liq, u_vap, masses, 3000);
    ParticleSystem sys = initialize_two_phase_box(u_liq, u_vap, geom, masses, 110.0, 9);

    const double area = geom.l_perp * geom.l_perp;
    const double vol_liq = area * geom.l_liquid;
    const double vol_vap = area * geom.l_vapor;
    using hmm::units::QuantityKind;
    std::array<std::array<std::size_t, 2>, 2> count{};  // [side][species]
    std::array<std::array<double, 2>, 2> vsum{};
    for (std::size_t i = 0; i < sys.size(); ++i) {
        const int side = sys.pos[i][kNormalAxis] < geom.interface_z() ? 0 : 1;
        count[side][sys.species[i]] += 1;
        vsum[side][sys.species[i]] += sys.vel[i][kNormalAxis];
    }
    // counts within 1 of floor(rho vol / m) per species and cuboid
    const double rho_red[2][2] = {
        {hmm::units::to_reduced(1200.0, QuantityKind::Density),
         hmm::units::to_reduced(100.0, QuantityKind::Density)},
        {hmm::units::to_reduced(10.0, QuantityKind::Density),
         hmm::units::to_reduced(20.0, QuantityKind::Density)}};
    const double vols[2] = {vol_liq, vol_vap};
    for (int side = 0; side < 2; ++side) {
        for (int a = 0; a < 2; ++a) {
            const double expect = std::floor(rho_red[side][a] * vols[side] / masses[a]);
            CHECK(std::abs(static_cast<double>(count[side][a]) - expect) <= 1.0);
        }
    }
    // species drifts match the requested velocities exactly (post-shift)
    const double expect_drift[2][2] = {
        {hmm::units::to_reduced(30.0, QuantityKind::Velocity),
         hmm::units::to_reduced(-20.0, QuantityKind::Velocity)},
        {hmm::units::to_reduced(55.0, QuantityKind::Velocity),
         hmm::units::to_reduced(55.0, QuantityKind::Velocity)}};
    for (int side = 0; side < 2; ++side) {
        for (int a = 0; a < 2; ++a) {
            const double mean = vsum[side][a] / static_cast<double>(count[side][a]);
            CHECK(mean == doctest::Approx(expect_drift[side][a]).epsilon(1e-12));
        }
    }
    // kinetic temperature of the fresh Maxwell-Boltzmann draw near target
    CHECK(kinetic_temperature(sys, geom.interface_z()) ==
          doctest::Approx(110.0).epsilon(0.05));
}

TEST_CASE("zero-drift initialization has zero cuboid momentum") {
    const std::array<double, 2> masses{argon().mass, methane().mass};
    const auto u_liq = si_state(1200.0, 100.0);
    const auto u_vap = si_state(10.0, 20.0);
    const auto geom = make_two_phase_geometry(u_liq, u_vap, masses, 2000);
    ParticleSystem sys = initialize_two_phase_box(u_liq, u_vap, geom, masses, 110.0, 4);
    Vec3 p[2] = {{0, 0, 0}, {0, 0, 0}};
    double scale = 0.0;
    for (std::size_t i = 0; i < sys.size(); ++i) {
        const int side = sys.pos[i][kNormalAxis] < geom.interface_z() ? 0 : 1;
        for (int k = 0; k < 3; ++k) p[side][k] += sys.mass_of(i) * sys.vel[i][k];
        scale += sys.mass_of(i);
    }
    for (int side = 0; side < 2; ++side) {
        for (int k = 0; k < 3; ++k) CHECK(std::abs(p[side][k]) <= 1e-10 * scale);
    }
}

TEST_CASE("infeasible density is rejected") {
    const std::array<double, 2> masses{argon().mass, methane().mass};
    const auto dense = si_state(3500.0, 0.0);
    const auto u_vap = si_state(10.0, 20.0);
    TwoPhaseGeometry geom;
    geom.l_perp = 30.0;
    geom.l_liquid = 30.0;
    geom.l_vapor = 60.0;
    CHECK_THROWS_AS(initialize_two_phase_box(dense, u_vap, geom, masses, 110.0, 1),
                    InfeasibleDensityError);
}

TEST_CASE("thermalize is the identity for zero steps and converges from 2T") {
    const LjTable t = ar_me_table();
    ParticleSystem sys = random_gas(216, 42.0, 13);
    compute_accelerations(sys, t);

    ParticleSystem copy = sys;
    thermalize(copy, 110.0, 0, 5e-4, t);
    CHECK(copy.pos[0][0] == sys.pos[0][0]);
    CHECK(copy.vel[10][1] == sys.vel[10][1]);

    // heat to ~2T, then pull back to T
    for (auto& v : sys.vel) v = std::sqrt(2.0) * v;
    thermalize(sys, 110.0, 200, 5e-4, t);
    CHECK(kinetic_temperature(sys) == doctest::Approx(110.0).epsilon(0.02));
}

TEST_CASE("rescaling preserves species drift velocities") {
    const LjTable t = ar_me_table();
    ParticleSystem sys = random_gas(216, 42.0, 19);
    for (std::size_t i = 0; i < sys.size(); ++i) sys.vel[i][0] += sys.species[i] == 0 ? 1.5 : -0.5;
    std::array<Vec3, 2> before{};
    std::array<double, 2> mass{};
    for (std::size_t i = 0; i < sys.size(); ++i) {
        const int a = sys.species[i];
        mass[a] += sys.mass_of(i);
        for (int k = 0; k < 3; ++k) before[a][k] += sys.mass_of(i) * sys.vel[i][k];
    }
    rescale_velocities(sys, 55.0);
    std::array<Vec3, 2> after{};
    for (std::size_t i = 0; i < sys.size(); ++i) {
        const int a = sys.species[i];
        for (int k = 0; k < 3; ++k) after[a][k] += sys.mass_of(i) * sys.vel[i][k];
    }
    for (int a = 0; a < 2; ++a) {
        for (int k = 0; k < 3; ++k) {
            CHECK(std::abs(after[a][k] - before[a][k]) / mass[a] <= 1e-12);
        }
    }
    CHECK(kinetic_temperature(sys) == doctest::Approx(55.0).epsilon(1e-10));
}
