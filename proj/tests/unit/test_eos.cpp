#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "hmm/eos.hpp"
#include "hmm/errors.hpp"
#include "hmm/rng.hpp"

using namespace hmm;
using namespace hmm::eos;

namespace {

const VdwMixtureEos& default_eos() {
    static VdwMixtureEos model{EosParams{}};
    return model;
}

/// Draws a random state that classifies as Liquid or Vapor.
std::array<double, 2> random_admissible(Rng& rng, const VdwMixtureEos& model) {
    for (;;) {
        const double rho0 = rng.uniform(0.5, 1600.0);
        const double rho1 = rng.uniform(0.5, 500.0);
        try {
            if (model.classify_phase(rho0, rho1) != Phase::Spinodal) return {rho0, rho1};
        } catch (const SingularDensityError&) {
        }
    }
}

}  // namespace

TEST_CASE("chemical potential matches finite differences of the free energy") {
    const auto& model = default_eos();
    Rng rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        const auto [rho0, rho1] = random_admissible(rng, model);
        const auto mu = model.chemical_potential(rho0, rho1);
        const double h0 = 1e-6 * rho0;
        const double h1 = 1e-6 * rho1;
        const double fd0 =
            (model.helmholtz(rho0 + h0, rho1) - model.helmholtz(rho0 - h0, rho1)) / (2.0 * h0);
        const double fd1 =
            (model.helmholtz(rho0, rho1 + h1) - model.helmholtz(rho0, rho1 - h1)) / (2.0 * h1);
        CHECK(mu[0] == doctest::Approx(fd0).epsilon(1e-6));
        CHECK(mu[1] == doctest::Approx(fd1).epsilon(1e-6));
    }
}

TEST_CASE("ideal-gas limit of the chemical potential slope") {
    // with vanishing attraction and covolume, d mu_a / d ln rho_a -> R T / M_a
    EosParams p;
    p.a00 = p.a01 = p.a11 = 0.0;
    p.b0 = p.b1 = 1e-12;
    const VdwMixtureEos dilute(p, 64);
    const double rho0 = 1.0, rho1 = 2.0;
    const double h = 1e-6;
    const auto lo = dilute.chemical_potential(rho0 * (1.0 - h), rho1);
    const auto hi = dilute.chemical_potential(rho0 * (1.0 + h), rho1);
    const double slope = (hi[0] - lo[0]) / std::log((1.0 + h) / (1.0 - h));
    CHECK(slope == doctest::Approx(kGasConstant * p.T / p.M0).epsilon(1e-6));
}

TEST_CASE("exchange symmetry for identical components") {
    EosParams p;
    p.M1 = p.M0;
    p.a11 = p.a00;
    p.a01 = p.a00;
    p.b1 = p.b0;
    const VdwMixtureEos sym(p, 64);
    const auto mu = sym.chemical_potential(300.0, 300.0);
    CHECK(mu[0] == doctest::Approx(mu[1]).epsilon(1e-14));
}

TEST_CASE("pressure is Gibbs-Duhem consistent with the potentials") {
    const auto& model = default_eos();
    Rng rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        const double rho0 = rng.uniform(0.1, 1500.0);
        const double rho1 = rng.uniform(0.1, 450.0);
        const auto& p = model.params();
        if (rho0 / p.M0 * p.b0 + rho1 / p.M1 * p.b1 > 0.9) continue;  // below saturation
        const auto mu = model.chemical_potential(rho0, rho1);
        const double lhs = model.pressure(rho0, rho1);
        const double rhs = rho0 * mu[0] + rho1 * mu[1] - model.helmholtz(rho0, rho1);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("vacuum limit of the pressure") {
    const auto& model = default_eos();
    CHECK(std::abs(model.pressure(1e-8, 1e-8)) < 1.0);
    CHECK(std::abs(model.pressure(1e-12, 0.0)) < 1e-3);
}

TEST_CASE("single-component reduction matches the hand-evaluated van der Waals form") {
    // p = c R T / (1 - b c) - a c^2 at rho0 = 800 kg/m^3, T = 110 K
    const auto& model = default_eos();
    CHECK(model.pressure(800.0, 0.0) == doctest::Approx(6.306052868729e+06).epsilon(1e-9));
}

TEST_CASE("covolume saturation raises a singular-density error") {
    const auto& model = default_eos();
    CHECK_THROWS_AS(model.chemical_potential(2500.0, 0.0), SingularDensityError);
    CHECK_THROWS_AS(model.pressure(0.0, 800.0), SingularDensityError);
}

TEST_CASE("phase classification at the corner-table states") {
    const auto& model = default_eos();
    CHECK(model.classify_phase(1.0, 0.0) == Phase::Vapor);
    CHECK(model.classify_phase(0.0, 1.0) == Phase::Vapor);
    CHECK(model.classify_phase(162.996622, 0.0) == Phase::Vapor);
    CHECK(model.classify_phase(0.0, 30.960615) == Phase::Vapor);
    CHECK(model.classify_phase(1024.214739, 0.0) == Phase::Liquid);
    CHECK(model.classify_phase(1616.252845, 0.0) == Phase::Liquid);
    CHECK(model.classify_phase(0.0, 343.403446) == Phase::Liquid);
    CHECK(model.classify_phase(0.0, 509.380478) == Phase::Liquid);
    // the two 1D example data sets
    CHECK(model.classify_phase(1200.0, 100.0) == Phase::Liquid);
    CHECK(model.classify_phase(10.0, 20.0) == Phase::Vapor);
    CHECK(model.classify_phase(440.0, 280.0) == Phase::Liquid);
    CHECK(model.classify_phase(20.0, 2.0) == Phase::Vapor);
}

TEST_CASE("a state between the pure-argon corners is spinodal where the Hessian fails") {
    const auto& model = default_eos();
    // scan the segment between the vapor corner (162.996622, 0) and the
    // liquid corner (1024.214739, 0) for a negative Hessian determinant
    bool found_spinodal = false;
    for (double t = 0.05; t < 1.0; t += 0.05) {
        const double rho0 = 162.996622 + t * (1024.214739 - 162.996622);
        if (!model.hessian_positive_definite(rho0, 0.0)) {
            CHECK(model.classify_phase(rho0, 0.0) == Phase::Spinodal);
            found_spinodal = true;
        }
    }
    CHECK(found_spinodal);
}

TEST_CASE("classification ignores velocities by construction") {
    // classify_phase takes densities only; this documents the invariant
    const auto& model = default_eos();
    CHECK(model.classify_phase(1200.0, 100.0) == model.classify_phase(1200.0, 100.0));
}

TEST_CASE("wave-speed bound: zero velocities give the largest sound speed") {
    const auto& model = default_eos();
    const double c = model.max_wave_speed(1200.0, 100.0, 0.0, 0.0);
    CHECK(c > 0.0);
    // aligned Galilean shift adds exactly |w|
    const double w = 123.0;
    CHECK(model.max_wave_speed(1200.0, 100.0, w, w) == doctest::Approx(c + w).epsilon(1e-12));
}

TEST_CASE("wave-speed bound raises in the spinodal region") {
    const auto& model = default_eos();
    CHECK_THROWS_AS(model.max_wave_speed(700.0, 0.0, 0.0, 0.0), PhaseError);
}

TEST_CASE("wave-speed bound dominates the quasilinear spectral radius") {
    // oracle: finite-difference Jacobian of the flux (m0, m1, m0 v0, m1 v1)
    // plus the non-conservative block rho_a d mu_a / d rho_b, eigenvalues
    // via Eigen on the 4x4
    const auto& model = default_eos();
    Rng rng(41);
    int checked = 0;
    while (checked < 20) {
        const auto [rho0, rho1] = random_admissible(rng, model);
        const double v0 = rng.uniform(-300.0, 300.0);
        const double v1 = rng.uniform(-300.0, 300.0);

        auto flux = [&](const std::array<double, 4>& u) {
            const double w0 = u[0] > 0.0 ? u[2] / u[0] : 0.0;
            const double w1 = u[1] > 0.0 ? u[3] / u[1] : 0.0;
            return std::array<double, 4>{u[2], u[3], u[2] * w0, u[3] * w1};
        };
        const std::array<double, 4> u = {rho0, rho1, rho0 * v0, rho1 * v1};
        Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
        for (int col = 0; col < 4; ++col) {
            std::array<double, 4> up = u, um = u;
            const double h = 1e-6 * (std::abs(u[col]) + 1.0);
            up[col] += h;
            um[col] -= h;
            const auto fp = flux(up);
            const auto fm = flux(um);
            for (int row = 0; row < 4; ++row) a(row, col) = (fp[row] - fm[row]) / (2.0 * h);
        }
        // non-conservative momentum block by finite differences of mu
        for (int col = 0; col < 2; ++col) {
            const double h = 1e-6 * u[col];
            const auto mup = model.chemical_potential(rho0 + (col == 0 ? h : 0.0),
                                                      rho1 + (col == 1 ? h : 0.0));
            const auto mum = model.chemical_potential(rho0 - (col == 0 ? h : 0.0),
                                                      rho1 - (col == 1 ? h : 0.0));
            a(2, col) += rho0 * (mup[0] - mum[0]) / (2.0 * h);
            a(3, col) += rho1 * (mup[1] - mum[1]) / (2.0 * h);
        }
        const Eigen::EigenSolver<Eigen::Matrix4d> es(a);
        double radius = 0.0;
        for (int k = 0; k < 4; ++k) radius = std::max(radius, std::abs(es.eigenvalues()[k]));
        const double bound = model.max_wave_speed(rho0, rho1, v0, v1);
        CHECK(bound >= radius * (1.0 - 1e-9));
        ++checked;
    }
}

TEST_CASE("parameter file round-trip") {
    EosParams p;
    p.T = 115.0;
    p.a01 = 0.0606;
    const std::string path = "/tmp/hmm_eos_params_test.json";
    save_eos_params(p, path);
    const EosParams q = load_eos_params(path);
    CHECK(q.T == p.T);
    CHECK(q.a01 == p.a01);
    CHECK(q.M0 == p.M0);
}
