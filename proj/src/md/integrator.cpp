#include "hmm/md/integrator.hpp"

#include <array>
#include <cmath>

#include "hmm/errors.hpp"
#include "hmm/md/forces.hpp"

namespace hmm::md {

namespace {

void apply_boundaries(ParticleSystem& sys, std::size_t i) {
    for (int k = 0; k < 3; ++k) {
        const double lo = sys.box.lo[k];
        const double hi = sys.box.hi[k];
        const double L = hi - lo;
        double& p = sys.pos[i][k];
        if (sys.box.boundary[k] == BoundaryKind::Periodic) {
            if (p < lo || p >= hi) {
                p -= L * std::floor((p - lo) / L);
                if (p >= hi) p = lo;  // guard against rounding onto the upper face
            }
        } else {
            // elastic wall; loop covers pathological multi-width overshoots
            int guard = 0;
            while ((p < lo || p > hi) && guard++ < 16) {
                if (p < lo) {
                    p = 2.0 * lo - p;
                    sys.vel[i][k] = -sys.vel[i][k];
                } else {
                    p = 2.0 * hi - p;
                    sys.vel[i][k] = -sys.vel[i][k];
                }
            }
            if (guard >= 16) throw BlowUpError("md: particle escaped the box");
        }
    }
}

/// Group id for drift bookkeeping: species, optionally split by side.
struct DriftGroups {
    std::optional<double> split_z;

    int group_of(const ParticleSystem& sys, std::size_t i) const {
        const int s = sys.species[i];
        if (!split_z) return s;
        return s + (sys.pos[i][kNormalAxis] < *split_z ? 0 : 2);
    }

    static constexpr int kMax = 4;
};

}  // namespace

double velocity_verlet_step(ParticleSystem& sys, double dtau, const LjTable& table) {
    if (!(dtau > 0.0)) throw ParameterError("md: time step must be positive");
    const std::size_t n = sys.size();
    const double half = 0.5 * dtau;
    for (std::size_t i = 0; i < n; ++i) {
        for (int k = 0; k < 3; ++k) {
            sys.pos[i][k] += dtau * sys.vel[i][k] + half * dtau * sys.acc[i][k];
        }
        apply_boundaries(sys, i);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (int k = 0; k < 3; ++k) sys.vel[i][k] += half * sys.acc[i][k];
    }
    const double pot = compute_accelerations(sys, table);
    for (std::size_t i = 0; i < n; ++i) {
        for (int k = 0; k < 3; ++k) sys.vel[i][k] += half * sys.acc[i][k];
    }
    return pot;
}

double kinetic_temperature(const ParticleSystem& sys, std::optional<double> split_z) {
    const DriftGroups groups{split_z};
    std::array<Vec3, DriftGroups::kMax> mom{};
    std::array<double, DriftGroups::kMax> mass{};
    for (std::size_t i = 0; i < sys.size(); ++i) {
        const int g = groups.group_of(sys, i);
        const double m = sys.mass_of(i);
        mass[g] += m;
        for (int k = 0; k < 3; ++k) mom[g][k] += m * sys.vel[i][k];
    }
    std::array<Vec3, DriftGroups::kMax> drift{};
    for (int g = 0; g < DriftGroups::kMax; ++g) {
        if (mass[g] > 0.0) drift[g] = (1.0 / mass[g]) * mom[g];
    }
    double twice_kin = 0.0;
    for (std::size_t i = 0; i < sys.size(); ++i) {
        const Vec3 pec = sys.vel[i] - drift[groups.group_of(sys, i)];
        twice_kin += sys.mass_of(i) * dot(pec, pec);
    }
    return sys.size() > 0 ? twice_kin / (3.0 * static_cast<double>(sys.size())) : 0.0;
}

void rescale_velocities(ParticleSystem& sys, double T, std::optional<double> split_z) {
    const double t_kin = kinetic_temperature(sys, split_z);
    if (t_kin <= 0.0) return;
    const double lambda = std::sqrt(T / t_kin);
    const DriftGroups groups{split_z};

    std::array<Vec3, DriftGroups::kMax> mom{};
    std::array<double, DriftGroups::kMax> mass{};
    for (std::size_t i = 0; i < sys.size(); ++i) {
        const int g = groups.group_of(sys, i);
        const double m = sys.mass_of(i);
        mass[g] += m;
        for (int k = 0; k < 3; ++k) mom[g][k] += m * sys.vel[i][k];
    }
    std::array<Vec3, DriftGroups::kMax> drift{};
    for (int g = 0; g < DriftGroups::kMax; ++g) {
        if (mass[g] > 0.0) drift[g] = (1.0 / mass[g]) * mom[g];
    }
    for (std::size_t i = 0; i < sys.size(); ++i) {
        const Vec3& d = drift[groups.group_of(sys, i)];
        for (int k = 0; k < 3; ++k) {
            sys.vel[i][k] = d[k] + lambda * (sys.vel[i][k] - d[k]);
        }
    }
}

void thermalize(ParticleSystem& sys, double T, int n_steps, double dtau, const LjTable& table,
                std::optional<double> split_z) {
    if (n_steps < 0) throw ParameterError("md: thermalization steps must be >= 0");
    for (int step = 0; step < n_steps; ++step) {
        velocity_verlet_step(sys, dtau, table);
        rescale_velocities(sys, T, split_z);
    }
}

}  // namespace hmm::md
