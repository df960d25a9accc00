#include "hmm/md/system.hpp"

#include <cstdio>

#include "hmm/errors.hpp"

namespace hmm::md {

std::array<double, 2> ParticleSystem::species_total_mass() const {
    std::array<double, 2> m{0.0, 0.0};
    for (std::size_t i = 0; i < size(); ++i) m[species[i]] += species_mass[species[i]];
    return m;
}

Vec3 ParticleSystem::total_momentum() const {
    Vec3 p{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < size(); ++i) {
        const double m = mass_of(i);
        p[0] += m * vel[i][0];
        p[1] += m * vel[i][1];
        p[2] += m * vel[i][2];
    }
    return p;
}

double ParticleSystem::kinetic_energy() const {
    double e = 0.0;
    for (std::size_t i = 0; i < size(); ++i) e += 0.5 * mass_of(i) * dot(vel[i], vel[i]);
    return e;
}

void dump_snapshot(const ParticleSystem& sys, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw ParseError("md: cannot open snapshot file " + path);
    std::fprintf(f, "# id species x[A] y[A] z[A] vx[red] vy[red] vz[red]\n");
    for (std::size_t i = 0; i < sys.size(); ++i) {
        std::fprintf(f, "%zu %d %.17g %.17g %.17g %.17g %.17g %.17g\n", i, int(sys.species[i]),
                     sys.pos[i][0], sys.pos[i][1], sys.pos[i][2], sys.vel[i][0], sys.vel[i][1],
                     sys.vel[i][2]);
    }
    std::fclose(f);
}

}  // namespace hmm::md
