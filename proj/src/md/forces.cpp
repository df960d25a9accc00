#include "hmm/md/forces.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hmm/errors.hpp"

namespace hmm::md {

namespace {

struct PairAccum {
    const LjTable* table;
    double sigma_min2;   // (0.3 sigma_min)^2 overlap floor
    std::array<std::array<double, 2>, 2> rc2;
    double energy = 0.0;

    explicit PairAccum(const LjTable& t) : table(&t) {
        double smin = t.sigma[0][0];
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) smin = std::min(smin, t.sigma[a][b]);
        sigma_min2 = (0.3 * smin) * (0.3 * smin);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) rc2[a][b] = t.cutoff_radius(a, b) * t.cutoff_radius(a, b);
    }

    void operator()(ParticleSystem& sys, std::size_t i, std::size_t j, const Vec3& d, double r2) {
        const int a = sys.species[i];
        const int b = sys.species[j];
        if (r2 >= rc2[a][b]) return;
        if (r2 < sigma_min2) {
            throw BlowUpError("md: particle overlap below 0.3 sigma_min (pair " +
                              std::to_string(i) + ", " + std::to_string(j) + ")");
        }
        const double inv_r2 = 1.0 / r2;
        const double s2 = table->sigma[a][b] * table->sigma[a][b] * inv_r2;
        const double s6 = s2 * s2 * s2;
        const double s12 = s6 * s6;
        const double eps = table->epsilon[a][b];
        energy += 4.0 * eps * (s12 - s6);
        // F/r along d; d points from j to i, so this pushes i away from j
        const double f_over_r = 24.0 * eps * (2.0 * s12 - s6) * inv_r2;
        const double inv_mi = 1.0 / sys.species_mass[a];
        const double inv_mj = 1.0 / sys.species_mass[b];
        for (int k = 0; k < 3; ++k) {
            const double f = f_over_r * d[k];
            sys.acc[i][k] += f * inv_mi;
            sys.acc[j][k] -= f * inv_mj;
        }
    }
};

Vec3 minimum_image(const ParticleSystem& sys, const Vec3& xi, const Vec3& xj) {
    Vec3 d = xi - xj;
    for (int k = 0; k < 3; ++k) {
        if (sys.box.boundary[k] == BoundaryKind::Periodic) {
            const double L = sys.box.length(k);
            d[k] -= L * std::round(d[k] / L);
        }
    }
    return d;
}

double all_pairs(ParticleSystem& sys, const LjTable& table) {
    PairAccum accum(table);
    const std::size_t n = sys.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vec3 d = minimum_image(sys, sys.pos[i], sys.pos[j]);
            accum(sys, i, j, d, dot(d, d));
        }
    }
    return accum.energy;
}

}  // namespace

double compute_accelerations(ParticleSystem& sys, const LjTable& table) {
    sys.acc.assign(sys.size(), Vec3{0.0, 0.0, 0.0});
    const double rc = table.max_cutoff();

    int ncell[3];
    bool usable = sys.size() > 16;
    for (int k = 0; k < 3; ++k) {
        ncell[k] = std::max(1, static_cast<int>(std::floor(sys.box.length(k) / rc)));
        // periodic wrap double-counts pairs unless at least 3 cells span the axis
        if (sys.box.boundary[k] == BoundaryKind::Periodic && ncell[k] < 3) usable = false;
        if (sys.box.boundary[k] == BoundaryKind::Reflective && ncell[k] < 2) ncell[k] = 1;
    }
    if (!usable) return all_pairs(sys, table);

    const std::size_t n = sys.size();
    const std::size_t total_cells =
        static_cast<std::size_t>(ncell[0]) * ncell[1] * ncell[2];
    std::vector<int> head(total_cells, -1);
    std::vector<int> next(n, -1);

    auto cell_index = [&](const Vec3& p, int idx[3]) {
        for (int k = 0; k < 3; ++k) {
            const double rel = (p[k] - sys.box.lo[k]) / sys.box.length(k);
            idx[k] = std::clamp(static_cast<int>(rel * ncell[k]), 0, ncell[k] - 1);
        }
    };
    auto flat = [&](int ix, int iy, int iz) {
        return (static_cast<std::size_t>(iz) * ncell[1] + iy) * ncell[0] + ix;
    };

    for (std::size_t i = 0; i < n; ++i) {
        int idx[3];
        cell_index(sys.pos[i], idx);
        const std::size_t c = flat(idx[0], idx[1], idx[2]);
        next[i] = head[c];
        head[c] = static_cast<int>(i);
    }

    // half stencil: self cell plus 13 forward neighbors
    static constexpr int kOffsets[13][3] = {
        {1, 0, 0},  {-1, 1, 0}, {0, 1, 0},  {1, 1, 0},  {-1, -1, 1}, {0, -1, 1}, {1, -1, 1},
        {-1, 0, 1}, {0, 0, 1},  {1, 0, 1},  {-1, 1, 1}, {0, 1, 1},   {1, 1, 1},
    };

    PairAccum accum(table);
    for (int iz = 0; iz < ncell[2]; ++iz) {
        for (int iy = 0; iy < ncell[1]; ++iy) {
            for (int ix = 0; ix < ncell[0]; ++ix) {
                const std::size_t c = flat(ix, iy, iz);
                // pairs within the cell
                for (int i = head[c]; i >= 0; i = next[i]) {
                    for (int j = next[i]; j >= 0; j = next[j]) {
                        const Vec3 d = minimum_image(sys, sys.pos[i], sys.pos[j]);
                        accum(sys, i, j, d, dot(d, d));
                    }
                }
                // pairs with forward neighbor cells
                for (const auto& off : kOffsets) {
                    int jx = ix + off[0], jy = iy + off[1], jz = iz + off[2];
                    bool skip = false;
                    int wrap[3] = {jx, jy, jz};
                    for (int k = 0; k < 3; ++k) {
                        if (wrap[k] < 0 || wrap[k] >= ncell[k]) {
                            if (sys.box.boundary[k] == BoundaryKind::Periodic) {
                                wrap[k] = (wrap[k] + ncell[k]) % ncell[k];
                            } else {
                                skip = true;
                                break;
                            }
                        }
                    }
                    if (skip) continue;
                    const std::size_t cj = flat(wrap[0], wrap[1], wrap[2]);
                    for (int i = head[c]; i >= 0; i = next[i]) {
                        for (int j = head[cj]; j >= 0; j = next[j]) {
                            const Vec3 d = minimum_image(sys, sys.pos[i], sys.pos[j]);
                            accum(sys, i, j, d, dot(d, d));
                        }
                    }
                }
            }
        }
    }
    return accum.energy;
}

}  // namespace hmm::md
