#include "hmm/fv/lls.hpp"

#include <cmath>

#include "hmm/errors.hpp"

namespace hmm::fv {

std::array<double, 3> lls_gradient(double value_center, const std::array<double, 3>& center,
                                   const std::vector<StencilPoint>& neighbors, int dim) {
    if (dim < 1 || dim > 3) throw ParameterError("lls_gradient: dim must be 1, 2 or 3");
    if (static_cast<int>(neighbors.size()) < dim) {
        throw DegenerateStencilError("lls_gradient: fewer neighbors than dimensions");
    }

    double ata[3][3] = {};
    double atb[3] = {};
    double row_scale = 0.0;
    for (const auto& nb : neighbors) {
        std::array<double, 3> d{};
        for (int k = 0; k < dim; ++k) {
            d[k] = center[k] - nb.position[k];
            row_scale = std::max(row_scale, std::abs(d[k]));
        }
        const double db = value_center - nb.value;
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) ata[i][j] += d[i] * d[j];
            atb[i] += d[i] * db;
        }
    }

    // Gaussian elimination with partial pivoting on the dim x dim system
    const double pivot_floor = 1e-13 * row_scale * row_scale * neighbors.size();
    int perm[3] = {0, 1, 2};
    for (int col = 0; col < dim; ++col) {
        int best = col;
        for (int r = col + 1; r < dim; ++r) {
            if (std::abs(ata[perm[r]][col]) > std::abs(ata[perm[best]][col])) best = r;
        }
        std::swap(perm[col], perm[best]);
        const double p = ata[perm[col]][col];
        if (std::abs(p) <= pivot_floor) {
            throw DegenerateStencilError("lls_gradient: rank-deficient stencil");
        }
        for (int r = col + 1; r < dim; ++r) {
            const double f = ata[perm[r]][col] / p;
            for (int c = col; c < dim; ++c) ata[perm[r]][c] -= f * ata[perm[col]][c];
            atb[perm[r]] -= f * atb[perm[col]];
        }
    }
    std::array<double, 3> g{};
    for (int row = dim - 1; row >= 0; --row) {
        double acc = atb[perm[row]];
        for (int c = row + 1; c < dim; ++c) acc -= ata[perm[row]][c] * g[c];
        g[row] = acc / ata[perm[row]][row];
    }
    return g;
}

}  // namespace hmm::fv
