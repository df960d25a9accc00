#pragma once

#include <array>
#include <vector>

namespace hmm::fv {

struct StencilPoint {
    std::array<double, 3> position{};
    double value = 0.0;
};

/// Linear-reconstruction gradient of a cell value from same-phase
/// neighbors: solves the normal equations A^T A g = A^T b with rows
/// (center - neighbor) and entries (value_center - value_neighbor).
/// Exact on affine fields. Throws DegenerateStencilError when A^T A is
/// rank deficient (collinear/coplanar stencil or too few neighbors).
std::array<double, 3> lls_gradient(double value_center, const std::array<double, 3>& center,
                                   const std::vector<StencilPoint>& neighbors, int dim);

}  // namespace hmm::fv
