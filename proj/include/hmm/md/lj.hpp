#pragma once

#include <array>

namespace hmm::md {

/// Single-species Lennard-Jones parameters in reduced units:
/// sigma [A], epsilon [K] (as eps/kB), mass [u].
struct LjSpecies {
    double sigma;
    double epsilon;
    double mass;
};

/// Pairwise Lennard-Jones parameters plus the dimensionless cutoff
/// multiplier; the cutoff radius of pair ab is sigma_ab * r_cutoff.
struct LjTable {
    std::array<std::array<double, 2>, 2> sigma;
    std::array<std::array<double, 2>, 2> epsilon;
    double r_cutoff = 2.5;

    double cutoff_radius(int a, int b) const { return sigma[a][b] * r_cutoff; }
    double max_cutoff() const;
};

/// Lorentz-Berthelot combination with scaling numbers eta, xi:
/// sigma01 = eta (sigma0+sigma1)/2, eps01 = xi sqrt(eps0 eps1).
LjTable combine_lj(const LjSpecies& s0, const LjSpecies& s1, double eta, double xi,
                   double r_cutoff = 2.5);

struct PairInteraction {
    double potential;   // [K]
    double force_mag;   // -dphi/dr [K/A]
};

/// Truncated LJ pair: zero at and beyond sigma_ab * r_cutoff.
PairInteraction pair_interaction(double r, int a, int b, const LjTable& table);

/// Table 3 defaults.
inline LjSpecies argon() { return {3.3967, 117.05, 39.948}; }
inline LjSpecies methane() { return {3.7275, 148.99, 16.043}; }
constexpr double kArgonMethaneEta = 1.00141;
constexpr double kArgonMethaneXi = 0.96400;

}  // namespace hmm::md
