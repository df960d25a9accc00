#include "hmm/md/lj.hpp"

#include <algorithm>
#include <cmath>

#include "hmm/errors.hpp"

namespace hmm::md {

double LjTable::max_cutoff() const {
    double m = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) m = std::max(m, cutoff_radius(a, b));
    return m;
}

LjTable combine_lj(const LjSpecies& s0, const LjSpecies& s1, double eta, double xi,
                   double r_cutoff) {
    if (!(s0.sigma > 0.0) || !(s0.epsilon > 0.0) || !(s1.sigma > 0.0) || !(s1.epsilon > 0.0)) {
        throw ParameterError("combine_lj: species parameters must be positive");
    }
    if (!(eta > 0.0) || !(xi > 0.0)) {
        throw ParameterError("combine_lj: combination scalings must be positive");
    }
    if (!(r_cutoff > 1.0)) {
        throw ParameterError("combine_lj: cutoff multiplier must exceed 1");
    }
    LjTable t;
    t.r_cutoff = r_cutoff;
    t.sigma[0][0] = s0.sigma;
    t.sigma[1][1] = s1.sigma;
    t.sigma[0][1] = t.sigma[1][0] = eta * 0.5 * (s0.sigma + s1.sigma);
    t.epsilon[0][0] = s0.epsilon;
    t.epsilon[1][1] = s1.epsilon;
    t.epsilon[0][1] = t.epsilon[1][0] = xi * std::sqrt(s0.epsilon * s1.epsilon);
    return t;
}

PairInteraction pair_interaction(double r, int a, int b, const LjTable& table) {
    if (!(r > 0.0)) throw SingularDistanceError("pair_interaction: r must be positive");
    if (r >= table.cutoff_radius(a, b)) return {0.0, 0.0};
    const double sr = table.sigma[a][b] / r;
    const double sr2 = sr * sr;
    const double sr6 = sr2 * sr2 * sr2;
    const double sr12 = sr6 * sr6;
    const double eps = table.epsilon[a][b];
    const double phi = 4.0 * eps * (sr12 - sr6);
    const double force = 24.0 * eps * (2.0 * sr12 - sr6) / r;
    return {phi, force};
}

}  // namespace hmm::md
