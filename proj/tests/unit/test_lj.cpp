#include <doctest.h>

#include <cmath>

#include "hmm/errors.hpp"
#include "hmm/md/lj.hpp"

using namespace hmm::md;

TEST_CASE("argon-methane combination") {
    const LjTable t = combine_lj(argon(), methane(), kArgonMethaneEta, kArgonMethaneXi);
    // hand evaluation: 1.00141 * (3.3967 + 3.7275) / 2 and 0.964 * sqrt(117.05 * 148.99)
    CHECK(t.sigma[0][1] == doctest::Approx(3.5671225610).epsilon(1e-10));
    CHECK(t.epsilon[0][1] == doctest::Approx(127.3037810995).epsilon(1e-10));
    CHECK(t.sigma[0][1] == t.sigma[1][0]);
    CHECK(t.epsilon[0][1] == t.epsilon[1][0]);
    CHECK(t.sigma[0][0] == 3.3967);
    CHECK(t.epsilon[1][1] == 148.99);
}

TEST_CASE("identical species with unit scalings degenerate to themselves") {
    const LjSpecies s{2.0, 5.0, 1.0};
    const LjTable t = combine_lj(s, s, 1.0, 1.0);
    CHECK(t.sigma[0][1] == 2.0);
    CHECK(t.epsilon[0][1] == 5.0);
}

TEST_CASE("combination is symmetric under species swap") {
    const LjTable a = combine_lj(argon(), methane(), kArgonMethaneEta, kArgonMethaneXi);
    const LjTable b = combine_lj(methane(), argon(), kArgonMethaneEta, kArgonMethaneXi);
    CHECK(a.sigma[0][1] == b.sigma[0][1]);
    CHECK(a.epsilon[0][1] == b.epsilon[0][1]);
}

TEST_CASE("non-positive parameters are rejected") {
    CHECK_THROWS_AS(combine_lj({0.0, 1.0, 1.0}, argon(), 1.0, 1.0), hmm::ParameterError);
    CHECK_THROWS_AS(combine_lj(argon(), methane(), -1.0, 1.0), hmm::ParameterError);
    CHECK_THROWS_AS(combine_lj(argon(), methane(), 1.0, 1.0, 0.5), hmm::ParameterError);
}

TEST_CASE("pair interaction zero crossing, minimum, cutoff") {
    const LjTable t = combine_lj(argon(), methane(), kArgonMethaneEta, kArgonMethaneXi);
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const double sigma = t.sigma[a][b];
            const double eps = t.epsilon[a][b];

            CHECK(pair_interaction(sigma, a, b, t).potential == doctest::Approx(0.0).epsilon(1e-12));

            const double rmin = std::pow(2.0, 1.0 / 6.0) * sigma;
            const auto at_min = pair_interaction(rmin, a, b, t);
            CHECK(at_min.potential == doctest::Approx(-eps).epsilon(1e-12));
            CHECK(at_min.force_mag == doctest::Approx(0.0).epsilon(1e-12));

            const auto at_cut = pair_interaction(sigma * t.r_cutoff, a, b, t);
            CHECK(at_cut.potential == 0.0);
            CHECK(at_cut.force_mag == 0.0);
            CHECK(pair_interaction(sigma * t.r_cutoff + 1.0, a, b, t).potential == 0.0);
        }
    }
}

TEST_CASE("zero distance raises") {
    const LjTable t = combine_lj(argon(), methane(), 1.0, 1.0);
    CHECK_THROWS_AS(pair_interaction(0.0, 0, 0, t), hmm::SingularDistanceError);
}
