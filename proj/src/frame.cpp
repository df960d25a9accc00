#include "hmm/frame.hpp"

#include <cmath>

#include "hmm/errors.hpp"

namespace hmm::frame {

namespace {

double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

void check_normal(const std::array<double, 3>& n, int dim) {
    double norm2 = 0.0;
    for (int k = 0; k < 3; ++k) {
        if (k >= dim && n[k] != 0.0) {
            throw NormalizationError("frame: normal has components beyond the state dimension");
        }
        norm2 += n[k] * n[k];
    }
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12) {
        throw NormalizationError("frame: normal vector is not unit length");
    }
}

}  // namespace

std::pair<RotatedState, TangentialRemainder> rotate_to_normal(const FullState& state,
                                                              const std::array<double, 3>& n) {
    check_normal(n, state.dim);
    RotatedState u;
    u.rho0 = state.rho0;
    u.rho1 = state.rho1;
    u.m0 = dot3(state.m0, n);
    u.m1 = dot3(state.m1, n);
    TangentialRemainder perp;
    perp.dim = state.dim;
    for (int k = 0; k < 3; ++k) {
        perp.m0[k] = state.m0[k] - u.m0 * n[k];
        perp.m1[k] = state.m1[k] - u.m1 * n[k];
    }
    return {u, perp};
}

FullState back_project(const RotatedState& u, const std::array<double, 3>& n,
                       const TangentialRemainder& perp) {
    check_normal(n, perp.dim);
    FullState s;
    s.dim = perp.dim;
    s.rho0 = u.rho0;
    s.rho1 = u.rho1;
    for (int k = 0; k < 3; ++k) {
        s.m0[k] = u.m0 * n[k] + perp.m0[k];
        s.m1[k] = u.m1 * n[k] + perp.m1[k];
    }
    return s;
}

std::pair<double, double> species_velocities(double rho0, double rho1, double vbar, double vrel) {
    const double rho = rho0 + rho1;
    if (rho <= 0.0) return {0.0, 0.0};
    return {vbar + rho1 / rho * vrel, vbar - rho0 / rho * vrel};
}

MicroOutput identity_micro(const MicroInput& in) {
    MicroOutput out;
    out.rho0_liq = in.rho0_liq;
    out.rho1_liq = in.rho1_liq;
    out.rho0_vap = in.rho0_vap;
    out.rho1_vap = in.rho1_vap;
    const auto [v0l, v1l] = species_velocities(in.rho0_liq, in.rho1_liq, 0.0, in.vrel_liq);
    const auto [v0v, v1v] = species_velocities(in.rho0_vap, in.rho1_vap, in.v_vap, in.vrel_vap);
    out.m0_liq = in.rho0_liq * v0l;
    out.m1_liq = in.rho1_liq * v1l;
    out.m0_vap = in.rho0_vap * v0v;
    out.m1_vap = in.rho1_vap * v1v;
    out.speed = 0.0;
    return out;
}

InterfaceResult interface_solve(const FullState& u_minus, const FullState& u_plus,
                                const std::array<double, 3>& n, const MicroSolver& micro) {
    const auto [um, perp_m] = rotate_to_normal(u_minus, n);
    const auto [up, perp_p] = rotate_to_normal(u_plus, n);

    auto barycentric = [](const RotatedState& u) {
        const double rho = u.rho0 + u.rho1;
        return rho > 0.0 ? (u.m0 + u.m1) / rho : 0.0;
    };
    auto relative = [](const RotatedState& u) {
        const double v0 = u.rho0 > 0.0 ? u.m0 / u.rho0 : 0.0;
        const double v1 = u.rho1 > 0.0 ? u.m1 / u.rho1 : 0.0;
        return v0 - v1;
    };

    const double vref = barycentric(um);  // liquid barycentric normal velocity

    MicroInput in;
    in.rho0_liq = um.rho0;
    in.rho1_liq = um.rho1;
    in.vrel_liq = relative(um);
    in.rho0_vap = up.rho0;
    in.rho1_vap = up.rho1;
    in.v_vap = barycentric(up) - vref;
    in.vrel_vap = relative(up);

    const MicroOutput out = micro(in);

    RotatedState star_m{out.rho0_liq, out.rho1_liq, out.m0_liq + out.rho0_liq * vref,
                        out.m1_liq + out.rho1_liq * vref};
    RotatedState star_p{out.rho0_vap, out.rho1_vap, out.m0_vap + out.rho0_vap * vref,
                        out.m1_vap + out.rho1_vap * vref};

    InterfaceResult res;
    res.star_minus = back_project(star_m, n, perp_m);
    res.star_plus = back_project(star_p, n, perp_p);
    res.speed = out.speed + vref;
    return res;
}

}  // namespace hmm::frame
