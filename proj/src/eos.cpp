#include "hmm/eos.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "hmm/errors.hpp"

namespace hmm::eos {

namespace {

constexpr double kPackingLimit = 0.999;  // covolume fraction treated as saturated
constexpr double kSoundFloor = 1e-8;     // m^2/s^2 floor for the wave-speed bound

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

void EosParams::validate() const {
    if (!(M0 > 0.0) || !(M1 > 0.0)) throw ParameterError("eos: molar masses must be positive");
    if (!(b0 > 0.0) || !(b1 > 0.0)) throw ParameterError("eos: covolumes must be positive");
    if (a00 < 0.0 || a01 < 0.0 || a11 < 0.0) throw ParameterError("eos: attractions must be >= 0");
    if (!(T > 0.0)) throw ParameterError("eos: temperature must be positive");
}

VdwMixtureEos::VdwMixtureEos(const EosParams& params, std::size_t grid) : params_(params) {
    params_.validate();
    build_envelope(grid);
}

double VdwMixtureEos::covolume_fraction(double c0, double c1) const {
    return params_.b0 * c0 + params_.b1 * c1;
}

double VdwMixtureEos::helmholtz(double rho0, double rho1) const {
    const double c0 = rho0 / params_.M0;
    const double c1 = rho1 / params_.M1;
    const double c = c0 + c1;
    const double b = covolume_fraction(c0, c1);
    if (b >= kPackingLimit) {
        throw SingularDensityError("eos: covolume saturation at rho=(" + std::to_string(rho0) +
                                   ", " + std::to_string(rho1) + ")");
    }
    const double RT = kGasConstant * params_.T;
    const double ideal = RT * (xlogx(c0) + xlogx(c1) - c);
    const double excl = -c * RT * std::log(1.0 - b);
    const double attr = -(params_.a00 * c0 * c0 + 2.0 * params_.a01 * c0 * c1 + params_.a11 * c1 * c1);
    return ideal + excl + attr;
}

std::array<double, 2> VdwMixtureEos::chemical_potential(double rho0, double rho1) const {
    const double c0 = rho0 / params_.M0;
    const double c1 = rho1 / params_.M1;
    const double c = c0 + c1;
    const double b = covolume_fraction(c0, c1);
    if (b >= kPackingLimit) {
        throw SingularDensityError("eos: covolume saturation at rho=(" + std::to_string(rho0) +
                                   ", " + std::to_string(rho1) + ")");
    }
    const double RT = kGasConstant * params_.T;
    const double omb = 1.0 - b;
    const double lg = std::log(omb);
    // d f / d c_a, then per unit mass
    const double mu0m = RT * (std::log(c0) - lg + c * params_.b0 / omb) -
                        2.0 * (params_.a00 * c0 + params_.a01 * c1);
    const double mu1m = RT * (std::log(c1) - lg + c * params_.b1 / omb) -
                        2.0 * (params_.a01 * c0 + params_.a11 * c1);
    return {mu0m / params_.M0, mu1m / params_.M1};
}

double VdwMixtureEos::pressure(double rho0, double rho1) const {
    const double c0 = rho0 / params_.M0;
    const double c1 = rho1 / params_.M1;
    const double c = c0 + c1;
    const double b = covolume_fraction(c0, c1);
    if (b >= kPackingLimit) {
        throw SingularDensityError("eos: covolume saturation at rho=(" + std::to_string(rho0) +
                                   ", " + std::to_string(rho1) + ")");
    }
    // closed form of rho0 mu0 + rho1 mu1 - f for this free energy
    const double attr = params_.a00 * c0 * c0 + 2.0 * params_.a01 * c0 * c1 + params_.a11 * c1 * c1;
    return c * kGasConstant * params_.T / (1.0 - b) - attr;
}

std::array<double, 4> VdwMixtureEos::hessian(double rho0, double rho1) const {
    const double c0 = rho0 / params_.M0;
    const double c1 = rho1 / params_.M1;
    const double c = c0 + c1;
    const double b = covolume_fraction(c0, c1);
    if (b >= kPackingLimit) {
        throw SingularDensityError("eos: covolume saturation in hessian");
    }
    const double RT = kGasConstant * params_.T;
    const double omb = 1.0 - b;
    const std::array<double, 2> bb = {params_.b0, params_.b1};
    const std::array<double, 2> cc = {c0, c1};
    const std::array<double, 2> mm = {params_.M0, params_.M1};
    const std::array<std::array<double, 2>, 2> aa = {{{params_.a00, params_.a01},
                                                      {params_.a01, params_.a11}}};
    std::array<double, 4> h{};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            double v = RT * ((bb[i] + bb[j]) / omb + c * bb[i] * bb[j] / (omb * omb)) -
                       2.0 * aa[i][j];
            if (i == j) {
                // diagonal ideal term RT/c_a; +inf for an absent component is
                // the correct limit and keeps the PD test on the submatrix
                v += cc[i] > 0.0 ? RT / cc[i] : std::numeric_limits<double>::infinity();
            }
            h[2 * i + j] = v / (mm[i] * mm[j]);
        }
    }
    return h;
}

bool VdwMixtureEos::hessian_positive_definite(double rho0, double rho1) const {
    const auto h = hessian(rho0, rho1);
    if (std::isinf(h[0]) && std::isinf(h[3])) return true;  // vacuum limit
    if (std::isinf(h[0])) return h[3] > 0.0;  // component 0 absent
    if (std::isinf(h[3])) return h[0] > 0.0;
    return h[0] > 0.0 && h[0] * h[3] - h[1] * h[2] > 0.0;
}

void VdwMixtureEos::build_envelope(std::size_t grid) {
    env_x_.resize(grid);
    env_clo_.assign(grid, 0.0);
    env_chi_.assign(grid, 0.0);
    for (std::size_t k = 0; k < grid; ++k) {
        const double x0 = static_cast<double>(k) / static_cast<double>(grid - 1);
        env_x_[k] = x0;
        const double bmix = params_.b0 * x0 + params_.b1 * (1.0 - x0);
        const double cmax = 0.995 * kPackingLimit / bmix;  // stay inside the saturation guard
        auto pd_at = [&](double c) {
            return hessian_positive_definite(c * x0 * params_.M0, c * (1.0 - x0) * params_.M1);
        };
        // coarse scan for the spinodal interval, then bisect both edges
        double lo = 0.0, hi = 0.0;
        const std::size_t n = grid;
        double prev_c = cmax / static_cast<double>(n);
        bool prev_ok = pd_at(prev_c);
        double first_fail = -1.0, last_fail = -1.0, after_last = -1.0, before_first = -1.0;
        for (std::size_t i = 2; i <= n; ++i) {
            const double ci = cmax * static_cast<double>(i) / static_cast<double>(n);
            const bool ok = pd_at(ci);
            if (prev_ok && !ok && first_fail < 0.0) {
                before_first = prev_c;
                first_fail = ci;
            }
            if (!ok) last_fail = ci;
            if (!prev_ok && ok && last_fail > 0.0) after_last = ci;
            prev_ok = ok;
            prev_c = ci;
        }
        if (first_fail > 0.0) {
            double a = before_first, b = first_fail;
            for (int it = 0; it < 60; ++it) {
                const double m = 0.5 * (a + b);
                (pd_at(m) ? a : b) = m;
            }
            lo = 0.5 * (a + b);
            a = last_fail;
            b = after_last > 0.0 ? after_last : cmax;
            for (int it = 0; it < 60; ++it) {
                const double m = 0.5 * (a + b);
                (pd_at(m) ? b : a) = m;
            }
            hi = 0.5 * (a + b);
        }
        env_clo_[k] = lo;
        env_chi_[k] = hi;
    }
}

std::array<double, 2> VdwMixtureEos::spinodal_interval(double x0) const {
    const double x = std::clamp(x0, 0.0, 1.0);
    const double pos = x * static_cast<double>(env_x_.size() - 1);
    const std::size_t k = std::min(static_cast<std::size_t>(pos), env_x_.size() - 2);
    const double t = pos - static_cast<double>(k);
    const double lo = (1.0 - t) * env_clo_[k] + t * env_clo_[k + 1];
    const double hi = (1.0 - t) * env_chi_[k] + t * env_chi_[k + 1];
    return {lo, hi};
}

Phase VdwMixtureEos::classify_phase(double rho0, double rho1) const {
    const double c0 = std::max(rho0, 0.0) / params_.M0;
    const double c1 = std::max(rho1, 0.0) / params_.M1;
    const double c = c0 + c1;
    if (c <= 0.0) return Phase::Vapor;  // vacuum limit
    if (!hessian_positive_definite(rho0, rho1)) return Phase::Spinodal;
    const auto [clo, chi] = spinodal_interval(c0 / c);
    if (chi <= 0.0) {
        // no spinodal at this composition; compare against the densest edge
        const double ref = *std::max_element(env_chi_.begin(), env_chi_.end());
        return c > ref ? Phase::Liquid : Phase::Vapor;
    }
    return c > 0.5 * (clo + chi) ? Phase::Liquid : Phase::Vapor;
}

double VdwMixtureEos::max_wave_speed(double rho0, double rho1, double v0n, double v1n) const {
    if (classify_phase(rho0, rho1) == Phase::Spinodal) {
        throw PhaseError("eos: wave-speed bound requested at a spinodal state");
    }
    const auto h = hessian(rho0, rho1);
    const std::array<double, 2> rho = {rho0, rho1};
    const std::array<double, 2> vn = {v0n, v1n};
    // Gershgorin row bound on the symmetrized acoustic block
    // D^(1/2) H D^(1/2): c_a^2 = rho_a h_aa + sqrt(rho_a rho_b) |h_ab|.
    // Plain rho_a h_aa underestimates whenever the cross term is nonzero.
    const double cross = std::sqrt(rho0 * rho1) * std::abs(h[1]);
    double speed = 0.0;
    for (int a = 0; a < 2; ++a) {
        const double haa = h[3 * a];
        const double diag = std::isinf(haa) ? 0.0 : rho[a] * haa;  // rho_a -> 0 limit is RT/M_a
        const double limit_term =
            std::isinf(haa) ? kGasConstant * params_.T / (a == 0 ? params_.M0 : params_.M1) : 0.0;
        const double ca2 = std::max(diag + limit_term + cross, kSoundFloor);
        speed = std::max(speed, std::abs(vn[a]) + std::sqrt(ca2));
    }
    return speed;
}

EosParams load_eos_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("eos: cannot open parameter file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("eos: malformed parameter file " + path + ": " + e.what());
    }
    EosParams p;
    p.M0 = j.at("M0").get<double>();
    p.M1 = j.at("M1").get<double>();
    p.a00 = j.at("a00").get<double>();
    p.a01 = j.at("a01").get<double>();
    p.a11 = j.at("a11").get<double>();
    p.b0 = j.at("b0").get<double>();
    p.b1 = j.at("b1").get<double>();
    p.T = j.at("T").get<double>();
    p.validate();
    return p;
}

void save_eos_params(const EosParams& params, const std::string& path) {
    nlohmann::json j = {
        {"version", 1},     {"M0", params.M0},   {"M1", params.M1}, {"a00", params.a00},
        {"a01", params.a01}, {"a11", params.a11}, {"b0", params.b0}, {"b1", params.b1},
        {"T", params.T},
    };
    std::ofstream out(path);
    if (!out) throw ParseError("eos: cannot write parameter file " + path);
    out << j.dump(2) << "\n";
}

}  // namespace hmm::eos
