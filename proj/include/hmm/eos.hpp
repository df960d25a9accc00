#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

namespace hmm::eos {

enum class Phase { Liquid, Vapor, Spinodal };

/// Two-component mixture parameters. Attractions a_ab in J*m^3/mol^2,
/// covolumes b_a in m^3/mol, molar masses in kg/mol.
struct EosParams {
    double M0 = 0.039948;   // argon
    double M1 = 0.016043;   // methane
    double a00 = 5.277716287875e-02;
    double a01 = 5.925827594118e-02;
    double a11 = 6.653527920000e-02;
    double b0 = 1.6645e-05;
    double b1 = 2.080e-05;
    double T = 110.0;       // K

    void validate() const;
};

constexpr double kGasConstant = 8.314;  // J/(mol K)

/// Isothermal two-component equation of state. Implementations must be
/// immutable after construction; all members are safe for concurrent reads.
class EosModel {
public:
    virtual ~EosModel() = default;

    /// Chemical potentials (J/kg) of both components at (rho0, rho1).
    virtual std::array<double, 2> chemical_potential(double rho0, double rho1) const = 0;

    /// Mixture pressure (Pa), Gibbs-Duhem consistent with the potentials.
    virtual double pressure(double rho0, double rho1) const = 0;

    virtual Phase classify_phase(double rho0, double rho1) const = 0;

    /// Helmholtz free-energy density (J/m^3).
    virtual double helmholtz(double rho0, double rho1) const = 0;

    /// Upper bound for the normal characteristic speeds of the bulk system
    /// at the given state; v0n, v1n are the normal velocity components.
    virtual double max_wave_speed(double rho0, double rho1, double v0n, double v1n) const = 0;

    virtual double temperature() const = 0;
    virtual const EosParams& params() const = 0;
};

/// Two-component van-der-Waals mixture with linear attraction mixing:
///
///   f(rho0, rho1) = RT sum_a c_a (ln c_a - 1) - c RT ln(1 - b0 c0 - b1 c1)
///                   - (a00 c0^2 + 2 a01 c0 c1 + a11 c1^2),  c_a = rho_a / M_a.
///
/// The spinodal envelope (loss of positive definiteness of the Hessian of f)
/// is precomputed on a composition x total-density grid at construction and
/// queried by linear containment, so classification is O(1).
class VdwMixtureEos final : public EosModel {
public:
    explicit VdwMixtureEos(const EosParams& params, std::size_t grid = 512);

    std::array<double, 2> chemical_potential(double rho0, double rho1) const override;
    double pressure(double rho0, double rho1) const override;
    Phase classify_phase(double rho0, double rho1) const override;
    double helmholtz(double rho0, double rho1) const override;
    double max_wave_speed(double rho0, double rho1, double v0n, double v1n) const override;

    double temperature() const override { return params_.T; }
    const EosParams& params() const override { return params_; }

    /// Hessian of f wrt (rho0, rho1); entries J*m^3/kg^2.
    std::array<double, 4> hessian(double rho0, double rho1) const;

    bool hessian_positive_definite(double rho0, double rho1) const;

    /// Spinodal molar-density interval at argon mole fraction x0, or
    /// {0, 0} if no spinodal exists there.
    std::array<double, 2> spinodal_interval(double x0) const;

private:
    double covolume_fraction(double c0, double c1) const;
    void build_envelope(std::size_t grid);

    EosParams params_;
    // spinodal envelope over argon mole fraction x0 in [0,1]
    std::vector<double> env_x_;
    std::vector<double> env_clo_;  // total molar density, vapor-side edge
    std::vector<double> env_chi_;  // liquid-side edge
};

EosParams load_eos_params(const std::string& path);
void save_eos_params(const EosParams& params, const std::string& path);

}  // namespace hmm::eos
