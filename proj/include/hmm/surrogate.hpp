#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace hmm::surrogate {

struct NetworkShape {
    int input = 7;
    int hidden_width = 60;
    int hidden_layers = 5;
    int raw_output = 7;
};

/// Raw head field order: liquid densities, vapor densities, liquid
/// velocities, interface speed. The vapor velocities are not predicted;
/// the constraint layer resolves them from mass conservation.
enum RawField {
    kRawRho0Liq = 0,
    kRawRho1Liq,
    kRawRho0Vap,
    kRawRho1Vap,
    kRawV0Liq,
    kRawV1Liq,
    kRawSpeed,
};

struct NetworkParams {
    NetworkShape shape;
    // weights[l] is row-major (rows x cols) = (layer output x layer input)
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
    // per-field affine standardization; scales strictly positive
    std::array<double, 7> in_mean{}, in_scale{};
    std::array<double, 7> raw_mean{}, raw_scale{};
    std::array<double, 9> out_mean{}, out_scale{};

    std::size_t layer_count() const { return weights.size(); }
};

/// Fresh network with unit scales, zero means, and seeded He-style weights.
NetworkParams make_network(const NetworkShape& shape, std::uint64_t seed);

/// Forward pass with the mass-conservation output layer. Input is the
/// 7-vector of Algorithm 2 (SI units), output the 9-vector
/// (rho*0-, rho*1-, m*0-, m*1-, rho*0+, rho*1+, m*0+, m*1+, s).
/// Vapor momenta are assembled as m*a+ = rho*a+ s + rho*a- (v*a- - s), so
/// the per-component interfacial mass flux matches the liquid side by
/// construction. Density outputs pass through a softplus positivity map.
/// Throws ConstraintSingularityError when a vapor density falls below the
/// density floor.
std::array<double, 9> forward_constrained(const NetworkParams& params,
                                          const std::array<double, 7>& input);

constexpr double kDensityFloor = 1e-8;  // kg/m^3

/// Mean squared error over normalized constrained outputs for one batch;
/// accumulates analytic parameter gradients when grads is non-null.
/// grads must mirror the weight/bias layout (see alloc_gradients).
struct Gradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
};

Gradients alloc_gradients(const NetworkParams& params);

double loss_and_gradient(const NetworkParams& params,
                         const std::vector<std::array<double, 7>>& x,
                         const std::vector<std::array<double, 9>>& y, Gradients* grads);

struct TrainConfig {
    int epochs = 500;
    int batch_size = 32;
    double learning_rate = 2e-3;
    double momentum = 0.9;
    double lr_decay = 0.999;      // per-epoch multiplier
    double val_fraction = 0.1;    // paper split 10800/1200
    std::uint64_t seed = 0;
};

struct TrainResult {
    NetworkParams params;              // best-on-validation
    std::vector<double> train_loss;    // per epoch
    std::vector<double> val_loss;
    int best_epoch = -1;
};

/// Mini-batch gradient descent with momentum on the normalized MSE.
/// Normalization statistics are computed from the training split and
/// stored in the returned parameters. Throws DivergenceError (naming the
/// epoch) if the loss turns non-finite.
TrainResult train(const std::vector<std::array<double, 7>>& inputs,
                  const std::vector<std::array<double, 9>>& outputs, const NetworkShape& shape,
                  const TrainConfig& config);

/// Versioned JSON container, lossless for doubles.
void save_network(const NetworkParams& params, const std::string& path);
NetworkParams load_network(const std::string& path);

/// Flat parameter access; used by the finite-difference gradient check.
std::size_t parameter_count(const NetworkParams& params);
double& parameter_at(NetworkParams& params, std::size_t index);
double gradient_at(const Gradients& grads, std::size_t index);

}  // namespace hmm::surrogate
