#include "hmm/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "hmm/errors.hpp"
#include "hmm/rng.hpp"

namespace hmm::surrogate {

namespace {

double softplus(double x) {
    if (x > 30.0) return x;
    if (x < -30.0) return std::exp(x);
    return std::log1p(std::exp(x));
}

double sigmoid(double x) {
    if (x >= 0.0) {
        const double e = std::exp(-x);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

struct ForwardCache {
    std::vector<std::vector<double>> activations;  // h_0 .. h_L
    std::vector<std::vector<double>> pre;          // pre-activation per hidden layer
    std::array<double, 7> yhat{};                  // denormalized raw head
    std::array<double, 4> t{};                     // positivity-map arguments
    std::array<double, 4> rho{};                   // mapped densities
    std::array<double, 9> out{};
};

void forward_impl(const NetworkParams& p, const std::array<double, 7>& input, ForwardCache& c) {
    const int n_hidden = p.shape.hidden_layers;
    c.activations.assign(n_hidden + 1, {});
    c.pre.assign(n_hidden, {});

    std::vector<double> h(p.shape.input);
    for (int k = 0; k < p.shape.input; ++k) h[k] = (input[k] - p.in_mean[k]) / p.in_scale[k];
    c.activations[0] = h;

    for (int l = 0; l < n_hidden; ++l) {
        const int rows = p.shape.hidden_width;
        const int cols = static_cast<int>(h.size());
        std::vector<double> pre(rows);
        const auto& w = p.weights[l];
        const auto& b = p.biases[l];
        for (int r = 0; r < rows; ++r) {
            double acc = b[r];
            const double* wr = w.data() + static_cast<std::size_t>(r) * cols;
            for (int q = 0; q < cols; ++q) acc += wr[q] * h[q];
            pre[r] = acc;
        }
        c.pre[l] = pre;
        h.resize(rows);
        for (int r = 0; r < rows; ++r) h[r] = softplus(pre[r]);
        c.activations[l + 1] = h;
    }

    // linear raw head
    {
        const int rows = p.shape.raw_output;
        const int cols = static_cast<int>(h.size());
        const auto& w = p.weights[n_hidden];
        const auto& b = p.biases[n_hidden];
        for (int r = 0; r < rows; ++r) {
            double acc = b[r];
            const double* wr = w.data() + static_cast<std::size_t>(r) * cols;
            for (int q = 0; q < cols; ++q) acc += wr[q] * h[q];
            c.yhat[r] = p.raw_mean[r] + p.raw_scale[r] * acc;
        }
    }

    for (int k = 0; k < 4; ++k) {
        const double S = p.raw_scale[k];
        c.t[k] = c.yhat[k] / S;
        c.rho[k] = S * softplus(c.t[k]);
    }
    const double rm0 = c.rho[0], rm1 = c.rho[1], rp0 = c.rho[2], rp1 = c.rho[3];
    const double v0m = c.yhat[kRawV0Liq], v1m = c.yhat[kRawV1Liq], s = c.yhat[kRawSpeed];

    // vapor momenta carry the liquid-side interfacial mass flux verbatim:
    // m*a+ = rho*a+ s + rho*a- (v*a- - s), the Rankine-Hugoniot mass
    // condition in additive form (no cancellation-prone division)
    c.out = {rm0,
             rm1,
             rm0 * v0m,
             rm1 * v1m,
             rp0,
             rp1,
             rp0 * s + rm0 * (v0m - s),
             rp1 * s + rm1 * (v1m - s),
             s};
}

}  // namespace

NetworkParams make_network(const NetworkShape& shape, std::uint64_t seed) {
    if (shape.input <= 0 || shape.hidden_width <= 0 || shape.hidden_layers <= 0 ||
        shape.raw_output <= 0) {
        throw ParameterError("surrogate: network shape entries must be positive");
    }
    NetworkParams p;
    p.shape = shape;
    Rng rng(seed);
    int fan_in = shape.input;
    for (int l = 0; l <= shape.hidden_layers; ++l) {
        const int fan_out = l < shape.hidden_layers ? shape.hidden_width : shape.raw_output;
        std::vector<double> w(static_cast<std::size_t>(fan_out) * fan_in);
        const double sd = std::sqrt(2.0 / fan_in);
        for (auto& x : w) x = rng.normal(0.0, sd);
        p.weights.push_back(std::move(w));
        p.biases.emplace_back(fan_out, 0.0);
        fan_in = fan_out;
    }
    p.in_scale.fill(1.0);
    p.raw_scale.fill(1.0);
    p.out_scale.fill(1.0);
    return p;
}

std::array<double, 9> forward_constrained(const NetworkParams& params,
                                          const std::array<double, 7>& input) {
    for (double v : input) {
        if (!std::isfinite(v)) throw ParameterError("surrogate: non-finite input");
    }
    ForwardCache c;
    forward_impl(params, input, c);
    if (c.rho[2] < kDensityFloor || c.rho[3] < kDensityFloor) {
        throw ConstraintSingularityError("surrogate: vapor density below floor in constraint");
    }
    return c.out;
}

Gradients alloc_gradients(const NetworkParams& params) {
    Gradients g;
    for (const auto& w : params.weights) g.weights.emplace_back(w.size(), 0.0);
    for (const auto& b : params.biases) g.biases.emplace_back(b.size(), 0.0);
    return g;
}

double loss_and_gradient(const NetworkParams& p, const std::vector<std::array<double, 7>>& x,
                         const std::vector<std::array<double, 9>>& y, Gradients* grads) {
    if (x.empty() || x.size() != y.size()) {
        throw ParameterError("surrogate: batch inputs and targets must match and be non-empty");
    }
    const int n_hidden = p.shape.hidden_layers;
    const double inv_batch = 1.0 / static_cast<double>(x.size());
    double loss = 0.0;
    ForwardCache c;

    for (std::size_t sample = 0; sample < x.size(); ++sample) {
        forward_impl(p, x[sample], c);

        std::array<double, 9> dout{};
        for (int k = 0; k < 9; ++k) {
            const double diff = (c.out[k] - y[sample][k]) / p.out_scale[k];
            loss += diff * diff / 9.0 * inv_batch;
            dout[k] = 2.0 * diff / (9.0 * p.out_scale[k]) * inv_batch;
        }
        if (grads == nullptr) continue;

        const double rm0 = c.rho[0], rm1 = c.rho[1], rp0 = c.rho[2], rp1 = c.rho[3];
        const double v0m = c.yhat[kRawV0Liq], v1m = c.yhat[kRawV1Liq], s = c.yhat[kRawSpeed];

        std::array<double, 7> dyhat{};
        dyhat[0] = (dout[0] + dout[2] * v0m + dout[6] * (v0m - s)) * sigmoid(c.t[0]);
        dyhat[1] = (dout[1] + dout[3] * v1m + dout[7] * (v1m - s)) * sigmoid(c.t[1]);
        dyhat[2] = (dout[4] + dout[6] * s) * sigmoid(c.t[2]);
        dyhat[3] = (dout[5] + dout[7] * s) * sigmoid(c.t[3]);
        dyhat[4] = dout[2] * rm0 + dout[6] * rm0;
        dyhat[5] = dout[3] * rm1 + dout[7] * rm1;
        dyhat[6] = dout[6] * (rp0 - rm0) + dout[7] * (rp1 - rm1) + dout[8];

        std::vector<double> delta(p.shape.raw_output);
        for (int k = 0; k < p.shape.raw_output; ++k) delta[k] = dyhat[k] * p.raw_scale[k];

        for (int l = n_hidden; l >= 0; --l) {
            const auto& h = c.activations[l];
            const int rows = static_cast<int>(delta.size());
            const int cols = static_cast<int>(h.size());
            auto& gw = grads->weights[l];
            auto& gb = grads->biases[l];
            for (int r = 0; r < rows; ++r) {
                gb[r] += delta[r];
                double* gwr = gw.data() + static_cast<std::size_t>(r) * cols;
                for (int q = 0; q < cols; ++q) gwr[q] += delta[r] * h[q];
            }
            if (l == 0) break;
            const auto& w = p.weights[l];
            std::vector<double> dh(cols, 0.0);
            for (int r = 0; r < rows; ++r) {
                const double* wr = w.data() + static_cast<std::size_t>(r) * cols;
                for (int q = 0; q < cols; ++q) dh[q] += wr[q] * delta[r];
            }
            delta.resize(cols);
            for (int q = 0; q < cols; ++q) delta[q] = dh[q] * sigmoid(c.pre[l - 1][q]);
        }
    }
    return loss;
}

namespace {

struct FieldStats {
    double mean = 0.0;
    double scale = 1.0;
};

FieldStats stats_of(const std::vector<double>& values) {
    FieldStats s;
    if (values.empty()) return s;
    double m = 0.0;
    for (double v : values) m += v;
    m /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - m) * (v - m);
    var /= static_cast<double>(values.size());
    s.mean = m;
    s.scale = std::max(std::sqrt(var), 1e-8 * (std::abs(m) + 1.0));
    return s;
}

}  // namespace

TrainResult train(const std::vector<std::array<double, 7>>& inputs,
                  const std::vector<std::array<double, 9>>& outputs, const NetworkShape& shape,
                  const TrainConfig& config) {
    if (inputs.size() != outputs.size()) {
        throw ParameterError("surrogate: input/output record count mismatch");
    }
    if (inputs.size() < 10) {
        throw ParameterError("surrogate: need at least 10 usable records");
    }
    Rng rng(config.seed);
    std::vector<std::size_t> order(inputs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);

    const std::size_t n_val = std::min(
        inputs.size() - 1,
        static_cast<std::size_t>(std::llround(config.val_fraction * inputs.size())));
    std::vector<std::size_t> val_idx(order.begin(), order.begin() + n_val);
    std::vector<std::size_t> train_idx(order.begin() + n_val, order.end());

    NetworkParams params = make_network(shape, split_seed(config.seed, 1));

    // standardization from the training split
    for (int k = 0; k < 7; ++k) {
        std::vector<double> col;
        col.reserve(train_idx.size());
        for (auto i : train_idx) col.push_back(inputs[i][k]);
        const FieldStats st = stats_of(col);
        params.in_mean[k] = st.mean;
        params.in_scale[k] = st.scale;
    }
    for (int k = 0; k < 9; ++k) {
        std::vector<double> col;
        col.reserve(train_idx.size());
        for (auto i : train_idx) col.push_back(outputs[i][k]);
        const FieldStats st = stats_of(col);
        params.out_mean[k] = st.mean;
        params.out_scale[k] = st.scale;
    }
    // raw head fields (rho0-, rho1-, rho0+, rho1+, v0-, v1-, s)
    for (int k = 0; k < 7; ++k) {
        std::vector<double> col;
        for (auto i : train_idx) {
            const auto& o = outputs[i];
            switch (k) {
                case kRawRho0Liq: col.push_back(o[0]); break;
                case kRawRho1Liq: col.push_back(o[1]); break;
                case kRawRho0Vap: col.push_back(o[4]); break;
                case kRawRho1Vap: col.push_back(o[5]); break;
                case kRawV0Liq:
                    if (o[0] > kDensityFloor) col.push_back(o[2] / o[0]);
                    break;
                case kRawV1Liq:
                    if (o[1] > kDensityFloor) col.push_back(o[3] / o[1]);
                    break;
                case kRawSpeed: col.push_back(o[8]); break;
            }
        }
        const FieldStats st = stats_of(col);
        params.raw_mean[k] = st.mean;
        params.raw_scale[k] = st.scale;
    }

    auto gather = [&](const std::vector<std::size_t>& idx, std::size_t from, std::size_t to,
                      std::vector<std::array<double, 7>>& bx,
                      std::vector<std::array<double, 9>>& by) {
        bx.clear();
        by.clear();
        for (std::size_t i = from; i < to; ++i) {
            bx.push_back(inputs[idx[i]]);
            by.push_back(outputs[idx[i]]);
        }
    };

    Gradients vel = alloc_gradients(params);
    TrainResult result;
    double best_val = std::numeric_limits<double>::infinity();
    double lr = config.learning_rate;
    std::vector<std::array<double, 7>> bx;
    std::vector<std::array<double, 9>> by;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(train_idx);
        double epoch_loss = 0.0;
        std::size_t batches = 0;
        for (std::size_t begin = 0; begin < train_idx.size();
             begin += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t end =
                std::min(train_idx.size(), begin + static_cast<std::size_t>(config.batch_size));
            gather(train_idx, begin, end, bx, by);
            Gradients g = alloc_gradients(params);
            const double loss = loss_and_gradient(params, bx, by, &g);
            if (!std::isfinite(loss)) {
                throw DivergenceError("surrogate: loss diverged at epoch " +
                                      std::to_string(epoch));
            }
            epoch_loss += loss;
            ++batches;
            for (std::size_t l = 0; l < params.weights.size(); ++l) {
                for (std::size_t k = 0; k < params.weights[l].size(); ++k) {
                    vel.weights[l][k] =
                        config.momentum * vel.weights[l][k] - lr * g.weights[l][k];
                    params.weights[l][k] += vel.weights[l][k];
                }
                for (std::size_t k = 0; k < params.biases[l].size(); ++k) {
                    vel.biases[l][k] = config.momentum * vel.biases[l][k] - lr * g.biases[l][k];
                    params.biases[l][k] += vel.biases[l][k];
                }
            }
        }
        result.train_loss.push_back(epoch_loss / static_cast<double>(std::max<std::size_t>(batches, 1)));

        double val = result.train_loss.back();
        if (!val_idx.empty()) {
            gather(val_idx, 0, val_idx.size(), bx, by);
            val = loss_and_gradient(params, bx, by, nullptr);
        }
        result.val_loss.push_back(val);
        if (val < best_val) {
            best_val = val;
            result.params = params;
            result.best_epoch = epoch;
        }
        lr *= config.lr_decay;
    }
    if (result.best_epoch < 0) result.params = params;
    return result;
}

void save_network(const NetworkParams& p, const std::string& path) {
    nlohmann::json j;
    j["format"] = "hmm-surrogate";
    j["version"] = 1;
    j["activation"] = "softplus";
    j["shape"] = {{"input", p.shape.input},
                  {"hidden_width", p.shape.hidden_width},
                  {"hidden_layers", p.shape.hidden_layers},
                  {"raw_output", p.shape.raw_output}};
    j["weights"] = p.weights;
    j["biases"] = p.biases;
    j["in_mean"] = p.in_mean;
    j["in_scale"] = p.in_scale;
    j["raw_mean"] = p.raw_mean;
    j["raw_scale"] = p.raw_scale;
    j["out_mean"] = p.out_mean;
    j["out_scale"] = p.out_scale;
    std::ofstream out(path);
    if (!out) throw ParseError("surrogate: cannot write model file " + path);
    out << j.dump() << "\n";
}

NetworkParams load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("surrogate: cannot open model file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("surrogate: malformed model file " + path + ": " + e.what());
    }
    if (!j.contains("format") || j["format"] != "hmm-surrogate") {
        throw IncompatibleFormatError("surrogate: not a surrogate model file: " + path);
    }
    if (j.at("version").get<int>() != 1) {
        throw IncompatibleFormatError("surrogate: unsupported model version in " + path);
    }
    try {
        NetworkParams p;
        p.shape.input = j.at("shape").at("input").get<int>();
        p.shape.hidden_width = j.at("shape").at("hidden_width").get<int>();
        p.shape.hidden_layers = j.at("shape").at("hidden_layers").get<int>();
        p.shape.raw_output = j.at("shape").at("raw_output").get<int>();
        p.weights = j.at("weights").get<std::vector<std::vector<double>>>();
        p.biases = j.at("biases").get<std::vector<std::vector<double>>>();
        p.in_mean = j.at("in_mean").get<std::array<double, 7>>();
        p.in_scale = j.at("in_scale").get<std::array<double, 7>>();
        p.raw_mean = j.at("raw_mean").get<std::array<double, 7>>();
        p.raw_scale = j.at("raw_scale").get<std::array<double, 7>>();
        p.out_mean = j.at("out_mean").get<std::array<double, 9>>();
        p.out_scale = j.at("out_scale").get<std::array<double, 9>>();
        if (p.weights.size() != static_cast<std::size_t>(p.shape.hidden_layers) + 1 ||
            p.biases.size() != p.weights.size()) {
            throw ParseError("surrogate: layer count mismatch in " + path);
        }
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("surrogate: incomplete model file " + path + ": " + e.what());
    }
}

std::size_t parameter_count(const NetworkParams& p) {
    std::size_t n = 0;
    for (const auto& w : p.weights) n += w.size();
    for (const auto& b : p.biases) n += b.size();
    return n;
}

double& parameter_at(NetworkParams& p, std::size_t index) {
    for (std::size_t l = 0; l < p.weights.size(); ++l) {
        if (index < p.weights[l].size()) return p.weights[l][index];
        index -= p.weights[l].size();
    }
    for (std::size_t l = 0; l < p.biases.size(); ++l) {
        if (index < p.biases[l].size()) return p.biases[l][index];
        index -= p.biases[l].size();
    }
    throw ParameterError("surrogate: parameter index out of range");
}

double gradient_at(const Gradients& g, std::size_t index) {
    for (std::size_t l = 0; l < g.weights.size(); ++l) {
        if (index < g.weights[l].size()) return g.weights[l][index];
        index -= g.weights[l].size();
    }
    for (std::size_t l = 0; l < g.biases.size(); ++l) {
        if (index < g.biases[l].size()) return g.biases[l][index];
        index -= g.biases[l].size();
    }
    throw ParameterError("surrogate: gradient index out of range");
}

}  // namespace hmm::surrogate
