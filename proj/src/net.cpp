#include "betarisk/net.hpp"

#include "betarisk/errors.hpp"
#include "betarisk/random.hpp"

#include <cmath>
#include <string>

namespace betarisk::net {

namespace {

std::vector<DenseLayout> stack_layout(int in, const std::vector<int>& widths) {
    std::vector<DenseLayout> layers;
    std::size_t offset = 0;
    for (int out : widths) {
        DenseLayout l;
        l.in = in;
        l.out = out;
        l.weight_offset = offset;
        l.bias_offset = offset + static_cast<std::size_t>(in) * out;
        offset = l.bias_offset + out;
        layers.push_back(l);
        in = out;
    }
    return layers;
}

std::size_t layout_size(const std::vector<DenseLayout>& layers) {
    return layers.empty() ? 0 : layers.back().bias_offset + layers.back().out;
}

std::vector<int> with_output(std::vector<int> hidden, int out) {
    hidden.push_back(out);
    return hidden;
}

double activate(double x, Activation a) noexcept {
    return a == Activation::rectifier ? (x > 0.0 ? x : 0.0) : std::tanh(x);
}

// Derivative expressed through the pre-activation and the activation output.
double activate_grad(double pre, double post, Activation a) noexcept {
    return a == Activation::rectifier ? (pre > 0.0 ? 1.0 : 0.0) : 1.0 - post * post;
}

// Inputs and pre-activations of each layer of one MLP pass.
struct MlpTrace {
    std::vector<std::vector<double>> inputs;
    std::vector<std::vector<double>> pre;
    std::vector<double> output;
};

MlpTrace mlp_forward(std::span<const double> params, const std::vector<DenseLayout>& layers,
                     std::vector<double> x, Activation act, bool activate_last) {
    MlpTrace t;
    for (std::size_t li = 0; li < layers.size(); ++li) {
        const auto& l = layers[li];
        std::vector<double> z(l.out);
        for (int o = 0; o < l.out; ++o) {
            const double* row = params.data() + l.weight_offset + static_cast<std::size_t>(o) * l.in;
            double acc = params[l.bias_offset + o];
            for (int i = 0; i < l.in; ++i) acc += row[i] * x[i];
            z[o] = acc;
        }
        std::vector<double> y = z;
        if (activate_last || li + 1 < layers.size()) {
            for (double& v : y) v = activate(v, act);
        }
        t.inputs.push_back(std::move(x));
        t.pre.push_back(std::move(z));
        x = std::move(y);
    }
    t.output = std::move(x);
    return t;
}

// Accumulates parameter gradients into `grad` and returns d loss / d input.
std::vector<double> mlp_backward(std::span<const double> params,
                                 const std::vector<DenseLayout>& layers, const MlpTrace& t,
                                 std::vector<double> d_out, Activation act, bool activate_last,
                                 std::span<double> grad) {
    for (std::size_t li = layers.size(); li-- > 0;) {
        const auto& l = layers[li];
        if (activate_last || li + 1 < layers.size()) {
            const auto& z = t.pre[li];
            const auto& y = li + 1 < layers.size() ? t.inputs[li + 1] : t.output;
            for (int o = 0; o < l.out; ++o) d_out[o] *= activate_grad(z[o], y[o], act);
        }
        const auto& x = t.inputs[li];
        std::vector<double> d_in(l.in, 0.0);
        for (int o = 0; o < l.out; ++o) {
            const double g = d_out[o];
            grad[l.bias_offset + o] += g;
            if (g == 0.0) continue;
            const std::size_t row = l.weight_offset + static_cast<std::size_t>(o) * l.in;
            for (int i = 0; i < l.in; ++i) {
                grad[row + i] += g * x[i];
                d_in[i] += g * params[row + i];
            }
        }
        d_out = std::move(d_in);
    }
    return d_out;
}

void check_features(const ModelConfig& c, const ScaleFeatures& features) {
    if (static_cast<int>(features.size()) != c.num_scales) {
        throw StructuralError("expected " + std::to_string(c.num_scales) + " scales, got " +
                              std::to_string(features.size()));
    }
    for (std::size_t s = 0; s < features.size(); ++s) {
        if (static_cast<int>(features[s].size()) != c.feature_dim) {
            throw StructuralError("scale " + std::to_string(s) + " has " +
                                  std::to_string(features[s].size()) + " features, expected " +
                                  std::to_string(c.feature_dim));
        }
    }
}

struct FullTrace {
    std::vector<MlpTrace> encoder;
    std::vector<double> embedding;
    MlpTrace dist;
    MlpTrace cls;
};

FullTrace trace_forward(const ModelState& state, const ScaleFeatures& features) {
    const auto& c = state.config();
    check_features(c, features);
    FullTrace t;
    const int width = c.encoder_widths.back();
    t.embedding.reserve(static_cast<std::size_t>(c.embedding_width()));
    for (const auto& f : features) {
        t.encoder.push_back(mlp_forward(state.group(Group::backbone), state.layout(Group::backbone),
                                        f, c.activation, true));
        const auto& out = t.encoder.back().output;
        t.embedding.insert(t.embedding.end(), out.begin(), out.begin() + width);
    }
    t.dist = mlp_forward(state.group(Group::dist_head), state.layout(Group::dist_head), t.embedding,
                         c.activation, false);
    t.cls = mlp_forward(state.group(Group::cls_head), state.layout(Group::cls_head), t.embedding,
                        c.activation, false);
    return t;
}

ForwardResult result_of(const ModelConfig& c, const FullTrace& t) {
    const double a = positive_link(t.dist.output[0], c.alpha_beta_floor);
    const double b = positive_link(t.dist.output[1], c.alpha_beta_floor);
    // Overflowing weights are a numeric failure, not a bad argument.
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(t.cls.output[0])) {
        throw NumericError("model output is not finite: alpha " + std::to_string(a) + ", beta " +
                           std::to_string(b) + ", logit " + std::to_string(t.cls.output[0]));
    }
    return ForwardResult{BetaParams(a, b), t.cls.output[0], t.embedding};
}

} // namespace

void ModelConfig::validate() const {
    if (num_scales <= 0) throw ConfigError("num_scales", "must be positive");
    if (feature_dim <= 0) throw ConfigError("feature_dim", "must be positive");
    if (encoder_widths.empty()) throw ConfigError("encoder_widths", "must not be empty");
    for (int w : encoder_widths) {
        if (w <= 0) throw ConfigError("encoder_widths", "widths must be positive");
    }
    for (int w : dist_head_hidden) {
        if (w <= 0) throw ConfigError("dist_head_hidden", "widths must be positive");
    }
    for (int w : cls_head_hidden) {
        if (w <= 0) throw ConfigError("cls_head_hidden", "widths must be positive");
    }
    if (!(std::isfinite(alpha_beta_floor) && alpha_beta_floor > 0.0)) {
        throw ConfigError("alpha_beta_floor", "must be positive");
    }
}

ModelState::ModelState(ModelConfig config) : m_config(std::move(config)) {
    m_config.validate();
    m_layout[0] = stack_layout(m_config.feature_dim, m_config.encoder_widths);
    m_layout[1] = stack_layout(m_config.embedding_width(), with_output(m_config.dist_head_hidden, 2));
    m_layout[2] = stack_layout(m_config.embedding_width(), with_output(m_config.cls_head_hidden, 1));
    for (int g = 0; g < 3; ++g) m_params[g].assign(layout_size(m_layout[g]), 0.0);
}

GroupBuffers ModelState::zeros_like() const {
    GroupBuffers out;
    for (int g = 0; g < 3; ++g) out[g].assign(m_params[g].size(), 0.0);
    return out;
}

std::size_t ModelState::parameter_count() const {
    return m_params[0].size() + m_params[1].size() + m_params[2].size();
}

ModelState init(const ModelConfig& config, std::uint64_t seed) {
    ModelState state(config);
    Rng rng(derive_seed(seed, 0x6e6574 /* "net" */));
    for (Group g : kGroups) {
        auto params = state.group(g);
        const auto& layers = state.layout(g);
        for (std::size_t li = 0; li < layers.size(); ++li) {
            const auto& l = layers[li];
            const bool hidden = g == Group::backbone || li + 1 < layers.size();
            const double gain = hidden && config.activation == Activation::rectifier ? 6.0 : 3.0;
            const double bound = std::sqrt(gain / l.in);
            const std::size_t n = static_cast<std::size_t>(l.in) * l.out;
            for (std::size_t k = 0; k < n; ++k) {
                params[l.weight_offset + k] = rng.uniform(-bound, bound);
            }
        }
    }
    return state;
}

double positive_link(double raw, double floor) noexcept { return loss::softplus(raw) + floor; }

ForwardResult forward(const ModelState& state, const ScaleFeatures& features) {
    return result_of(state.config(), trace_forward(state, features));
}

BackwardResult backward(const ModelState& state, const ScaleFeatures& features,
                        const BetaParams& target, int label, const loss::LossWeights& w,
                        GroupBuffers& grads) {
    const auto& c = state.config();
    const FullTrace t = trace_forward(state, features);
    BackwardResult r;
    r.forward = result_of(c, t);
    const auto& pred = r.forward.params;
    r.bce = loss::bce(r.forward.logit, label, w);
    r.w2 = loss::w2_surrogate(pred, target);
    r.loss = w.lambda1 * r.bce + w.lambda2 * r.w2;

    const auto g = loss::grad_compound(pred, target, r.forward.logit, label, w);
    // d softplus / dx = sigmoid(x)
    std::vector<double> d_dist{g.d_alpha * loss::sigmoid(t.dist.output[0]),
                               g.d_beta * loss::sigmoid(t.dist.output[1])};
    auto d_embed = mlp_backward(state.group(Group::dist_head), state.layout(Group::dist_head),
                                t.dist, std::move(d_dist), c.activation, false,
                                grads[static_cast<int>(Group::dist_head)]);
    const auto d_embed_cls =
        mlp_backward(state.group(Group::cls_head), state.layout(Group::cls_head), t.cls,
                     std::vector<double>{g.d_logit}, c.activation, false,
                     grads[static_cast<int>(Group::cls_head)]);
    for (std::size_t i = 0; i < d_embed.size(); ++i) d_embed[i] += d_embed_cls[i];

    // Shared encoder: gradients from every scale sum into the same weights.
    const int width = c.encoder_widths.back();
    for (int s = 0; s < c.num_scales; ++s) {
        std::vector<double> d_scale(d_embed.begin() + s * width, d_embed.begin() + (s + 1) * width);
        mlp_backward(state.group(Group::backbone), state.layout(Group::backbone), t.encoder[s],
                     std::move(d_scale), c.activation, true,
                     grads[static_cast<int>(Group::backbone)]);
    }
    return r;
}

RiskPrediction predict_risk(const ModelState& state, const ScaleFeatures& features) {
    const auto f = forward(state, features);
    return {betadist::mean(f.params), f.params, betadist::std_dev(f.params)};
}

} // namespace betarisk::net
