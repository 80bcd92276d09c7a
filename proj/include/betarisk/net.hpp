#pragma once

#include "betarisk/beta_dist.hpp"
#include "betarisk/loss.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace betarisk::net {

using betadist::BetaParams;

enum class Activation { rectifier, tanh };

struct ModelConfig {
    int num_scales = 3;
    int feature_dim = 64;
    std::vector<int> encoder_widths{32, 16};
    // Hidden widths of each head; empty means a single linear layer.
    std::vector<int> dist_head_hidden{};
    std::vector<int> cls_head_hidden{};
    Activation activation = Activation::rectifier;
    double alpha_beta_floor = 1e-4;

    int embedding_width() const { return num_scales * encoder_widths.back(); }

    // Throws ConfigError naming the offending field.
    void validate() const;

    friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// Parameter groups; the trainer assigns a learning rate to each.
enum class Group : int { backbone = 0, dist_head = 1, cls_head = 2 };
inline constexpr std::array<Group, 3> kGroups{Group::backbone, Group::dist_head, Group::cls_head};
inline constexpr std::array<std::string_view, 3> kGroupNames{"backbone", "dist_head", "cls_head"};

constexpr std::string_view group_name(Group g) { return kGroupNames[static_cast<int>(g)]; }

// One dense layer inside a flat group buffer: row-major weights (out x in)
// followed by the bias vector.
struct DenseLayout {
    int in = 0;
    int out = 0;
    std::size_t weight_offset = 0;
    std::size_t bias_offset = 0;
};

// Flat per-group storage for parameters or for gradients of the same shape.
using GroupBuffers = std::array<std::vector<double>, 3>;

class ModelState {
public:
    // All parameters zero.
    explicit ModelState(ModelConfig config);

    const ModelConfig& config() const noexcept { return m_config; }

    std::span<double> group(Group g) { return m_params[static_cast<int>(g)]; }
    std::span<const double> group(Group g) const { return m_params[static_cast<int>(g)]; }
    const std::vector<DenseLayout>& layout(Group g) const { return m_layout[static_cast<int>(g)]; }

    GroupBuffers& buffers() noexcept { return m_params; }
    const GroupBuffers& buffers() const noexcept { return m_params; }

    // Zero-filled buffers shaped like the parameters.
    GroupBuffers zeros_like() const;

    std::size_t parameter_count() const;

    friend bool operator==(const ModelState& a, const ModelState& b) {
        return a.m_config == b.m_config && a.m_params == b.m_params;
    }

private:
    ModelConfig m_config;
    std::array<std::vector<DenseLayout>, 3> m_layout;
    GroupBuffers m_params;
};

// Per-scale pooled feature vectors, one entry per scale.
using ScaleFeatures = std::vector<std::vector<double>>;

// Fan-in scaled uniform weights, zero biases; deterministic in `seed`.
ModelState init(const ModelConfig& config, std::uint64_t seed);

struct ForwardResult {
    BetaParams params{1.0, 1.0};
    double logit = 0.0;
    std::vector<double> embedding;
};

// Throws StructuralError on mismatched features and NumericError when the
// outputs overflow.
ForwardResult forward(const ModelState& state, const ScaleFeatures& features);

// Positivity link for the distribution head: softplus(x) + floor.
double positive_link(double raw, double floor) noexcept;

struct BackwardResult {
    double loss = 0.0;
    double bce = 0.0;
    double w2 = 0.0;
    ForwardResult forward;
};

// Exact reverse-mode gradient of loss::compound; gradients are added to
// `grads` (shaped by ModelState::zeros_like).
BackwardResult backward(const ModelState& state, const ScaleFeatures& features,
                        const BetaParams& target, int label, const loss::LossWeights& w,
                        GroupBuffers& grads);

struct RiskPrediction {
    double risk;
    BetaParams params;
    double std_dev;
};

// Inference: the risk is the mean of the predicted distribution.
RiskPrediction predict_risk(const ModelState& state, const ScaleFeatures& features);

} // namespace betarisk::net
