#pragma once

#include "betarisk/label_gen.hpp"
#include "betarisk/loss.hpp"
#include "betarisk/net.hpp"
#include "betarisk/random.hpp"
#include "betarisk/synth_data.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace betarisk::train {

// Cosine annealing with warm restarts: cycle i lasts T0 * Tmult^i epochs.
struct Schedule {
    int T0 = 10;
    int Tmult = 2;
    double eta_min = 0.0;

    friend bool operator==(const Schedule&, const Schedule&) = default;
};

double lr_at(double base_lr, double step_epoch, const Schedule& schedule);

struct AdamWConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double delta = 1e-8;

    friend bool operator==(const AdamWConfig&, const AdamWConfig&) = default;
};

struct TrainConfig {
    int epochs = 30;
    int batch_size = 32;
    double lr_backbone = 1e-4;
    double lr_dist_head = 0.02;
    double lr_cls_head = 1e-4;
    double weight_decay = 0.01;
    Schedule schedule;
    AdamWConfig adamw;
    double crop_area_min = 0.5;
    double crop_area_max = 1.0;
    bool augment = true; // flips and quarter turns of crop content
    loss::LossWeights loss;
    labelgen::LabelGenConfig labels = shipped_labels();
    net::ModelConfig model;
    std::uint64_t seed = 0;

    // Label settings used for training runs: epsilon 0.08 rather than the
    // LabelGenConfig default of 1e-5.
    static labelgen::LabelGenConfig shipped_labels() {
        labelgen::LabelGenConfig c;
        c.epsilon = 0.08;
        return c;
    }

    std::array<double, 3> base_rates() const { return {lr_backbone, lr_dist_head, lr_cls_head}; }

    // Throws ConfigError naming the offending field.
    void validate() const;
};

struct OptimizerState {
    net::GroupBuffers m;
    net::GroupBuffers v;
    long step = 0;

    static OptimizerState for_model(const net::ModelState& state);
};

// One AdamW update with per-group learning rates:
// theta -= lr * (m_hat / (sqrt(v_hat) + delta) + weight_decay * theta).
// Throws NumericError naming the group if a gradient is not finite.
void optimizer_step(net::ModelState& state, const net::GroupBuffers& grads, OptimizerState& opt,
                    const std::array<double, 3>& rates, double weight_decay,
                    const AdamWConfig& adamw = {});

// Uniform area fraction within [area_min, area_max], uniform position.
labelgen::CropGeometry sample_crop(Rng& rng, int source_size, double area_min, double area_max);

struct EpochStats {
    int epoch = 0; // 1-based count of completed epochs
    double loss = 0.0;
    double bce = 0.0;
    double w2 = 0.0;
    double lr_scale = 0.0;
    std::array<double, 3> rates{};
};

// One pass over `train` (indices into `scenes`) in a seeded permutation.
// Every sample gets a fresh crop; positives get a target derived from it.
EpochStats train_epoch(net::ModelState& state, OptimizerState& opt,
                       std::span<const synth::Scene> scenes, std::span<const int> train,
                       int epoch_index, const TrainConfig& config);

struct EpochRecord {
    EpochStats stats;
    double val_accuracy = 0.0;
};

struct FitResult {
    net::ModelState best;
    int best_epoch = 0; // 0 means the initial state
    double best_val_accuracy = 0.0;
    net::ModelState last;
    std::vector<EpochRecord> history;
};

// Accuracy of risk >= 0.5 against labels on uncropped inputs.
double accuracy(const net::ModelState& state, std::span<const net::ScaleFeatures> features,
                std::span<const int> labels);

using EpochCallback = std::function<void(const EpochRecord&)>;

// Trains for config.epochs and keeps the state with the highest validation
// accuracy (earliest epoch on ties).
FitResult fit(std::span<const synth::Scene> scenes, std::span<const int> train,
              std::span<const int> val, const TrainConfig& config,
              const EpochCallback& on_epoch = {});

} // namespace betarisk::train
