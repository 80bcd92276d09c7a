#include "betarisk/trainer.hpp"

#include "betarisk/errors.hpp"
#include "betarisk/metrics.hpp"
#include "betarisk/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace betarisk::train {

namespace {

constexpr std::uint64_t kEpochStream = 0x65706f63;

} // namespace

double lr_at(double base_lr, double step_epoch, const Schedule& s) {
    if (!(step_epoch >= 0.0)) {
        throw DomainError("schedule position must be non-negative, got " + std::to_string(step_epoch));
    }
    double cycle = s.T0;
    double t = step_epoch;
    while (t >= cycle) {
        t -= cycle;
        cycle *= s.Tmult;
    }
    return s.eta_min + 0.5 * (base_lr - s.eta_min) * (1.0 + std::cos(std::numbers::pi * t / cycle));
}

void TrainConfig::validate() const {
    if (epochs < 0) throw ConfigError("epochs", "must be non-negative");
    if (batch_size < 1) throw ConfigError("batch_size", "must be positive");
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(lr_backbone)) throw ConfigError("lr_backbone", "must be positive");
    if (!positive(lr_dist_head)) throw ConfigError("lr_dist_head", "must be positive");
    if (!positive(lr_cls_head)) throw ConfigError("lr_cls_head", "must be positive");
    if (!(std::isfinite(weight_decay) && weight_decay >= 0.0)) {
        throw ConfigError("weight_decay", "must be non-negative");
    }
    if (schedule.T0 < 1) throw ConfigError("T0", "must be at least 1");
    if (schedule.Tmult < 1) throw ConfigError("Tmult", "must be at least 1");
    if (!(schedule.eta_min >= 0.0)) throw ConfigError("eta_min", "must be non-negative");
    if (!(crop_area_min > 0.0 && crop_area_min <= crop_area_max && crop_area_max <= 1.0)) {
        throw ConfigError("crop_area_range", "must satisfy 0 < min <= max <= 1");
    }
    if (!(adamw.beta1 >= 0.0 && adamw.beta1 < 1.0)) throw ConfigError("beta1", "must lie in [0, 1)");
    if (!(adamw.beta2 >= 0.0 && adamw.beta2 < 1.0)) throw ConfigError("beta2", "must lie in [0, 1)");
    if (!positive(adamw.delta)) throw ConfigError("delta", "must be positive");
    loss.validate();
    labels.validate();
    model.validate();
}

OptimizerState OptimizerState::for_model(const net::ModelState& state) {
    return OptimizerState{state.zeros_like(), state.zeros_like(), 0};
}

void optimizer_step(net::ModelState& state, const net::GroupBuffers& grads, OptimizerState& opt,
                    const std::array<double, 3>& rates, double weight_decay,
                    const AdamWConfig& adamw) {
    for (net::Group g : net::kGroups) {
        const int gi = static_cast<int>(g);
        for (double x : grads[gi]) {
            if (!std::isfinite(x)) {
                throw NumericError("non-finite gradient in parameter group " +
                                   std::string(net::group_name(g)));
            }
        }
    }
    ++opt.step;
    const double bias1 = 1.0 - std::pow(adamw.beta1, static_cast<double>(opt.step));
    const double bias2 = 1.0 - std::pow(adamw.beta2, static_cast<double>(opt.step));
    for (net::Group g : net::kGroups) {
        const int gi = static_cast<int>(g);
        auto theta = state.group(g);
        auto& m = opt.m[gi];
        auto& v = opt.v[gi];
        const auto& grad = grads[gi];
        const double lr = rates[gi];
        for (std::size_t k = 0; k < theta.size(); ++k) {
            m[k] = adamw.beta1 * m[k] + (1.0 - adamw.beta1) * grad[k];
            v[k] = adamw.beta2 * v[k] + (1.0 - adamw.beta2) * grad[k] * grad[k];
            const double m_hat = m[k] / bias1;
            const double v_hat = v[k] / bias2;
            theta[k] -= lr * (m_hat / (std::sqrt(v_hat) + adamw.delta) + weight_decay * theta[k]);
        }
    }
}

labelgen::CropGeometry sample_crop(Rng& rng, int source_size, double area_min, double area_max) {
    const double area = rng.uniform(area_min, area_max);
    const int side = std::clamp(static_cast<int>(std::lround(std::sqrt(area) * source_size)),
                                synth::kPoolCells, source_size);
    const int slack = source_size - side;
    const int ox = rng.between(0, slack);
    const int oy = rng.between(0, slack);
    return labelgen::CropGeometry{source_size, side, ox, oy};
}

EpochStats train_epoch(net::ModelState& state, OptimizerState& opt,
                       std::span<const synth::Scene> scenes, std::span<const int> train,
                       int epoch_index, const TrainConfig& config) {
    if (train.empty()) throw ConfigError("train", "training split is empty");
    Rng rng(derive_seed(config.seed, kEpochStream, static_cast<std::uint64_t>(epoch_index)));
    std::vector<int> order(train.begin(), train.end());
    rng.shuffle(order.begin(), order.end());

    EpochStats stats;
    stats.epoch = epoch_index + 1;
    stats.lr_scale = lr_at(1.0, epoch_index, config.schedule);
    const auto base = config.base_rates();
    for (int g = 0; g < 3; ++g) stats.rates[g] = lr_at(base[g], epoch_index, config.schedule);

    auto grads = state.zeros_like();
    double loss_sum = 0.0, bce_sum = 0.0, w2_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
        const std::size_t end = std::min(order.size(), start + config.batch_size);
        for (auto& g : grads) std::fill(g.begin(), g.end(), 0.0);
        for (std::size_t i = start; i < end; ++i) {
            const auto& scene = scenes[order[i]];
            const int source = scene.scales.front().size;
            const auto crop = sample_crop(rng, source, config.crop_area_min, config.crop_area_max);
            const int transform = config.augment ? static_cast<int>(rng.below(8)) : synth::kIdentity;
            const auto features = synth::crop_features(scene, crop, transform);
            const auto target = labelgen::make_target(scene.label(), crop, config.labels);
            try {
                const auto r = net::backward(state, features, target, scene.label(), config.loss, grads);
                loss_sum += r.loss;
                bce_sum += r.bce;
                w2_sum += r.w2;
            } catch (const NumericError& e) {
                throw NumericError("sample " + std::to_string(scene.record.id) + ": " + e.what());
            } catch (const DomainError& e) {
                throw NumericError("sample " + std::to_string(scene.record.id) + ": " + e.what());
            }
        }
        const double scale = 1.0 / static_cast<double>(end - start);
        for (auto& g : grads) {
            for (double& x : g) x *= scale;
        }
        optimizer_step(state, grads, opt, stats.rates, config.weight_decay, config.adamw);
    }
    const double n = static_cast<double>(order.size());
    stats.loss = loss_sum / n;
    stats.bce = bce_sum / n;
    stats.w2 = w2_sum / n;
    return stats;
}

double accuracy(const net::ModelState& state, std::span<const net::ScaleFeatures> features,
                std::span<const int> labels) {
    if (features.empty()) throw ConfigError("val", "validation split is empty");
    long correct = 0;
    for (std::size_t i = 0; i < features.size(); ++i) {
        try {
            const auto p = net::predict_risk(state, features[i]);
            correct += metrics::decide(p.risk) == labels[i] ? 1 : 0;
        } catch (const NumericError& e) {
            throw NumericError("validation sample " + std::to_string(i) + ": " + e.what());
        }
    }
    return static_cast<double>(correct) / static_cast<double>(features.size());
}

FitResult fit(std::span<const synth::Scene> scenes, std::span<const int> train,
              std::span<const int> val, const TrainConfig& config, const EpochCallback& on_epoch) {
    config.validate();
    if (train.empty()) throw ConfigError("train", "training split is empty");
    if (val.empty()) throw ConfigError("val", "validation split is empty");
    for (int i : train) {
        if (std::find(val.begin(), val.end(), i) != val.end()) {
            throw ConfigError("val", "train and validation splits overlap at sample " + std::to_string(i));
        }
    }

    std::vector<net::ScaleFeatures> val_features;
    std::vector<int> val_labels;
    for (int i : val) {
        val_features.push_back(synth::full_features(scenes[i]));
        val_labels.push_back(scenes[i].label());
    }

    net::ModelState state = net::init(config.model, config.seed);
    auto opt = OptimizerState::for_model(state);
    FitResult result{state, 0, accuracy(state, val_features, val_labels), state, {}};
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        EpochRecord rec;
        rec.stats = train_epoch(state, opt, scenes, train, epoch, config);
        rec.val_accuracy = accuracy(state, val_features, val_labels);
        if (epoch == 0 || rec.val_accuracy > result.best_val_accuracy) {
            result.best = state;
            result.best_epoch = rec.stats.epoch;
            result.best_val_accuracy = rec.val_accuracy;
        }
        result.history.push_back(rec);
        if (on_epoch) on_epoch(rec);
    }
    result.last = state;
    return result;
}

} // namespace betarisk::train
