#include "betarisk/label_gen.hpp"

#include "betarisk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace betarisk::labelgen {

void CropGeometry::validate() const {
    if (crop_size <= 0 || crop_size > source_size) {
        throw StructuralError("crop size " + std::to_string(crop_size) +
                              " outside (0, " + std::to_string(source_size) + "]");
    }
    const int slack = source_size - crop_size;
    if (offset_x < 0 || offset_y < 0 || offset_x > slack || offset_y > slack) {
        throw StructuralError("crop offset (" + std::to_string(offset_x) + ", " +
                              std::to_string(offset_y) + ") outside [0, " +
                              std::to_string(slack) + "]");
    }
}

CropGeometry CropGeometry::full(int source_size) {
    return CropGeometry{source_size, source_size, 0, 0};
}

CropGeometry CropGeometry::centered(int source_size, int crop_size) {
    const int offset = (source_size - crop_size) / 2;
    return CropGeometry{source_size, crop_size, offset, offset};
}

void LabelGenConfig::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(base_K)) throw ConfigError("base_K", "must be positive");
    if (!positive(epsilon)) throw ConfigError("epsilon", "must be positive");
    if (!(mu_min > 0.0 && mu_min < 1.0)) throw ConfigError("mu_min", "must lie in (0, 1)");
    if (!positive(k_min)) throw ConfigError("k_min", "must be positive");
    if (k_min > base_K) throw ConfigError("k_min", "must not exceed base_K");
    if (!(w_dist >= 0.0 && w_dist <= 1.0)) throw ConfigError("w_dist", "must lie in [0, 1]");
    if (!(w_size >= 0.0 && w_size <= 1.0)) throw ConfigError("w_size", "must lie in [0, 1]");
    if (std::fabs(w_dist + w_size - 1.0) > 1e-12) {
        throw ConfigError("w_dist", "w_dist + w_size must equal 1");
    }
}

double normalized_distance(const CropGeometry& g) {
    g.validate();
    const double half = 0.5 * g.source_size;
    const double dx = g.offset_x + 0.5 * g.crop_size - half;
    const double dy = g.offset_y + 0.5 * g.crop_size - half;
    const double half_diagonal = half * std::sqrt(2.0);
    return std::clamp(std::hypot(dx, dy) / half_diagonal, 0.0, 1.0);
}

double normalized_size(const CropGeometry& g) {
    g.validate();
    const double side = static_cast<double>(g.crop_size) / g.source_size;
    return side * side;
}

double influence_from(double d_norm, double s_norm, const LabelGenConfig& c) {
    return c.w_dist * (1.0 - d_norm) + c.w_size * s_norm;
}

double influence(const CropGeometry& g, const LabelGenConfig& c) {
    return influence_from(normalized_distance(g), normalized_size(g), c);
}

PositiveTarget positive_target(double influence, const LabelGenConfig& c) {
    return {c.mu_min + (1.0 - c.mu_min) * influence, c.k_min + (c.base_K - c.k_min) * influence};
}

betadist::BetaParams make_target_from_influence(int label, double influence,
                                                const LabelGenConfig& c) {
    if (label == 0) return {c.epsilon, c.base_K};
    if (label != 1) {
        throw DomainError("label must be 0 or 1, got " + std::to_string(label));
    }
    const auto [mu, k] = positive_target(influence, c);
    switch (c.positive_beta_mode) {
    case PositiveBetaMode::verbatim:
        return {mu * k, c.epsilon};
    case PositiveBetaMode::mean_realizing:
        // At full influence mu = 1 and the complement vanishes; keep the
        // shape strictly positive.
        return {mu * k, std::max((1.0 - mu) * k, c.epsilon)};
    }
    throw DomainError("unknown positive beta mode");
}

betadist::BetaParams make_target(int label, const CropGeometry& g, const LabelGenConfig& c) {
    if (label != 0 && label != 1) {
        throw DomainError("label must be 0 or 1, got " + std::to_string(label));
    }
    if (label == 0) return make_target_from_influence(0, 0.0, c);
    return make_target_from_influence(1, influence(g, c), c);
}

} // namespace betarisk::labelgen
