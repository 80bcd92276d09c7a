#pragma once

#include "betarisk/beta_dist.hpp"

namespace betarisk::labelgen {

// Axis-aligned square crop inside a square source grid, in pixels.
struct CropGeometry {
    int source_size = 0;
    int crop_size = 0;
    int offset_x = 0;
    int offset_y = 0;

    // Throws StructuralError unless 0 < crop_size <= source_size and the
    // window lies inside the source.
    void validate() const;

    static CropGeometry full(int source_size);
    static CropGeometry centered(int source_size, int crop_size);
};

enum class PositiveBetaMode {
    verbatim,       // beta_t = epsilon
    mean_realizing, // beta_t = (1 - mu_t) * k_t, so the target mean is mu_t
};

struct LabelGenConfig {
    double base_K = 22.0;
    double epsilon = 1e-5;
    double mu_min = 0.18;
    double k_min = 18.0;
    double w_dist = 0.7;
    double w_size = 0.3;
    PositiveBetaMode positive_beta_mode = PositiveBetaMode::verbatim;

    // Throws ConfigError naming the offending field.
    void validate() const;
};

// Distance from the crop centre to the source centre over half the source
// diagonal, clamped to [0, 1].
double normalized_distance(const CropGeometry& g);

// Crop area over source area.
double normalized_size(const CropGeometry& g);

double influence_from(double d_norm, double s_norm, const LabelGenConfig& c);
double influence(const CropGeometry& g, const LabelGenConfig& c);

// Target mean and concentration for a positive sample with the given influence.
struct PositiveTarget {
    double mu;
    double k;
};
PositiveTarget positive_target(double influence, const LabelGenConfig& c);

betadist::BetaParams make_target_from_influence(int label, double influence,
                                                const LabelGenConfig& c);
betadist::BetaParams make_target(int label, const CropGeometry& g, const LabelGenConfig& c);

} // namespace betarisk::labelgen
