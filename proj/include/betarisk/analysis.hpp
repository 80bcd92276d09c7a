#pragma once

#include "betarisk/beta_dist.hpp"
#include "betarisk/loss.hpp"
#include "betarisk/metrics.hpp"
#include "betarisk/synth_data.hpp"
#include "betarisk/trainer.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace betarisk::analysis {

// Inclusive arithmetic grid lo, lo + step, ... <= hi (with a small tolerance
// so that 0.5:10:0.25 ends at 10). Throws DomainError for step <= 0 or hi < lo.
std::vector<double> grid_values(double lo, double hi, double step);

struct W2Cell {
    double alpha = 0.0;
    double beta = 0.0;
    double surrogate = 0.0;
    double true_w2 = 0.0;
    double abs_diff = 0.0;
    double rel_diff = 0.0; // abs_diff / true_w2, 0 when both vanish
    bool extreme = false;
};

// Density unbounded at an endpoint: where the mean/std surrogate departs most
// from the quantile-based distance.
inline bool is_extreme_shape(double alpha, double beta) { return alpha < 1.0 || beta < 1.0; }

struct W2Sweep {
    betadist::BetaParams target{2.0, 5.0};
    std::vector<double> alphas;
    std::vector<double> betas;
    std::vector<W2Cell> cells; // alpha-major: cells[i * betas.size() + j]

    double median_abs() const;
    double quantile_abs(double q) const;
    const W2Cell& max_rel() const;
    const W2Cell& max_abs() const;
};

// Evaluates every grid cell. Work is split over `threads` workers by cell
// index; results do not depend on the thread count.
W2Sweep w2_sweep(const betadist::BetaParams& target, const std::vector<double>& alphas,
                 const std::vector<double>& betas, int nodes = loss::kDefaultQuadratureNodes,
                 int threads = 1);

std::string w2_csv(const W2Sweep& sweep);

// Predictions of a model on full, uncropped scenes.
std::vector<metrics::PredictionRecord> predict(const net::ModelState& state,
                                               std::span<const synth::Scene> scenes,
                                               std::span<const int> indices);

struct AblationRow {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    metrics::ClassificationMetrics test;
    int best_epoch = 0;
};

inline constexpr std::array<std::array<double, 2>, 5> kAblationWeights{
    {{10.0, 1.0}, {5.0, 1.0}, {1.0, 1.0}, {1.0, 5.0}, {1.0, 10.0}}};

// Trains one model per weight pair with otherwise identical settings and
// reports F1/precision/recall of the selected checkpoint on `test`.
std::vector<AblationRow> ablation(std::span<const synth::Scene> scenes, std::span<const int> train,
                                  std::span<const int> val, std::span<const int> test,
                                  const train::TrainConfig& base);

std::string ablation_csv(const std::vector<AblationRow>& rows);
std::string ablation_markdown(const std::vector<AblationRow>& rows);

// Share of positive scenes whose risk on a centred half-area crop exceeds the
// risk on the top-left half-area crop.
struct Coupling {
    int positives = 0;
    int coupled = 0;
    double rate() const { return positives > 0 ? static_cast<double>(coupled) / positives : 0.0; }
};
Coupling influence_coupling(const net::ModelState& state, std::span<const synth::Scene> scenes,
                            std::span<const int> indices);

} // namespace betarisk::analysis
