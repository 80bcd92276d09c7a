#pragma once

#include "betarisk/beta_dist.hpp"

#include <array>
#include <vector>

namespace betarisk::loss {

using betadist::BetaParams;

struct LossWeights {
    double lambda1 = 5.0; // classification
    double lambda2 = 1.0; // distribution
    // Per-class BCE weights, indexed by label: {negative, positive}.
    std::array<double, 2> class_weights{1.25948, 4.85382};

    double class_weight(int label) const { return class_weights[label == 1 ? 1 : 0]; }
    void validate() const;
};

// (mu_p - mu_t)^2 + (sigma_p - sigma_t)^2 from closed-form moments.
double w2_surrogate(const BetaParams& pred, const BetaParams& target);

constexpr int kDefaultQuadratureNodes = 1024;

// Midpoint rule on a uniform grid in t, mapped to u = (1 - cos(pi t)) / 2.
// Quantile functions have power-law behaviour at u = 0 and u = 1; the map
// clusters nodes there, and the rule converges much faster than uniform
// midpoints in u at the same node count.
struct QuadratureRule {
    std::vector<double> u;      // increasing, inside (0, 1)
    std::vector<double> weight; // du/dt times the t step; sums to 1 + pi^2 / (24 n^2)
};

// Requires nodes >= 64.
QuadratureRule quadrature_rule(int nodes);

// Squared Wasserstein-2 distance, integral over u of (Q_pred(u) - Q_target(u))^2.
double w2_true(const BetaParams& pred, const BetaParams& target,
               int nodes = kDefaultQuadratureNodes);

// Same integral against target quantiles already evaluated at rule.u, so a
// sweep over many predictions solves the target only once.
double w2_true_against(const BetaParams& pred, const QuadratureRule& rule,
                       const std::vector<double>& target_quantiles);

// Numerically stable 1 / (1 + exp(-z)).
double sigmoid(double z) noexcept;
// log(1 + exp(z)) without overflow.
double softplus(double z) noexcept;

// Class-weighted binary cross-entropy evaluated from the logit.
double bce(double logit, int label, const LossWeights& w);

double compound(const BetaParams& pred, const BetaParams& target, double logit, int label,
                const LossWeights& w);

struct CompoundGradient {
    double d_alpha = 0.0;
    double d_beta = 0.0;
    double d_logit = 0.0;
};

// Analytic partial derivatives of compound() w.r.t. the predicted shapes and the logit.
CompoundGradient grad_compound(const BetaParams& pred, const BetaParams& target, double logit,
                               int label, const LossWeights& w);

} // namespace betarisk::loss
