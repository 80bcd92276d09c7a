#include "betarisk/loss.hpp"

#include "betarisk/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace betarisk::loss {

namespace {

void check_label(int label) {
    if (label != 0 && label != 1) {
        throw DomainError("label must be 0 or 1, got " + std::to_string(label));
    }
}

} // namespace

void LossWeights::validate() const {
    if (!(std::isfinite(lambda1) && lambda1 >= 0.0)) {
        throw ConfigError("lambda1", "must be finite and non-negative");
    }
    if (!(std::isfinite(lambda2) && lambda2 >= 0.0)) {
        throw ConfigError("lambda2", "must be finite and non-negative");
    }
    for (double cw : class_weights) {
        if (!(std::isfinite(cw) && cw > 0.0)) {
            throw ConfigError("class_weights", "must be finite and positive");
        }
    }
}

double w2_surrogate(const BetaParams& pred, const BetaParams& target) {
    const double dmu = betadist::mean(pred) - betadist::mean(target);
    const double dsigma = betadist::std_dev(pred) - betadist::std_dev(target);
    return dmu * dmu + dsigma * dsigma;
}

QuadratureRule quadrature_rule(int nodes) {
    if (nodes < 64) {
        throw DomainError("w2 quadrature needs at least 64 nodes, got " + std::to_string(nodes));
    }
    QuadratureRule r;
    r.u.resize(static_cast<std::size_t>(nodes));
    r.weight.resize(static_cast<std::size_t>(nodes));
    for (int k = 0; k < nodes; ++k) {
        const double t = std::numbers::pi * (k + 0.5) / nodes;
        // 1 - cos(t) written as 2 sin^2(t/2) to keep small u accurate.
        const double s = std::sin(0.5 * t);
        r.u[k] = s * s;
        r.weight[k] = 0.5 * std::numbers::pi * std::sin(t) / nodes;
    }
    return r;
}

double w2_true_against(const BetaParams& pred, const QuadratureRule& rule,
                       const std::vector<double>& target_quantiles) {
    if (target_quantiles.size() != rule.u.size()) {
        throw DomainError("target quantiles do not match the quadrature rule");
    }
    const auto qp = betadist::quantiles(pred, rule.u);
    double sum = 0.0;
    for (std::size_t k = 0; k < qp.size(); ++k) {
        const double d = qp[k] - target_quantiles[k];
        sum += rule.weight[k] * d * d;
    }
    return sum;
}

double w2_true(const BetaParams& pred, const BetaParams& target, int nodes) {
    const auto rule = quadrature_rule(nodes);
    return w2_true_against(pred, rule, betadist::quantiles(target, rule.u));
}

double sigmoid(double z) noexcept {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double softplus(double z) noexcept {
    return std::fmax(z, 0.0) + std::log1p(std::exp(-std::fabs(z)));
}

double bce(double logit, int label, const LossWeights& w) {
    check_label(label);
    // -[y log p + (1-y) log(1-p)] = softplus(z) - y z
    return w.class_weight(label) * (softplus(logit) - label * logit);
}

double compound(const BetaParams& pred, const BetaParams& target, double logit, int label,
                const LossWeights& w) {
    return w.lambda1 * bce(logit, label, w) + w.lambda2 * w2_surrogate(pred, target);
}

CompoundGradient grad_compound(const BetaParams& pred, const BetaParams& target, double logit,
                               int label, const LossWeights& w) {
    check_label(label);
    const double a = pred.alpha();
    const double b = pred.beta();
    const double s = a + b;

    const double dmu = betadist::mean(pred) - betadist::mean(target);
    const double sigma_p = betadist::std_dev(pred);
    const double dsigma = sigma_p - betadist::std_dev(target);

    const double dmu_da = b / (s * s);
    const double dmu_db = -a / (s * s);
    // d log(var)/da = 1/a - 2/s - 1/(s+1), and d sigma = sigma/2 * d log(var).
    const double shared = 2.0 / s + 1.0 / (s + 1.0);
    const double dsigma_da = 0.5 * sigma_p * (1.0 / a - shared);
    const double dsigma_db = 0.5 * sigma_p * (1.0 / b - shared);

    CompoundGradient g;
    g.d_alpha = w.lambda2 * 2.0 * (dmu * dmu_da + dsigma * dsigma_da);
    g.d_beta = w.lambda2 * 2.0 * (dmu * dmu_db + dsigma * dsigma_db);
    g.d_logit = w.lambda1 * w.class_weight(label) * (sigmoid(logit) - label);
    return g;
}

} // namespace betarisk::loss
