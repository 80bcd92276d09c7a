#include "betarisk/analysis.hpp"

#include "betarisk/errors.hpp"
#include "betarisk/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

namespace betarisk::analysis {

std::vector<double> grid_values(double lo, double hi, double step) {
    if (!(std::isfinite(lo) && std::isfinite(hi) && std::isfinite(step))) {
        throw DomainError("grid bounds and step must be finite");
    }
    if (!(step > 0.0)) throw DomainError("grid step must be positive");
    if (hi < lo) throw DomainError("grid upper bound lies below the lower bound");
    const long n = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(n));
    for (long k = 0; k < n; ++k) v.push_back(lo + static_cast<double>(k) * step);
    return v;
}

double W2Sweep::quantile_abs(double q) const {
    if (cells.empty()) throw DomainError("empty sweep");
    std::vector<double> d;
    d.reserve(cells.size());
    for (const auto& c : cells) d.push_back(c.abs_diff);
    std::sort(d.begin(), d.end());
    const double pos = q * static_cast<double>(d.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, d.size() - 1);
    return d[lo] + (pos - static_cast<double>(lo)) * (d[hi] - d[lo]);
}

double W2Sweep::median_abs() const { return quantile_abs(0.5); }

const W2Cell& W2Sweep::max_rel() const {
    if (cells.empty()) throw DomainError("empty sweep");
    return *std::max_element(cells.begin(), cells.end(),
                             [](const W2Cell& a, const W2Cell& b) { return a.rel_diff < b.rel_diff; });
}

const W2Cell& W2Sweep::max_abs() const {
    if (cells.empty()) throw DomainError("empty sweep");
    return *std::max_element(cells.begin(), cells.end(),
                             [](const W2Cell& a, const W2Cell& b) { return a.abs_diff < b.abs_diff; });
}

W2Sweep w2_sweep(const betadist::BetaParams& target, const std::vector<double>& alphas,
                 const std::vector<double>& betas, int nodes, int threads) {
    if (alphas.empty() || betas.empty()) throw DomainError("w2 sweep needs a non-empty grid");
    const auto rule = loss::quadrature_rule(nodes);
    const auto target_q = betadist::quantiles(target, rule.u);

    W2Sweep sweep{target, alphas, betas, std::vector<W2Cell>(alphas.size() * betas.size())};
    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t k = first; k < sweep.cells.size(); k += stride) {
            const double a = alphas[k / betas.size()];
            const double b = betas[k % betas.size()];
            const betadist::BetaParams p(a, b);
            W2Cell& c = sweep.cells[k];
            c.alpha = a;
            c.beta = b;
            c.surrogate = loss::w2_surrogate(p, target);
            c.true_w2 = loss::w2_true_against(p, rule, target_q);
            c.abs_diff = std::fabs(c.surrogate - c.true_w2);
            c.rel_diff = c.true_w2 > 0.0 ? c.abs_diff / c.true_w2 : 0.0;
            c.extreme = is_extreme_shape(a, b);
        }
    };

    const auto n_threads = static_cast<std::size_t>(std::max(1, threads));
    if (n_threads == 1) {
        work(0, 1);
        return sweep;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                work(t, n_threads);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return sweep;
}

std::string w2_csv(const W2Sweep& sweep) {
    std::string out = "alpha,beta,surrogate,true_w2,abs_diff,rel_diff,extreme\n";
    for (const auto& c : sweep.cells) {
        out += io::format_double(c.alpha) + "," + io::format_double(c.beta) + "," +
               io::format_double(c.surrogate) + "," + io::format_double(c.true_w2) + "," +
               io::format_double(c.abs_diff) + "," + io::format_double(c.rel_diff) + "," +
               (c.extreme ? "1" : "0") + "\n";
    }
    return out;
}

std::vector<metrics::PredictionRecord> predict(const net::ModelState& state,
                                               std::span<const synth::Scene> scenes,
                                               std::span<const int> indices) {
    std::vector<metrics::PredictionRecord> out;
    out.reserve(indices.size());
    for (int i : indices) {
        const auto& s = scenes[i];
        out.push_back(metrics::PredictionRecord::from(s.record.id, s.label(),
                                                      net::predict_risk(state, synth::full_features(s))));
    }
    return out;
}

std::vector<AblationRow> ablation(std::span<const synth::Scene> scenes, std::span<const int> train,
                                  std::span<const int> val, std::span<const int> test,
                                  const train::TrainConfig& base) {
    std::vector<AblationRow> rows;
    for (const auto& [l1, l2] : kAblationWeights) {
        train::TrainConfig c = base;
        c.loss.lambda1 = l1;
        c.loss.lambda2 = l2;
        const auto fit = train::fit(scenes, train, val, c);
        const auto records = predict(fit.best, scenes, test);
        rows.push_back(AblationRow{l1, l2, metrics::classification_metrics(records), fit.best_epoch});
    }
    return rows;
}

std::string ablation_csv(const std::vector<AblationRow>& rows) {
    std::string out = "lambda1,lambda2,f1,precision,recall\n";
    for (const auto& r : rows) {
        out += io::format_double(r.lambda1) + "," + io::format_double(r.lambda2) + "," +
               io::format_double(r.test.f1) + "," + io::format_double(r.test.precision) + "," +
               io::format_double(r.test.recall) + "\n";
    }
    return out;
}

std::string ablation_markdown(const std::vector<AblationRow>& rows) {
    std::string out = "| lambda1 | lambda2 | F1 Score | Precision | Recall |\n"
                      "|---|---|---|---|---|\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "| %g | %g | %.4f | %.4f | %.4f |\n", r.lambda1, r.lambda2,
                      r.test.f1, r.test.precision, r.test.recall);
        out += buf;
    }
    return out;
}

Coupling influence_coupling(const net::ModelState& state, std::span<const synth::Scene> scenes,
                            std::span<const int> indices) {
    Coupling c;
    for (int i : indices) {
        const auto& s = scenes[i];
        if (s.label() != 1) continue;
        const int n = s.scales.front().size;
        const int side = static_cast<int>(std::lround(n / std::sqrt(2.0)));
        const auto centred = labelgen::CropGeometry::centered(n, side);
        const labelgen::CropGeometry corner{n, side, 0, 0};
        const double r_centre = net::predict_risk(state, synth::crop_features(s, centred)).risk;
        const double r_corner = net::predict_risk(state, synth::crop_features(s, corner)).risk;
        ++c.positives;
        if (r_centre > r_corner) ++c.coupled;
    }
    return c;
}

} // namespace betarisk::analysis
