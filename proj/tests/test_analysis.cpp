#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "betarisk/analysis.hpp"
#include "betarisk/errors.hpp"

#include <algorithm>
#include <cmath>

using namespace betarisk;
using namespace betarisk::analysis;

TEST_CASE("grid values") {
    const auto g = grid_values(0.5, 10.0, 0.25);
    REQUIRE(g.size() == 39);
    CHECK(g.front() == 0.5);
    CHECK(g.back() == 10.0);
    CHECK(grid_values(1, 1, 0.5) == std::vector<double>{1.0});
    CHECK(grid_values(0.1, 0.3, 0.1).size() == 3);
    CHECK_THROWS_AS(grid_values(0.5, 10, 0), DomainError);
    CHECK_THROWS_AS(grid_values(0.5, 10, -1), DomainError);
    CHECK_THROWS_AS(grid_values(2, 1, 0.5), DomainError);
}

TEST_CASE("sweep cells and summaries") {
    const auto g = grid_values(1.0, 5.0, 1.0);
    const betadist::BetaParams target(2, 5);
    const auto one = w2_sweep(target, g, g, 256, 1);
    const auto many = w2_sweep(target, g, g, 256, 7);
    REQUIRE(one.cells.size() == 25);
    for (std::size_t k = 0; k < one.cells.size(); ++k) {
        const auto& c = one.cells[k];
        CHECK(c.alpha == g[k / 5]);
        CHECK(c.beta == g[k % 5]);
        CHECK(c.surrogate == loss::w2_surrogate({c.alpha, c.beta}, target));
        CHECK(c.true_w2 == loss::w2_true({c.alpha, c.beta}, target, 256));
        CHECK(c.abs_diff == std::fabs(c.surrogate - c.true_w2));
        CHECK(c.extreme == is_extreme_shape(c.alpha, c.beta));
        CHECK(many.cells[k].true_w2 == c.true_w2);
        CHECK(many.cells[k].rel_diff == c.rel_diff);
    }
    const auto& id = one.cells[1 * 5 + 4];
    CHECK(id.alpha == 2.0);
    CHECK(id.beta == 5.0);
    CHECK(id.true_w2 <= 1e-10);
    CHECK(id.rel_diff == 0.0);
    CHECK(w2_csv(one) == w2_csv(many));
    CHECK(w2_csv(one).rfind("alpha,beta,surrogate,true_w2,abs_diff,rel_diff,extreme\n", 0) == 0);
}

TEST_CASE("sweep quantiles interpolate sorted differences") {
    W2Sweep s;
    for (double d : {4.0, 1.0, 3.0, 2.0}) {
        W2Cell c;
        c.abs_diff = d;
        c.rel_diff = 10 - d;
        s.cells.push_back(c);
    }
    CHECK(s.median_abs() == 2.5);
    CHECK(s.quantile_abs(0.0) == 1.0);
    CHECK(s.quantile_abs(1.0) == 4.0);
    CHECK(s.max_abs().abs_diff == 4.0);
    CHECK(s.max_rel().abs_diff == 1.0);
    CHECK_THROWS_AS(W2Sweep{}.median_abs(), DomainError);
}

TEST_CASE("ablation tables") {
    std::vector<AblationRow> rows;
    for (const auto& [l1, l2] : kAblationWeights) {
        AblationRow r;
        r.lambda1 = l1;
        r.lambda2 = l2;
        r.test.precision = 0.5;
        r.test.recall = 0.25;
        r.test.f1 = 1.0 / 3.0;
        rows.push_back(r);
    }
    const auto md = ablation_markdown(rows);
    CHECK(md.rfind("| lambda1 | lambda2 | F1 Score | Precision | Recall |\n|---|---|---|---|---|\n", 0) == 0);
    CHECK(md.find("| 10 | 1 | 0.3333 | 0.5000 | 0.2500 |") != std::string::npos);
    CHECK(md.find("| 1 | 10 | 0.3333 | 0.5000 | 0.2500 |") != std::string::npos);
    CHECK(std::count(md.begin(), md.end(), '\n') == 7);
    const auto csv = ablation_csv(rows);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
}

TEST_CASE("coupling counts positives only") {
    synth::DatasetSpec spec;
    spec.n_samples = 30;
    const auto scenes = synth::generate(spec);
    std::vector<int> all(30);
    for (int i = 0; i < 30; ++i) all[i] = i;
    const net::ModelState zero{net::ModelConfig{}};
    const auto c = influence_coupling(zero, scenes, all);
    CHECK(c.positives == spec.positive_count());
    CHECK(c.coupled == 0); // a constant model never prefers the centre
    CHECK(c.rate() == 0.0);
    CHECK(Coupling{}.rate() == 0.0);
}

TEST_CASE("predictions follow the requested indices") {
    synth::DatasetSpec spec;
    spec.n_samples = 10;
    const auto scenes = synth::generate(spec);
    const auto state = net::init(net::ModelConfig{}, 2);
    const std::vector<int> idx{7, 2, 5};
    const auto recs = predict(state, scenes, idx);
    REQUIRE(recs.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(recs[k].sample_id == idx[k]);
        CHECK(recs[k].label == scenes[idx[k]].label());
        const auto p = net::predict_risk(state, synth::full_features(scenes[idx[k]]));
        CHECK(recs[k].risk == p.risk);
        CHECK(recs[k].binary_pred == (p.risk >= 0.5 ? 1 : 0));
    }
}
