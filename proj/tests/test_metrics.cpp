#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "betarisk/metrics.hpp"
#include "betarisk/random.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

using namespace betarisk;
using metrics::PredictionRecord;

namespace {

PredictionRecord rec(double risk, int label, int id = 0) {
    PredictionRecord r;
    r.sample_id = id;
    r.label = label;
    r.risk = risk;
    r.binary_pred = metrics::decide(risk);
    return r;
}

std::vector<PredictionRecord> records_of(const std::vector<oracle::Scored>& s) {
    std::vector<PredictionRecord> out;
    for (std::size_t i = 0; i < s.size(); ++i) out.push_back(rec(s[i].value(), s[i].label, int(i)));
    return out;
}

// Score sets k / 32 with 1 <= k <= 31, drawn without replacement when
// `distinct`, otherwise from a small pool so that ties are frequent.
std::vector<std::vector<std::int64_t>> score_sets(int n, bool distinct, int count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<std::int64_t>> out;
    for (int c = 0; c < count; ++c) {
        std::vector<std::int64_t> ks;
        if (distinct) {
            std::vector<std::int64_t> pool;
            for (int k = 1; k <= 31; ++k) pool.push_back(k);
            rng.shuffle(pool.begin(), pool.end());
            ks.assign(pool.begin(), pool.begin() + n);
        } else {
            const std::int64_t few[] = {8, 16, 24};
            for (int i = 0; i < n; ++i) ks.push_back(few[rng.below(3)]);
        }
        out.push_back(ks);
    }
    return out;
}

struct Tally {
    long cases = 0;
    long mismatches = 0;
    std::string first;

    void check(bool ok, const std::string& what) {
        ++cases;
        if (!ok) {
            if (mismatches == 0) first = what;
            ++mismatches;
        }
    }
};

std::string describe(const std::vector<oracle::Scored>& s) {
    std::string d;
    for (const auto& x : s) d += std::to_string(x.k) + "/32:" + std::to_string(x.label) + " ";
    return d;
}

// Runs every metric on every labeling of every score set and compares the
// library's double against the exactly rounded rational answer.
void exhaustive(bool distinct) {
    Tally f1, precision, recall, auc, prc, ece, brier;
    for (int n = 1; n <= 5; ++n) {
        for (const auto& ks : score_sets(n, distinct, 60, 100 + n + (distinct ? 0 : 50))) {
            for (int mask = 0; mask < (1 << n); ++mask) {
                std::vector<oracle::Scored> s;
                for (int i = 0; i < n; ++i) s.push_back({ks[i], 5, (mask >> i) & 1});
                const auto records = records_of(s);
                const std::string where = describe(s);

                const auto counts = oracle::confusion(s);
                const auto cm = metrics::classification_metrics(records);
                CHECK(cm.confusion.tp == counts.tp);
                CHECK(cm.confusion.fp == counts.fp);
                CHECK(cm.confusion.tn == counts.tn);
                CHECK(cm.confusion.fn == counts.fn);
                f1.check(cm.f1 == oracle::f1(counts).to_double(), where);
                precision.check(cm.precision == oracle::precision(counts).to_double(), where);
                recall.check(cm.recall == oracle::recall(counts).to_double(), where);

                const bool has_pos = mask != 0;
                const bool has_neg = mask != (1 << n) - 1;
                if (has_pos && has_neg) {
                    auc.check(metrics::auc(records) == oracle::auc(s).to_double(), where);
                } else {
                    CHECK_THROWS_AS(metrics::auc(records), metrics::UndefinedMetricError);
                }
                if (has_pos) {
                    prc.check(metrics::prc(records) == oracle::average_precision(s).to_double(), where);
                } else {
                    CHECK_THROWS_AS(metrics::prc(records), metrics::UndefinedMetricError);
                }
                ece.check(metrics::ece(records) == oracle::ece(s, metrics::kDefaultBins).to_double(), where);
                ece.check(metrics::ece(records, 4) == oracle::ece(s, 4).to_double(), where);
                brier.check(metrics::brier(records) == oracle::brier(s).to_double(), where);
            }
        }
    }
    auto report = [](const char* name, const Tally& t) {
        INFO(name << ": " << t.mismatches << " of " << t.cases << " differ; first: " << t.first);
        CHECK(t.cases > 0);
        CHECK(t.mismatches == 0);
    };
    report("f1", f1);
    report("precision", precision);
    report("recall", recall);
    report("auc", auc);
    report("prc", prc);
    report("ece", ece);
    report("brier", brier);
}

} // namespace

TEST_CASE("every metric matches the exact oracle on all labelings of distinct scores") {
    exhaustive(true);
}

TEST_CASE("every metric matches the exact oracle when scores tie") {
    exhaustive(false);
}

TEST_CASE("classification metrics by hand") {
    const std::vector<PredictionRecord> all_right{rec(0.9, 1), rec(0.1, 0), rec(0.6, 1)};
    const auto a = metrics::classification_metrics(all_right);
    CHECK(a.precision == 1.0);
    CHECK(a.recall == 1.0);
    CHECK(a.f1 == 1.0);

    const std::vector<PredictionRecord> half{rec(0.9, 1), rec(0.1, 1), rec(0.2, 0), rec(0.7, 0)};
    const auto h = metrics::classification_metrics(half);
    CHECK(h.precision == 0.5);
    CHECK(h.recall == 0.5);
    CHECK(h.f1 == 0.5);

    const std::vector<PredictionRecord> none{rec(0.1, 1), rec(0.2, 0)};
    const auto z = metrics::classification_metrics(none);
    CHECK(z.precision == 0.0);
    CHECK(z.recall == 0.0);
    CHECK(z.f1 == 0.0);
}

TEST_CASE("risk exactly at the threshold predicts positive") {
    CHECK(metrics::decide(0.5) == 1);
    CHECK(metrics::decide(std::nextafter(0.5, 0.0)) == 0);
}

TEST_CASE("f1 is the harmonic mean of precision and recall") {
    Rng rng(8);
    for (int t = 0; t < 500; ++t) {
        std::vector<PredictionRecord> r;
        const int n = 1 + int(rng.below(300));
        for (int i = 0; i < n; ++i) r.push_back(rec(rng.uniform(), rng.coin() ? 1 : 0));
        const auto m = metrics::classification_metrics(r);
        const double harmonic = m.precision + m.recall > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
        CHECK(m.f1 == doctest::Approx(harmonic).epsilon(1e-15));
    }
}

TEST_CASE("auc by hand") {
    const std::vector<PredictionRecord> separated{rec(0.9, 1), rec(0.8, 1), rec(0.3, 0)};
    CHECK(metrics::auc(separated) == 1.0);
    const std::vector<PredictionRecord> flat{rec(0.4, 1), rec(0.4, 0), rec(0.4, 0)};
    CHECK(metrics::auc(flat) == 0.5);
    const std::vector<PredictionRecord> mixed{rec(0.9, 1), rec(0.8, 0), rec(0.7, 1), rec(0.1, 0)};
    CHECK(metrics::auc(mixed) == 0.75);
    const std::vector<PredictionRecord> one_class{rec(0.9, 1), rec(0.8, 1)};
    CHECK_THROWS_AS(metrics::auc(one_class), metrics::UndefinedMetricError);
}

TEST_CASE("auc is unchanged by a strictly increasing transform") {
    Rng rng(4);
    std::vector<PredictionRecord> r, t;
    for (int i = 0; i < 200; ++i) {
        const double x = rng.uniform(0.01, 0.99);
        const int y = rng.uniform() < x ? 1 : 0;
        r.push_back(rec(x, y));
        t.push_back(rec(std::pow(x, 3.0), y));
    }
    CHECK(metrics::auc(r) == metrics::auc(t));
}

TEST_CASE("prc by hand") {
    const std::vector<PredictionRecord> separated{rec(0.9, 1), rec(0.8, 1), rec(0.3, 0)};
    CHECK(metrics::prc(separated) == 1.0);
    const std::vector<PredictionRecord> last{rec(0.9, 0), rec(0.8, 0), rec(0.7, 0), rec(0.1, 1)};
    CHECK(metrics::prc(last) == 0.25);
    const std::vector<PredictionRecord> flat{rec(0.3, 1), rec(0.3, 0), rec(0.3, 0), rec(0.3, 1), rec(0.3, 0)};
    CHECK(metrics::prc(flat) == 0.4);
    const std::vector<PredictionRecord> no_pos{rec(0.3, 0)};
    CHECK_THROWS_AS(metrics::prc(no_pos), metrics::UndefinedMetricError);
}

TEST_CASE("ece by hand") {
    const std::vector<PredictionRecord> two{rec(0.9, 1), rec(0.7, 0)};
    CHECK(metrics::ece(two) == doctest::Approx(0.4).epsilon(1e-15));
    const std::vector<PredictionRecord> one{rec(0.9, 1)};
    CHECK(metrics::ece(one) == doctest::Approx(0.1).epsilon(1e-14));
    // Each bin's mean risk equals its positive rate.
    const std::vector<PredictionRecord> calibrated{rec(0.5, 1), rec(0.5, 0), rec(0.25, 1), rec(0.25, 0),
                                                   rec(0.25, 0), rec(0.25, 0)};
    CHECK(metrics::ece(calibrated) == 0.0);
    CHECK_THROWS_AS(metrics::ece(two, 0), DomainError);
}

TEST_CASE("confidence calibration mode") {
    // Confidence 0.9 correct, confidence 0.7 wrong: |0.9 - 1| and |0.7 - 0| in separate bins.
    const std::vector<PredictionRecord> two{rec(0.9, 1), rec(0.3, 1)};
    CHECK(metrics::ece(two, 15, metrics::CalibrationMode::confidence) == doctest::Approx(0.4).epsilon(1e-15));
    const auto bins = metrics::reliability_bins(two, 10, metrics::CalibrationMode::confidence);
    CHECK(bins[9].count == 1);
    CHECK(bins[7].count == 1);
    CHECK(bins[7].observed == 0.0);
}

TEST_CASE("brier by hand") {
    const std::vector<PredictionRecord> exact{rec(1.0, 1), rec(0.0, 0)};
    CHECK(metrics::brier(exact) == 0.0);
    const std::vector<PredictionRecord> half{rec(0.5, 1)};
    CHECK(metrics::brier(half) == 0.25);
    const std::vector<PredictionRecord> two{rec(0.9, 1), rec(0.7, 0)};
    CHECK(metrics::brier(two) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("reliability bins cover [0, 1] and count every record") {
    Rng rng(12);
    std::vector<PredictionRecord> r;
    for (int i = 0; i < 1000; ++i) r.push_back(rec(rng.uniform(), rng.coin() ? 1 : 0));
    r.push_back(rec(1.0, 1));
    r.push_back(rec(0.0, 0));
    const auto bins = metrics::reliability_bins(r);
    REQUIRE(bins.size() == 15);
    long total = 0;
    for (std::size_t b = 0; b < bins.size(); ++b) {
        CHECK(bins[b].low == doctest::Approx(b / 15.0));
        CHECK(bins[b].high == doctest::Approx((b + 1) / 15.0));
        if (bins[b].count > 0) {
            CHECK(bins[b].mean_value >= bins[b].low - 1e-15);
            CHECK(bins[b].mean_value <= bins[b].high + 1e-15);
        }
        total += bins[b].count;
    }
    CHECK(total == long(r.size()));
}

TEST_CASE("metrics do not depend on record order") {
    Rng rng(21);
    std::vector<PredictionRecord> r;
    for (int i = 0; i < 300; ++i) {
        // Coarse risks so that the permutation reorders tie groups too.
        r.push_back(rec(std::floor(rng.uniform() * 20) / 20, rng.coin() ? 1 : 0, i));
    }
    const auto base = metrics::evaluate(r);
    for (int t = 0; t < 20; ++t) {
        rng.shuffle(r.begin(), r.end());
        CHECK(metrics::evaluate(r) == base);
    }
}

TEST_CASE("evaluate leaves undefined rank metrics empty") {
    const std::vector<PredictionRecord> negatives{rec(0.2, 0), rec(0.3, 0)};
    const auto rep = metrics::evaluate(negatives);
    CHECK_FALSE(rep.auc.has_value());
    CHECK_FALSE(rep.prc.has_value());
    CHECK(rep.n_positive == 0);
    CHECK_THROWS_AS(metrics::evaluate(std::vector<PredictionRecord>{}), metrics::UndefinedMetricError);
}

TEST_CASE("ensemble of identical members reproduces the member") {
    Rng rng(31);
    std::vector<PredictionRecord> member;
    for (int i = 0; i < 200; ++i) {
        auto r = rec(rng.uniform(0.01, 0.99), rng.coin() ? 1 : 0, i);
        r.std_dev = rng.uniform(0.01, 0.2);
        member.push_back(r);
    }
    for (int m : {2, 3, 5}) {
        const std::vector<std::vector<PredictionRecord>> members(m, member);
        const auto result = metrics::ensemble_eval(members);
        REQUIRE(result.report.ensemble.has_value());
        CHECK(result.report.ensemble->members == m);
        CHECK(result.report.ensemble->mean_variance == 0.0);
        CHECK(result.report.ensemble->disagreement_rate == 0.0);
        auto stripped = result.report;
        stripped.ensemble.reset();
        CHECK(stripped == metrics::evaluate(member));
        for (std::size_t i = 0; i < member.size(); ++i) {
            CHECK(result.records[i].risk == member[i].risk);
            CHECK(result.records[i].std_dev == member[i].std_dev);
        }
    }
}

TEST_CASE("ensemble hand example") {
    const std::vector<std::vector<PredictionRecord>> members{{rec(0.2, 1)}, {rec(0.4, 1)}, {rec(0.6, 1)}};
    const auto result = metrics::ensemble_eval(members);
    CHECK(result.records[0].risk == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(result.variance[0] == doctest::Approx(0.08 / 3.0).epsilon(1e-12));
    CHECK(std::fabs(result.variance[0] - 0.026667) <= 1e-6);
    CHECK(result.disagrees[0] == 1);
    CHECK(result.report.ensemble->disagreement_rate == 1.0);
}

TEST_CASE("ensemble disagreement rate counts samples") {
    std::vector<PredictionRecord> a{rec(0.9, 1, 0), rec(0.1, 0, 1), rec(0.8, 1, 2), rec(0.2, 0, 3)};
    auto b = a;
    b[2] = rec(0.3, 1, 2);
    const auto result = metrics::ensemble_eval({a, b});
    CHECK(result.report.ensemble->disagreement_rate == 0.25);
    CHECK(result.report.ensemble->members == 2);
}

TEST_CASE("ensemble input validation") {
    const std::vector<PredictionRecord> a{rec(0.9, 1, 0), rec(0.1, 0, 1)};
    CHECK_THROWS_AS(metrics::ensemble_eval({a}), metrics::UndefinedMetricError);
    auto shifted = a;
    shifted[1].sample_id = 7;
    CHECK_THROWS_AS(metrics::ensemble_eval({a, shifted}), StructuralError);
    const std::vector<PredictionRecord> shorter{rec(0.9, 1, 0)};
    CHECK_THROWS_AS(metrics::ensemble_eval({a, shorter}), StructuralError);
}

TEST_CASE("ensemble shapes match the mixture moments") {
    auto a = rec(0.3, 0, 0);
    a.std_dev = 0.1;
    auto b = rec(0.5, 0, 0);
    b.std_dev = 0.05;
    const auto result = metrics::ensemble_eval({{a}, {b}});
    const auto& e = result.records[0];
    const double mixture_var = (0.01 + 0.0025) / 2 + 0.01;
    CHECK(e.risk == doctest::Approx(0.4));
    CHECK(e.std_dev == doctest::Approx(std::sqrt(mixture_var)));
    CHECK(e.alpha / (e.alpha + e.beta) == doctest::Approx(0.4).epsilon(1e-12));
    const double k = e.alpha + e.beta;
    CHECK(e.alpha * e.beta / (k * k * (k + 1)) == doctest::Approx(mixture_var).epsilon(1e-12));
}
