#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "betarisk/beta_dist.hpp"
#include "betarisk/errors.hpp"
#include "betarisk/label_gen.hpp"
#include "betarisk/random.hpp"

#include <cmath>

using namespace betarisk;
using namespace betarisk::labelgen;

TEST_CASE("crop geometry validation") {
    CHECK_NOTHROW(CropGeometry::full(64).validate());
    CHECK_THROWS_AS((CropGeometry{64, 0, 0, 0}).validate(), StructuralError);
    CHECK_THROWS_AS((CropGeometry{64, 65, 0, 0}).validate(), StructuralError);
    CHECK_THROWS_AS((CropGeometry{64, 32, 33, 0}).validate(), StructuralError);
    CHECK_THROWS_AS((CropGeometry{64, 32, 0, -1}).validate(), StructuralError);
    CHECK_NOTHROW((CropGeometry{64, 32, 32, 32}).validate());
}

TEST_CASE("defaults") {
    const LabelGenConfig c;
    CHECK(c.base_K == 22.0);
    CHECK(c.epsilon == 1e-5);
    CHECK(c.mu_min == 0.18);
    CHECK(c.k_min == 18.0);
    CHECK(c.w_dist == 0.7);
    CHECK(c.w_size == 0.3);
    CHECK(c.positive_beta_mode == PositiveBetaMode::verbatim);
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("config validation names the field") {
    LabelGenConfig c;
    c.w_size = 0.4;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.k_min = 30.0;
    try {
        c.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "k_min");
    }
    c = {};
    c.epsilon = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.mu_min = 1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("normalized distance") {
    CHECK(normalized_distance(CropGeometry::centered(64, 32)) == 0.0);
    CHECK(normalized_distance(CropGeometry::centered(768, 500)) == 0.0);
    CHECK(normalized_distance({768, 384, 0, 0}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(normalized_distance(CropGeometry::full(768)) == 0.0);
    // A one-pixel crop in the corner approaches 1 from below.
    const double corner = normalized_distance({1000, 1, 0, 0});
    CHECK(corner < 1.0);
    CHECK(corner > 0.99);
}

TEST_CASE("normalized size is an area ratio") {
    CHECK(normalized_size(CropGeometry::full(64)) == 1.0);
    CHECK(normalized_size({768, 384, 0, 0}) == 0.25);
    CHECK(normalized_size(CropGeometry::centered(64, 45)) == 2025.0 / 4096.0);
}

TEST_CASE("influence examples") {
    const LabelGenConfig c;
    CHECK(influence(CropGeometry::full(64), c) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(influence_from(1.0, 0.5, c) == doctest::Approx(0.15).epsilon(1e-14));
    CHECK(influence_from(0.5, 0.25, c) == doctest::Approx(0.425).epsilon(1e-14));
}

TEST_CASE("target examples") {
    const LabelGenConfig c;
    const auto neg = make_target(0, CropGeometry::full(64), c);
    CHECK(std::fabs(neg.alpha() - 1e-5) <= 1e-9);
    CHECK(std::fabs(neg.beta() - 22.0) <= 1e-9);

    const auto full = make_target(1, CropGeometry::full(64), c);
    CHECK(std::fabs(full.alpha() - 22.0) <= 1e-9);
    CHECK(std::fabs(full.beta() - 1e-5) <= 1e-9);

    const auto [mu, k] = positive_target(influence_from(1.0, 0.5, c), c);
    CHECK(std::fabs(mu - 0.303) <= 1e-12);
    CHECK(std::fabs(k - 18.6) <= 1e-12);
    const auto far = make_target_from_influence(1, influence_from(1.0, 0.5, c), c);
    CHECK(std::fabs(far.alpha() - 5.6358) <= 1e-9);
    CHECK(std::fabs(far.beta() - 1e-5) <= 1e-9);
}

TEST_CASE("labels other than 0 and 1 are rejected") {
    const LabelGenConfig c;
    CHECK_THROWS_AS(make_target(2, CropGeometry::full(64), c), DomainError);
    CHECK_THROWS_AS(make_target(-1, CropGeometry::full(64), c), DomainError);
    CHECK_THROWS_AS(make_target_from_influence(3, 0.5, c), DomainError);
}

TEST_CASE("negative targets ignore geometry") {
    const LabelGenConfig c;
    Rng rng(1);
    const auto ref = make_target(0, CropGeometry::full(64), c);
    for (int i = 0; i < 200; ++i) {
        const int size = rng.between(1, 64);
        const CropGeometry g{64, size, rng.between(0, 64 - size), rng.between(0, 64 - size)};
        CHECK(make_target(0, g, c) == ref);
    }
}

TEST_CASE("influence, mean and concentration are monotone") {
    const LabelGenConfig c;
    for (int i = 0; i < 100; ++i) {
        const double d = i / 100.0;
        const double d2 = (i + 1) / 100.0;
        CHECK(influence_from(d2, 0.5, c) < influence_from(d, 0.5, c));
        CHECK(influence_from(0.3, d2, c) > influence_from(0.3, d, c));
        const auto lo = positive_target(d, c);
        const auto hi = positive_target(d2, c);
        CHECK(hi.mu > lo.mu);
        CHECK(hi.k > lo.k);
    }
}

TEST_CASE("influence stays in [0, 1] and targets stay valid") {
    Rng rng(2);
    for (auto mode : {PositiveBetaMode::verbatim, PositiveBetaMode::mean_realizing}) {
        LabelGenConfig c;
        c.positive_beta_mode = mode;
        for (int i = 0; i < 2000; ++i) {
            const int source = rng.between(1, 256);
            const int size = rng.between(1, source);
            const CropGeometry g{source, size, rng.between(0, source - size), rng.between(0, source - size)};
            const double inf = influence(g, c);
            CHECK(inf >= 0.0);
            CHECK(inf <= 1.0 + 1e-15);
            const auto t = make_target(1, g, c);
            CHECK(t.alpha() > 0.0);
            CHECK(t.beta() > 0.0);
        }
    }
}

TEST_CASE("mean-realizing targets have mean mu") {
    LabelGenConfig c;
    c.positive_beta_mode = PositiveBetaMode::mean_realizing;
    for (int i = 0; i < 100; ++i) {
        const double inf = i / 100.0; // below full influence, where 1 - mu > 0
        const auto [mu, k] = positive_target(inf, c);
        const auto t = make_target_from_influence(1, inf, c);
        CHECK(std::fabs(betadist::mean(t) - mu) <= 1e-12);
        CHECK(t.concentration() == doctest::Approx(k).epsilon(1e-14));
    }
    // At full influence mu = 1; beta is held at epsilon to stay a valid shape.
    const auto full = make_target_from_influence(1, 1.0, c);
    CHECK(full.beta() == c.epsilon);
}

TEST_CASE("verbatim positives keep beta at epsilon") {
    const LabelGenConfig c;
    for (int i = 0; i <= 10; ++i) {
        const auto t = make_target_from_influence(1, i / 10.0, c);
        CHECK(t.beta() == c.epsilon);
        CHECK(betadist::mean(t) > 0.99999);
    }
}
