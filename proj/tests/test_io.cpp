#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "betarisk/errors.hpp"
#include "betarisk/io.hpp"
#include "betarisk/random.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <sstream>

using namespace betarisk;
using namespace betarisk::io;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("betarisk_io_" + std::to_string(Rng(std::random_device{}()).next_u64()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string field_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

RunConfig unusual_config() {
    RunConfig c;
    c.data.n_samples = 321;
    c.data.positive_fraction = 0.4;
    c.data.noise_level = 0.1;
    c.data.seed = 77;
    c.val_fraction = 0.2;
    c.test_fraction = 0.1;
    c.train.epochs = 7;
    c.train.batch_size = 5;
    c.train.lr_dist_head = 0.013;
    c.train.weight_decay = 0.0;
    c.train.schedule = {3, 1, 1e-6};
    c.train.crop_area_min = 0.6;
    c.train.augment = false;
    c.train.seed = 9;
    c.train.loss.lambda1 = 10;
    c.train.loss.lambda2 = 0.1 + 0.2; // not a short decimal
    c.train.labels.epsilon = 1e-5;
    c.train.labels.positive_beta_mode = labelgen::PositiveBetaMode::mean_realizing;
    c.train.model.encoder_widths = {20, 10, 5};
    c.train.model.dist_head_hidden = {4};
    c.train.model.activation = net::Activation::tanh;
    return c;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

double parse(const std::string& s) {
    double v = 0;
    std::from_chars(s.data(), s.data() + s.size(), v);
    return v;
}

} // namespace

TEST_CASE("doubles print as the shortest round-trip text") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(22.0) == "22");
    CHECK(format_double(1e-5) == "1e-05");
    Rng rng(1);
    for (int i = 0; i < 10000; ++i) {
        const double v = std::ldexp(rng.uniform(-1, 1), rng.between(-60, 60));
        CHECK(parse(format_double(v)) == v);
    }
}

TEST_CASE("text files") {
    TempDir dir;
    const auto p = dir.path / "a" / "b" / "c.txt";
    write_text(p, "hello\n");
    CHECK(read_text(p) == "hello\n");
    CHECK_THROWS_AS(read_text(dir.path / "missing.txt"), IoError);
    // A regular file cannot be a parent directory.
    CHECK_THROWS_AS(write_text(p / "child.txt", "x"), IoError);
    try {
        read_text(dir.path / "missing.txt");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("missing.txt") != std::string::npos);
    }
}

TEST_CASE("run configurations round trip") {
    const auto c = unusual_config();
    const auto j = to_json(c);
    const auto back = run_config_from_json(j);
    CHECK(to_json(back) == j);
    CHECK(back.train.loss.lambda2 == c.train.loss.lambda2);
    CHECK(back.train.model.encoder_widths == c.train.model.encoder_widths);
    CHECK(back.data == c.data);
    CHECK(back.train.schedule == c.train.schedule);
    // Text round trip is byte stable.
    CHECK(dump(to_json(run_config_from_json(Json::parse(dump(j))))) == dump(j));
}

TEST_CASE("partial documents override only what they name") {
    const auto j = Json::parse(R"({"train": {"loss": {"lambda1": 1}, "epochs": 3}})");
    const auto c = run_config_from_json(j);
    CHECK(c.train.loss.lambda1 == 1.0);
    CHECK(c.train.loss.lambda2 == 1.0);
    CHECK(c.train.epochs == 3);
    CHECK(c.train.batch_size == 32);
    CHECK(c.data == synth::DatasetSpec{});
}

TEST_CASE("unknown and ill-typed settings name their path") {
    CHECK(field_of([] { run_config_from_json(Json::parse(R"({"trian": {}})")); }) == "trian");
    CHECK(field_of([] { run_config_from_json(Json::parse(R"({"train": {"loss": {"lambda3": 1}}})")); }) ==
          "train.loss.lambda3");
    CHECK(field_of([] { run_config_from_json(Json::parse(R"({"train": {"epochs": "many"}})")); }) ==
          "train.epochs");
    CHECK(field_of([] { run_config_from_json(Json::parse(R"({"train": {"epochs": 2.5}})")); }) ==
          "train.epochs");
    CHECK(field_of([] { run_config_from_json(Json::parse(R"({"data": {"seed": -1}})")); }) == "data.seed");
    CHECK(field_of([] {
              run_config_from_json(Json::parse(R"({"train": {"labels": {"positive_beta_mode": "odd"}}})"));
          }) == "train.labels.positive_beta_mode");
    CHECK(field_of([] { run_config_from_json(Json::parse(R"({"train": {"model": {"activation": "gelu"}}})")); }) ==
          "train.model.activation");
    CHECK(field_of([] { run_config_from_json(Json::parse("[1, 2]")); }) == "config");
}

TEST_CASE("run config cross checks") {
    RunConfig c;
    c.train.model.num_scales = 2;
    CHECK(field_of([&] { c.validate(); }) == "model.num_scales");
    c = {};
    c.train.model.feature_dim = 10;
    CHECK(field_of([&] { c.validate(); }) == "model.feature_dim");
    CHECK(field_of([] { RunConfig{}.validate(); }).empty());
}

TEST_CASE("checkpoints round trip exactly") {
    net::ModelConfig m;
    m.encoder_widths = {7, 3};
    m.cls_head_hidden = {2};
    Checkpoint c{net::init(m, 12), 4, 5, 6};
    c.state.group(net::Group::cls_head)[0] = 0.1 + 0.2;
    c.state.group(net::Group::backbone)[1] = -3.0e-300;
    const auto text = checkpoint_to_string(c);
    const auto back = checkpoint_from_string(text);
    CHECK(back.state == c.state);
    CHECK(back.epoch == 4);
    CHECK(back.data_seed == 5);
    CHECK(back.train_seed == 6);
    CHECK(checkpoint_to_string(back) == text);

    TempDir dir;
    save_checkpoint(dir.path / "m.json", c);
    CHECK(read_text(dir.path / "m.json") == text);
    CHECK(load_checkpoint(dir.path / "m.json").state == c.state);
    CHECK_THROWS_AS(load_checkpoint(dir.path / "none.json"), IoError);
}

TEST_CASE("malformed checkpoints are structural errors") {
    Checkpoint c{net::init(net::ModelConfig{}, 0), 0, 0, 0};
    auto j = Json::parse(checkpoint_to_string(c));
    CHECK_THROWS_AS(checkpoint_from_string("not json"), StructuralError);
    CHECK_THROWS_AS(checkpoint_from_string(dataset_to_string(Dataset::planned({}))), StructuralError);

    auto wrong_version = j;
    wrong_version["version"] = 999;
    CHECK_THROWS_AS(checkpoint_from_string(wrong_version.dump()), StructuralError);

    std::string group_key;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.value().is_object() && it.value().contains("backbone")) group_key = it.key();
    }
    REQUIRE_FALSE(group_key.empty());
    auto short_group = j;
    short_group[group_key]["backbone"].erase(0);
    CHECK_THROWS_AS(checkpoint_from_string(short_group.dump()), StructuralError);
    auto missing = j;
    missing[group_key].erase("cls_head");
    CHECK_THROWS_AS(checkpoint_from_string(missing.dump()), StructuralError);
    auto text_value = j;
    text_value[group_key]["dist_head"][0] = "x";
    CHECK_THROWS_AS(checkpoint_from_string(text_value.dump()), StructuralError);
}

TEST_CASE("datasets round trip and are byte stable") {
    synth::DatasetSpec spec;
    spec.n_samples = 57;
    spec.seed = 3;
    const auto d = Dataset::planned(spec);
    const auto text = dataset_to_string(d);
    CHECK(text == dataset_to_string(Dataset::planned(spec)));
    const auto back = dataset_from_string(text);
    CHECK(back.spec == spec);
    REQUIRE(back.records.size() == 57);
    for (std::size_t i = 0; i < 57; ++i) {
        CHECK(back.records[i].seed == d.records[i].seed);
        CHECK(back.records[i].label == d.records[i].label);
        CHECK(back.records[i].kind == d.records[i].kind);
        CHECK(back.records[i].location.lon == d.records[i].location.lon);
        CHECK(back.records[i].location.lat == d.records[i].location.lat);
    }
    CHECK(dataset_to_string(back) == text);
    CHECK(back.has_locations);
    // Grids come back from the seeds alone.
    const auto a = back.render();
    const auto b = synth::generate(spec);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].scales[2].values == b[i].scales[2].values);

    auto bare = d;
    bare.has_locations = false;
    const auto no_loc = dataset_from_string(dataset_to_string(bare));
    CHECK_FALSE(no_loc.has_locations);
}

TEST_CASE("inconsistent datasets are structural errors") {
    synth::DatasetSpec spec;
    spec.n_samples = 5;
    const auto j = Json::parse(dataset_to_string(Dataset::planned(spec)));
    auto extra = j;
    extra["samples"].push_back(extra["samples"][0]);
    CHECK_THROWS_AS(dataset_from_string(extra.dump()), StructuralError);
    auto flipped = j;
    flipped["samples"][0]["label"] = 1 - flipped["samples"][0]["label"].get<int>();
    CHECK_THROWS_AS(dataset_from_string(flipped.dump()), StructuralError);
    auto half = j;
    half["samples"][1].erase("lat");
    CHECK_THROWS_AS(dataset_from_string(half.dump()), StructuralError);
    auto some = j;
    some["samples"][1].erase("lat");
    some["samples"][1].erase("lon");
    CHECK_THROWS_AS(dataset_from_string(some.dump()), StructuralError);
}

TEST_CASE("prediction CSV") {
    std::vector<metrics::PredictionRecord> recs;
    Rng rng(2);
    for (int i = 0; i < 50; ++i) {
        const betadist::BetaParams p(rng.uniform(0.01, 30), rng.uniform(0.01, 30));
        recs.push_back(metrics::PredictionRecord::from(i, i % 2, net::RiskPrediction{betadist::mean(p), p,
                                                                                     betadist::std_dev(p)}));
    }
    const auto lines = split_lines(predictions_csv(recs));
    REQUIRE(lines.size() == 51);
    CHECK(lines[0] == "id,label,alpha,beta,risk,std_dev,binary");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::vector<std::string> cells;
        std::istringstream row(lines[i]);
        for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
        REQUIRE(cells.size() == 7);
        const double a = parse(cells[2]), b = parse(cells[3]), risk = parse(cells[4]);
        CHECK(risk == a / (a + b));
        CHECK(cells[6] == (risk >= 0.5 ? "1" : "0"));
    }
}

TEST_CASE("reports and logs") {
    std::vector<metrics::PredictionRecord> recs(4);
    for (int i = 0; i < 4; ++i) {
        recs[i].sample_id = i;
        recs[i].label = 0;
        recs[i].risk = 0.1 * (i + 1);
        recs[i].binary_pred = 0;
    }
    const auto j = to_json(metrics::evaluate(recs));
    CHECK(j["auc"].is_null());
    CHECK(j["prc"].is_null());
    CHECK(j["n_samples"] == 4);
    CHECK(j["reliability"].size() == j["calibration"]["bins"].get<std::size_t>());
    CHECK_FALSE(j.contains("ensemble"));

    train::EpochRecord r;
    r.stats.epoch = 3;
    r.stats.rates = {1e-4, 0.02, 1e-4};
    r.val_accuracy = 0.75;
    const auto line = epoch_log_line(r);
    CHECK(line.find('\n') == std::string::npos);
    const auto parsed = Json::parse(line);
    CHECK(parsed["epoch"] == 3);
    CHECK(parsed["lr"]["dist_head"] == 0.02);
    CHECK(parsed["val_accuracy"] == 0.75);
}
