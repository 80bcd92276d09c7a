#pragma once

#include "betarisk/metrics.hpp"
#include "betarisk/net.hpp"
#include "betarisk/synth_data.hpp"
#include "betarisk/trainer.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace betarisk::io {

using Json = nlohmann::ordered_json;

// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

std::string read_text(const std::filesystem::path& path);
// Creates parent directories. Throws IoError naming the path.
void write_text(const std::filesystem::path& path, const std::string& text);

// Pretty-printed, newline-terminated.
std::string dump(const Json& j);

// ---- configuration ----

// Everything a training run depends on. A run is reproducible from this alone:
// the corpus is regenerated from `data`.
struct RunConfig {
    synth::DatasetSpec data;
    train::TrainConfig train;
    double val_fraction = 0.15;
    double test_fraction = 0.15;

    void validate() const;
};

Json to_json(const synth::DatasetSpec& s);
Json to_json(const net::ModelConfig& c);
Json to_json(const labelgen::LabelGenConfig& c);
Json to_json(const loss::LossWeights& w);
Json to_json(const train::TrainConfig& c);
Json to_json(const RunConfig& c);

// Readers start from `base` and overwrite only the keys present; unknown keys
// and ill-typed values raise ConfigError naming the dotted field path.
synth::DatasetSpec dataset_spec_from_json(const Json& j, synth::DatasetSpec base = {});
net::ModelConfig model_config_from_json(const Json& j, net::ModelConfig base = {});
labelgen::LabelGenConfig label_config_from_json(const Json& j, labelgen::LabelGenConfig base = {});
loss::LossWeights loss_weights_from_json(const Json& j, loss::LossWeights base = {});
train::TrainConfig train_config_from_json(const Json& j, train::TrainConfig base = {});
RunConfig run_config_from_json(const Json& j, RunConfig base = {});

std::string to_string(net::Activation a);
std::string to_string(labelgen::PositiveBetaMode m);
std::string to_string(metrics::CalibrationMode m);
labelgen::PositiveBetaMode positive_beta_mode_from_string(const std::string& s);
metrics::CalibrationMode calibration_mode_from_string(const std::string& s);

// ---- checkpoints ----

struct Checkpoint {
    net::ModelState state;
    int epoch = 0; // 0 is the initial state
    std::uint64_t data_seed = 0;
    std::uint64_t train_seed = 0;
};

std::string checkpoint_to_string(const Checkpoint& c);
// Throws StructuralError when the document does not describe a model.
Checkpoint checkpoint_from_string(const std::string& text);
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// ---- datasets ----

struct Dataset {
    synth::DatasetSpec spec;
    std::vector<synth::SampleRecord> records;
    bool has_locations = true;

    static Dataset planned(const synth::DatasetSpec& spec);
    std::vector<synth::Scene> render() const;
};

std::string dataset_to_string(const Dataset& d);
Dataset dataset_from_string(const std::string& text);
void save_dataset(const std::filesystem::path& path, const Dataset& d);
Dataset load_dataset(const std::filesystem::path& path);

// ---- reports and logs ----

Json to_json(const metrics::EvalReport& r);
// One compact JSON object, no trailing newline.
std::string epoch_log_line(const train::EpochRecord& r);

std::string predictions_csv(const std::vector<metrics::PredictionRecord>& records);
std::string reliability_csv(const std::vector<metrics::ReliabilityBin>& bins);

} // namespace betarisk::io
