#include "betarisk/io.hpp"

#include "betarisk/errors.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace betarisk::io {

namespace fs = std::filesystem;

namespace {

constexpr const char* kCheckpointFormat = "betarisk.checkpoint";
constexpr const char* kDatasetFormat = "betarisk.dataset";
constexpr int kFormatVersion = 1;

// Reads the keys of one JSON object into typed fields and rejects leftovers.
class FieldReader {
public:
    FieldReader(const Json& j, std::string prefix) : m_j(j), m_prefix(std::move(prefix)) {
        if (!m_j.is_object()) {
            throw ConfigError(m_prefix.empty() ? "config" : m_prefix, "expected an object");
        }
    }

    void read(const char* key, double& out) {
        if (const Json* v = take(key)) {
            if (!v->is_number()) throw ConfigError(path(key), "expected a number");
            out = v->get<double>();
        }
    }

    void read(const char* key, int& out) {
        if (const Json* v = take(key)) {
            if (!v->is_number_integer()) throw ConfigError(path(key), "expected an integer");
            const auto x = v->get<long long>();
            if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
                throw ConfigError(path(key), "integer out of range");
            }
            out = static_cast<int>(x);
        }
    }

    void read(const char* key, std::uint64_t& out) {
        if (const Json* v = take(key)) {
            if (!v->is_number_unsigned()) {
                throw ConfigError(path(key), "expected a non-negative integer");
            }
            out = v->get<std::uint64_t>();
        }
    }

    void read(const char* key, bool& out) {
        if (const Json* v = take(key)) {
            if (!v->is_boolean()) throw ConfigError(path(key), "expected true or false");
            out = v->get<bool>();
        }
    }

    void read(const char* key, std::string& out) {
        if (const Json* v = take(key)) {
            if (!v->is_string()) throw ConfigError(path(key), "expected a string");
            out = v->get<std::string>();
        }
    }

    void read(const char* key, std::vector<int>& out) {
        if (const Json* v = take(key)) {
            if (!v->is_array()) throw ConfigError(path(key), "expected an array of integers");
            out.clear();
            for (const auto& e : *v) {
                if (!e.is_number_integer()) throw ConfigError(path(key), "expected an array of integers");
                out.push_back(e.get<int>());
            }
        }
    }

    void read_pair(const char* key, double& first, double& second) {
        if (const Json* v = take(key)) {
            if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number()) {
                throw ConfigError(path(key), "expected a pair of numbers");
            }
            first = (*v)[0].get<double>();
            second = (*v)[1].get<double>();
        }
    }

    const Json* object(const char* key) { return take(key); }

    std::string path(const char* key) const { return m_prefix.empty() ? key : m_prefix + "." + key; }

    void finish() const {
        for (const auto& [key, value] : m_j.items()) {
            if (!m_seen.count(key)) throw ConfigError(path(key.c_str()), "unknown setting");
        }
    }

private:
    const Json* take(const char* key) {
        m_seen.insert(key);
        auto it = m_j.find(key);
        return it == m_j.end() ? nullptr : &*it;
    }

    const Json& m_j;
    std::string m_prefix;
    std::set<std::string> m_seen;
};

std::string join(const std::string& prefix, const char* key) {
    return prefix.empty() ? key : prefix + "." + key;
}

net::Activation activation_from_string(const std::string& s, const std::string& field) {
    if (s == "rectifier") return net::Activation::rectifier;
    if (s == "tanh") return net::Activation::tanh;
    throw ConfigError(field, "unknown activation '" + s + "'");
}

// Structural checks for documents we wrote ourselves.
const Json& require(const Json& j, const char* key, const std::string& what) {
    auto it = j.find(key);
    if (it == j.end()) throw StructuralError(what + " is missing '" + key + "'");
    return *it;
}

Json parse_document(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw StructuralError(what + " is not valid JSON: " + e.what());
    }
}

void check_format(const Json& j, const char* format, const std::string& what) {
    if (!j.is_object() || !j.contains("format") || j["format"] != format) {
        throw StructuralError(what + " does not declare format '" + std::string(format) + "'");
    }
    if (!j.contains("version") || j["version"] != kFormatVersion) {
        throw StructuralError(what + " has an unsupported format version");
    }
}

// CSV writers share this: shortest round-trip text, no locale.
void csv_number(std::string& out, double v) { out += format_double(v); }

} // namespace

std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error reading '" + path.string() + "'");
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory '" + path.parent_path().string() +
                          "': " + ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("error writing '" + path.string() + "'");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---- configuration ----

void RunConfig::validate() const {
    data.validate();
    train.validate();
    if (!(val_fraction > 0.0 && test_fraction > 0.0 && val_fraction + test_fraction < 1.0)) {
        throw ConfigError("val_fraction", "val and test fractions must be positive and sum below 1");
    }
    if (train.model.num_scales != data.num_scales) {
        throw ConfigError("model.num_scales", "must equal data.num_scales");
    }
    if (train.model.feature_dim != synth::kFeaturesPerScale) {
        throw ConfigError("model.feature_dim",
                          "must equal " + std::to_string(synth::kFeaturesPerScale) +
                              ", the pooled feature count per scale");
    }
}

std::string to_string(net::Activation a) {
    return a == net::Activation::tanh ? "tanh" : "rectifier";
}

std::string to_string(labelgen::PositiveBetaMode m) {
    return m == labelgen::PositiveBetaMode::mean_realizing ? "mean_realizing" : "verbatim";
}

std::string to_string(metrics::CalibrationMode m) {
    return m == metrics::CalibrationMode::confidence ? "confidence" : "positive_class";
}

labelgen::PositiveBetaMode positive_beta_mode_from_string(const std::string& s) {
    if (s == "verbatim") return labelgen::PositiveBetaMode::verbatim;
    if (s == "mean_realizing") return labelgen::PositiveBetaMode::mean_realizing;
    throw ConfigError("positive_beta_mode", "expected verbatim or mean_realizing, got '" + s + "'");
}

metrics::CalibrationMode calibration_mode_from_string(const std::string& s) {
    if (s == "positive_class") return metrics::CalibrationMode::positive_class;
    if (s == "confidence") return metrics::CalibrationMode::confidence;
    throw ConfigError("calibration_mode", "expected positive_class or confidence, got '" + s + "'");
}

Json to_json(const synth::DatasetSpec& s) {
    Json j;
    j["n_samples"] = s.n_samples;
    j["positive_fraction"] = s.positive_fraction;
    j["hard_negative_fraction"] = s.hard_negative_fraction;
    j["noise_level"] = s.noise_level;
    j["seed"] = s.seed;
    j["grid_size"] = s.grid_size;
    j["num_scales"] = s.num_scales;
    return j;
}

Json to_json(const net::ModelConfig& c) {
    Json j;
    j["num_scales"] = c.num_scales;
    j["feature_dim"] = c.feature_dim;
    j["encoder_widths"] = c.encoder_widths;
    j["dist_head_hidden"] = c.dist_head_hidden;
    j["cls_head_hidden"] = c.cls_head_hidden;
    j["activation"] = to_string(c.activation);
    j["alpha_beta_floor"] = c.alpha_beta_floor;
    return j;
}

Json to_json(const labelgen::LabelGenConfig& c) {
    Json j;
    j["base_K"] = c.base_K;
    j["epsilon"] = c.epsilon;
    j["mu_min"] = c.mu_min;
    j["k_min"] = c.k_min;
    j["w_dist"] = c.w_dist;
    j["w_size"] = c.w_size;
    j["positive_beta_mode"] = to_string(c.positive_beta_mode);
    return j;
}

Json to_json(const loss::LossWeights& w) {
    Json j;
    j["lambda1"] = w.lambda1;
    j["lambda2"] = w.lambda2;
    j["class_weights"] = Json::array({w.class_weights[0], w.class_weights[1]});
    return j;
}

Json to_json(const train::TrainConfig& c) {
    Json j;
    j["epochs"] = c.epochs;
    j["batch_size"] = c.batch_size;
    j["lr_backbone"] = c.lr_backbone;
    j["lr_dist_head"] = c.lr_dist_head;
    j["lr_cls_head"] = c.lr_cls_head;
    j["weight_decay"] = c.weight_decay;
    j["schedule"] = Json{{"T0", c.schedule.T0}, {"Tmult", c.schedule.Tmult}, {"eta_min", c.schedule.eta_min}};
    j["adamw"] = Json{{"beta1", c.adamw.beta1}, {"beta2", c.adamw.beta2}, {"delta", c.adamw.delta}};
    j["crop_area_range"] = Json::array({c.crop_area_min, c.crop_area_max});
    j["augment"] = c.augment;
    j["seed"] = c.seed;
    j["loss"] = to_json(c.loss);
    j["labels"] = to_json(c.labels);
    j["model"] = to_json(c.model);
    return j;
}

Json to_json(const RunConfig& c) {
    Json j;
    j["data"] = to_json(c.data);
    j["split"] = Json{{"val_fraction", c.val_fraction}, {"test_fraction", c.test_fraction}};
    j["train"] = to_json(c.train);
    return j;
}

namespace {

synth::DatasetSpec read_dataset_spec(const Json& j, synth::DatasetSpec s, const std::string& prefix) {
    FieldReader r(j, prefix);
    r.read("n_samples", s.n_samples);
    r.read("positive_fraction", s.positive_fraction);
    r.read("hard_negative_fraction", s.hard_negative_fraction);
    r.read("noise_level", s.noise_level);
    r.read("seed", s.seed);
    r.read("grid_size", s.grid_size);
    r.read("num_scales", s.num_scales);
    r.finish();
    return s;
}

net::ModelConfig read_model_config(const Json& j, net::ModelConfig c, const std::string& prefix) {
    FieldReader r(j, prefix);
    r.read("num_scales", c.num_scales);
    r.read("feature_dim", c.feature_dim);
    r.read("encoder_widths", c.encoder_widths);
    r.read("dist_head_hidden", c.dist_head_hidden);
    r.read("cls_head_hidden", c.cls_head_hidden);
    std::string activation = to_string(c.activation);
    r.read("activation", activation);
    c.activation = activation_from_string(activation, join(prefix, "activation"));
    r.read("alpha_beta_floor", c.alpha_beta_floor);
    r.finish();
    return c;
}

labelgen::LabelGenConfig read_label_config(const Json& j, labelgen::LabelGenConfig c,
                                           const std::string& prefix) {
    FieldReader r(j, prefix);
    r.read("base_K", c.base_K);
    r.read("epsilon", c.epsilon);
    r.read("mu_min", c.mu_min);
    r.read("k_min", c.k_min);
    r.read("w_dist", c.w_dist);
    r.read("w_size", c.w_size);
    std::string mode = to_string(c.positive_beta_mode);
    r.read("positive_beta_mode", mode);
    try {
        c.positive_beta_mode = positive_beta_mode_from_string(mode);
    } catch (const ConfigError& e) {
        throw ConfigError(join(prefix, "positive_beta_mode"), e.what());
    }
    r.finish();
    return c;
}

loss::LossWeights read_loss_weights(const Json& j, loss::LossWeights w, const std::string& prefix) {
    FieldReader r(j, prefix);
    r.read("lambda1", w.lambda1);
    r.read("lambda2", w.lambda2);
    r.read_pair("class_weights", w.class_weights[0], w.class_weights[1]);
    r.finish();
    return w;
}

train::TrainConfig read_train_config(const Json& j, train::TrainConfig c, const std::string& prefix) {
    FieldReader r(j, prefix);
    r.read("epochs", c.epochs);
    r.read("batch_size", c.batch_size);
    r.read("lr_backbone", c.lr_backbone);
    r.read("lr_dist_head", c.lr_dist_head);
    r.read("lr_cls_head", c.lr_cls_head);
    r.read("weight_decay", c.weight_decay);
    if (const Json* s = r.object("schedule")) {
        FieldReader sr(*s, join(prefix, "schedule"));
        sr.read("T0", c.schedule.T0);
        sr.read("Tmult", c.schedule.Tmult);
        sr.read("eta_min", c.schedule.eta_min);
        sr.finish();
    }
    if (const Json* a = r.object("adamw")) {
        FieldReader ar(*a, join(prefix, "adamw"));
        ar.read("beta1", c.adamw.beta1);
        ar.read("beta2", c.adamw.beta2);
        ar.read("delta", c.adamw.delta);
        ar.finish();
    }
    r.read_pair("crop_area_range", c.crop_area_min, c.crop_area_max);
    r.read("augment", c.augment);
    r.read("seed", c.seed);
    if (const Json* l = r.object("loss")) c.loss = read_loss_weights(*l, c.loss, join(prefix, "loss"));
    if (const Json* l = r.object("labels")) c.labels = read_label_config(*l, c.labels, join(prefix, "labels"));
    if (const Json* m = r.object("model")) c.model = read_model_config(*m, c.model, join(prefix, "model"));
    r.finish();
    return c;
}

} // namespace

synth::DatasetSpec dataset_spec_from_json(const Json& j, synth::DatasetSpec base) {
    return read_dataset_spec(j, std::move(base), "");
}

net::ModelConfig model_config_from_json(const Json& j, net::ModelConfig base) {
    return read_model_config(j, std::move(base), "");
}

labelgen::LabelGenConfig label_config_from_json(const Json& j, labelgen::LabelGenConfig base) {
    return read_label_config(j, base, "");
}

loss::LossWeights loss_weights_from_json(const Json& j, loss::LossWeights base) {
    return read_loss_weights(j, base, "");
}

train::TrainConfig train_config_from_json(const Json& j, train::TrainConfig base) {
    return read_train_config(j, std::move(base), "");
}

RunConfig run_config_from_json(const Json& j, RunConfig c) {
    FieldReader r(j, "");
    if (const Json* d = r.object("data")) c.data = read_dataset_spec(*d, c.data, "data");
    if (const Json* s = r.object("split")) {
        FieldReader sr(*s, "split");
        sr.read("val_fraction", c.val_fraction);
        sr.read("test_fraction", c.test_fraction);
        sr.finish();
    }
    if (const Json* t = r.object("train")) c.train = read_train_config(*t, c.train, "train");
    r.finish();
    return c;
}

// ---- checkpoints ----

std::string checkpoint_to_string(const Checkpoint& c) {
    Json j;
    j["format"] = kCheckpointFormat;
    j["version"] = kFormatVersion;
    j["epoch"] = c.epoch;
    j["data_seed"] = c.data_seed;
    j["train_seed"] = c.train_seed;
    j["model_config"] = to_json(c.state.config());
    Json groups = Json::object();
    for (net::Group g : net::kGroups) {
        const auto p = c.state.group(g);
        groups[std::string(net::group_name(g))] = std::vector<double>(p.begin(), p.end());
    }
    j["groups"] = std::move(groups);
    return dump(j);
}

Checkpoint checkpoint_from_string(const std::string& text) {
    const std::string what = "checkpoint";
    const Json j = parse_document(text, what);
    check_format(j, kCheckpointFormat, what);
    net::ModelConfig config;
    try {
        config = model_config_from_json(require(j, "model_config", what));
        config.validate();
    } catch (const ConfigError& e) {
        throw StructuralError("checkpoint model_config is invalid: " + std::string(e.what()));
    }
    Checkpoint c{net::ModelState(config), 0, 0, 0};
    const Json& epoch = require(j, "epoch", what);
    const Json& data_seed = require(j, "data_seed", what);
    const Json& train_seed = require(j, "train_seed", what);
    if (!epoch.is_number_integer() || !data_seed.is_number_unsigned() || !train_seed.is_number_unsigned()) {
        throw StructuralError("checkpoint epoch and seeds must be non-negative integers");
    }
    c.epoch = epoch.get<int>();
    c.data_seed = data_seed.get<std::uint64_t>();
    c.train_seed = train_seed.get<std::uint64_t>();

    const Json& groups = require(j, "groups", what);
    if (!groups.is_object() || groups.size() != net::kGroups.size()) {
        throw StructuralError("checkpoint must hold exactly the groups backbone, dist_head, cls_head");
    }
    for (net::Group g : net::kGroups) {
        const std::string name(net::group_name(g));
        const Json& values = require(groups, name.c_str(), what);
        auto dest = c.state.group(g);
        if (!values.is_array() || values.size() != dest.size()) {
            throw StructuralError("checkpoint group '" + name + "' has " +
                                  std::to_string(values.is_array() ? values.size() : 0) +
                                  " values, the model config needs " + std::to_string(dest.size()));
        }
        for (std::size_t k = 0; k < dest.size(); ++k) {
            if (!values[k].is_number()) {
                throw StructuralError("checkpoint group '" + name + "' holds a non-number");
            }
            dest[k] = values[k].get<double>();
        }
    }
    return c;
}

void save_checkpoint(const fs::path& path, const Checkpoint& c) {
    write_text(path, checkpoint_to_string(c));
}

Checkpoint load_checkpoint(const fs::path& path) {
    return checkpoint_from_string(read_text(path));
}

// ---- datasets ----

Dataset Dataset::planned(const synth::DatasetSpec& spec) {
    return Dataset{spec, synth::plan(spec), true};
}

std::vector<synth::Scene> Dataset::render() const {
    std::vector<synth::Scene> scenes;
    scenes.reserve(records.size());
    for (const auto& r : records) scenes.push_back(synth::render(r, spec));
    return scenes;
}

std::string dataset_to_string(const Dataset& d) {
    Json j;
    j["format"] = kDatasetFormat;
    j["version"] = kFormatVersion;
    j["spec"] = to_json(d.spec);
    Json samples = Json::array();
    for (const auto& r : d.records) {
        Json s;
        s["id"] = r.id;
        s["label"] = r.label;
        s["kind"] = synth::to_string(r.kind);
        if (d.has_locations) {
            s["lon"] = r.location.lon;
            s["lat"] = r.location.lat;
        }
        s["seed"] = r.seed;
        samples.push_back(std::move(s));
    }
    j["samples"] = std::move(samples);
    return dump(j);
}

Dataset dataset_from_string(const std::string& text) {
    const std::string what = "dataset";
    const Json j = parse_document(text, what);
    check_format(j, kDatasetFormat, what);
    Dataset d;
    try {
        d.spec = dataset_spec_from_json(require(j, "spec", what));
        d.spec.validate();
    } catch (const ConfigError& e) {
        throw StructuralError("dataset spec is invalid: " + std::string(e.what()));
    }
    const Json& samples = require(j, "samples", what);
    if (!samples.is_array() || static_cast<long>(samples.size()) != d.spec.n_samples) {
        throw StructuralError("dataset must list exactly n_samples = " +
                              std::to_string(d.spec.n_samples) + " samples");
    }
    int with_location = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Json& s = samples[i];
        const std::string at = "dataset sample " + std::to_string(i);
        synth::SampleRecord r;
        const Json& id = require(s, "id", at);
        const Json& label = require(s, "label", at);
        const Json& kind = require(s, "kind", at);
        const Json& seed = require(s, "seed", at);
        if (!id.is_number_integer() || !label.is_number_integer() || !kind.is_string() ||
            !seed.is_number_unsigned()) {
            throw StructuralError(at + " has ill-typed fields");
        }
        r.id = id.get<int>();
        r.label = label.get<int>();
        r.kind = synth::scene_kind_from_string(kind.get<std::string>());
        r.seed = seed.get<std::uint64_t>();
        if (r.id != static_cast<int>(i)) throw StructuralError(at + " has id " + std::to_string(r.id));
        if (r.label != (r.kind == synth::SceneKind::positive ? 1 : 0)) {
            throw StructuralError(at + " has a label inconsistent with its kind");
        }
        const bool has_lon = s.contains("lon"), has_lat = s.contains("lat");
        if (has_lon != has_lat) throw StructuralError(at + " has only one coordinate");
        if (has_lon) {
            if (!s["lon"].is_number() || !s["lat"].is_number()) {
                throw StructuralError(at + " has non-numeric coordinates");
            }
            r.location.lon = s["lon"].get<double>();
            r.location.lat = s["lat"].get<double>();
            ++with_location;
        }
        d.records.push_back(r);
    }
    if (with_location != 0 && with_location != d.spec.n_samples) {
        throw StructuralError("dataset gives locations for only some samples");
    }
    d.has_locations = with_location == d.spec.n_samples;
    return d;
}

void save_dataset(const fs::path& path, const Dataset& d) { write_text(path, dataset_to_string(d)); }

Dataset load_dataset(const fs::path& path) { return dataset_from_string(read_text(path)); }

// ---- reports and logs ----

Json to_json(const metrics::EvalReport& r) {
    Json j;
    j["n_samples"] = r.n_samples;
    j["n_positive"] = r.n_positive;
    j["f1"] = r.classification.f1;
    j["precision"] = r.classification.precision;
    j["recall"] = r.classification.recall;
    const auto& c = r.classification.confusion;
    j["confusion"] = Json{{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
    j["auc"] = r.auc ? Json(*r.auc) : Json(nullptr);
    j["prc"] = r.prc ? Json(*r.prc) : Json(nullptr);
    j["ece"] = r.ece;
    j["brier"] = r.brier;
    j["calibration"] = Json{{"bins", r.bins}, {"mode", to_string(r.mode)}};
    Json bins = Json::array();
    for (const auto& b : r.reliability) {
        bins.push_back(Json{{"bin_low", b.low},
                            {"bin_high", b.high},
                            {"mean_risk", b.mean_value},
                            {"pos_rate", b.observed},
                            {"count", b.count}});
    }
    j["reliability"] = std::move(bins);
    if (r.ensemble) {
        j["ensemble"] = Json{{"members", r.ensemble->members},
                             {"variance", r.ensemble->mean_variance},
                             {"disagreement_rate", r.ensemble->disagreement_rate}};
    }
    return j;
}

std::string epoch_log_line(const train::EpochRecord& r) {
    Json j;
    j["epoch"] = r.stats.epoch;
    j["loss"] = r.stats.loss;
    j["bce"] = r.stats.bce;
    j["w2"] = r.stats.w2;
    j["lr_scale"] = r.stats.lr_scale;
    j["lr"] = Json{{"backbone", r.stats.rates[0]},
                   {"dist_head", r.stats.rates[1]},
                   {"cls_head", r.stats.rates[2]}};
    j["val_accuracy"] = r.val_accuracy;
    return j.dump();
}

std::string predictions_csv(const std::vector<metrics::PredictionRecord>& records) {
    std::string out = "id,label,alpha,beta,risk,std_dev,binary\n";
    for (const auto& r : records) {
        out += std::to_string(r.sample_id) + "," + std::to_string(r.label) + ",";
        csv_number(out, r.alpha);
        out += ",";
        csv_number(out, r.beta);
        out += ",";
        csv_number(out, r.risk);
        out += ",";
        csv_number(out, r.std_dev);
        out += "," + std::to_string(r.binary_pred) + "\n";
    }
    return out;
}

std::string reliability_csv(const std::vector<metrics::ReliabilityBin>& bins) {
    std::string out = "bin_low,bin_high,mean_risk,pos_rate,count\n";
    for (const auto& b : bins) {
        csv_number(out, b.low);
        out += ",";
        csv_number(out, b.high);
        out += ",";
        csv_number(out, b.mean_value);
        out += ",";
        csv_number(out, b.observed);
        out += "," + std::to_string(b.count) + "\n";
    }
    return out;
}

} // namespace betarisk::io
