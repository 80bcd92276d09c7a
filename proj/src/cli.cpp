#include "betarisk/cli.hpp"

#include "betarisk/analysis.hpp"
#include "betarisk/errors.hpp"
#include "betarisk/graphics.hpp"
#include "betarisk/io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <thread>

namespace betarisk::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string fixed(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

// ---- shared option groups ----

struct TrainFlags {
    std::optional<std::string> config;
    std::optional<int> epochs;
    std::optional<int> batch_size;
    std::optional<double> lr_backbone;
    std::optional<double> lr_dist_head;
    std::optional<double> lr_cls_head;
    std::optional<double> weight_decay;
    std::optional<double> lambda1;
    std::optional<double> lambda2;
    std::optional<double> epsilon;
    std::optional<std::string> beta_mode;
    std::optional<std::uint64_t> seed;
    bool no_augment = false;
    std::optional<double> val_fraction;
    std::optional<double> test_fraction;
};

void add_train_flags(CLI::App* app, TrainFlags& f) {
    app->add_option("--config", f.config, "JSON run config; flags given here override it");
    app->add_option("--epochs", f.epochs, "Training epochs (default 30)");
    app->add_option("--batch-size", f.batch_size, "Samples per optimizer step (default 32)");
    app->add_option("--lr-backbone", f.lr_backbone, "Base learning rate of the shared encoder");
    app->add_option("--lr-dist-head", f.lr_dist_head, "Base learning rate of the distribution head");
    app->add_option("--lr-cls-head", f.lr_cls_head, "Base learning rate of the classification head");
    app->add_option("--weight-decay", f.weight_decay, "Decoupled weight decay");
    app->add_option("--lambda1", f.lambda1, "Weight of the classification loss");
    app->add_option("--lambda2", f.lambda2, "Weight of the distribution loss");
    app->add_option("--epsilon", f.epsilon, "Target shape epsilon");
    app->add_option("--positive-beta-mode", f.beta_mode, "verbatim or mean_realizing");
    app->add_option("--seed", f.seed, "Initialization and augmentation seed");
    app->add_flag("--no-augment", f.no_augment, "Disable flips and quarter turns of crop content");
    app->add_option("--val-frac", f.val_fraction, "Validation share of the corpus (default 0.15)");
    app->add_option("--test-frac", f.test_fraction, "Test share of the corpus (default 0.15)");
}

io::Json read_json_file(const std::string& path, const char* field) {
    const std::string text = io::read_text(path);
    try {
        return io::Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(field, "'" + path + "' is not valid JSON: " + e.what());
    }
}

// Defaults, then the config file, then flags.
io::RunConfig resolve_run_config(const TrainFlags& f, const std::optional<io::Dataset>& data) {
    io::RunConfig c;
    bool config_names_data = false;
    if (f.config) {
        const io::Json j = read_json_file(*f.config, "config");
        c = io::run_config_from_json(j);
        config_names_data = j.is_object() && j.contains("data");
    }
    if (data) {
        if (config_names_data && !(c.data == data->spec)) {
            throw ConfigError("data", "the config describes a different corpus than the dataset file");
        }
        c.data = data->spec;
    }
    auto& t = c.train;
    if (f.epochs) t.epochs = *f.epochs;
    if (f.batch_size) t.batch_size = *f.batch_size;
    if (f.lr_backbone) t.lr_backbone = *f.lr_backbone;
    if (f.lr_dist_head) t.lr_dist_head = *f.lr_dist_head;
    if (f.lr_cls_head) t.lr_cls_head = *f.lr_cls_head;
    if (f.weight_decay) t.weight_decay = *f.weight_decay;
    if (f.lambda1) t.loss.lambda1 = *f.lambda1;
    if (f.lambda2) t.loss.lambda2 = *f.lambda2;
    if (f.epsilon) t.labels.epsilon = *f.epsilon;
    if (f.beta_mode) t.labels.positive_beta_mode = io::positive_beta_mode_from_string(*f.beta_mode);
    if (f.seed) t.seed = *f.seed;
    if (f.no_augment) t.augment = false;
    if (f.val_fraction) c.val_fraction = *f.val_fraction;
    if (f.test_fraction) c.test_fraction = *f.test_fraction;
    c.validate();
    return c;
}

struct Corpus {
    io::Dataset dataset;
    std::vector<synth::Scene> scenes;
    synth::Split split;
};

Corpus render_corpus(io::Dataset dataset, double val_fraction, double test_fraction) {
    Corpus c;
    c.split = synth::split_indices(dataset.spec.n_samples, val_fraction, test_fraction);
    c.scenes = dataset.render();
    c.dataset = std::move(dataset);
    return c;
}

std::vector<int> select_split(const Corpus& c, const std::string& name) {
    if (name == "train") return c.split.train;
    if (name == "val") return c.split.val;
    if (name == "test") return c.split.test;
    std::vector<int> all(c.scenes.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    return all;
}

void check_compatible(const io::Checkpoint& ck, const synth::DatasetSpec& spec, const std::string& path) {
    const auto& m = ck.state.config();
    if (m.num_scales != spec.num_scales) {
        throw StructuralError("checkpoint '" + path + "' expects " + std::to_string(m.num_scales) +
                              " scales, the dataset has " + std::to_string(spec.num_scales));
    }
    if (m.feature_dim != synth::kFeaturesPerScale) {
        throw StructuralError("checkpoint '" + path + "' expects " + std::to_string(m.feature_dim) +
                              " features per scale, the extractor produces " +
                              std::to_string(synth::kFeaturesPerScale));
    }
}

void print_report(std::ostream& out, const metrics::EvalReport& r) {
    out << "samples " << r.n_samples << " (positives " << r.n_positive << ")\n";
    out << "f1 " << fixed("%.4f", r.classification.f1) << "  precision "
        << fixed("%.4f", r.classification.precision) << "  recall " << fixed("%.4f", r.classification.recall)
        << "\n";
    out << "auc " << (r.auc ? fixed("%.4f", *r.auc) : "undefined") << "  prc "
        << (r.prc ? fixed("%.4f", *r.prc) : "undefined") << "  ece " << fixed("%.4f", r.ece) << "  brier "
        << fixed("%.4f", r.brier) << "\n";
    if (r.ensemble) {
        out << "members " << r.ensemble->members << "  variance " << fixed("%.6g", r.ensemble->mean_variance)
            << "  disagreement " << fixed("%.4f", r.ensemble->disagreement_rate) << "\n";
    }
}

struct EvalFlags {
    std::string split = "test";
    int bins = metrics::kDefaultBins;
    std::string mode = "positive_class";
    double val_fraction = 0.15;
    double test_fraction = 0.15;
};

void add_eval_flags(CLI::App* app, EvalFlags& f) {
    app->add_option("--split", f.split, "train, val, test or all")
        ->check(CLI::IsMember({"train", "val", "test", "all"}));
    app->add_option("--bins", f.bins, "Calibration bins")->check(CLI::PositiveNumber);
    app->add_option("--calibration-mode", f.mode, "positive_class or confidence")
        ->check(CLI::IsMember({"positive_class", "confidence"}));
    app->add_option("--val-frac", f.val_fraction, "Validation share used at training time");
    app->add_option("--test-frac", f.test_fraction, "Test share used at training time");
}

metrics::EvalOptions eval_options(const EvalFlags& f) {
    return metrics::EvalOptions{f.bins, io::calibration_mode_from_string(f.mode)};
}

// ---- commands ----

struct GenDataArgs {
    int n = 2000;
    std::uint64_t seed = 0;
    double pos_frac = 0.35;
    double hard_frac = 0.7;
    double noise = 0.25;
    std::string out;
};

void cmd_gen_data(const GenDataArgs& a, std::ostream& out) {
    if (a.n < 1) throw UsageError("--n must be at least 1");
    synth::DatasetSpec spec;
    spec.n_samples = a.n;
    spec.seed = a.seed;
    spec.positive_fraction = a.pos_frac;
    spec.hard_negative_fraction = a.hard_frac;
    spec.noise_level = a.noise;
    spec.validate();
    const auto d = io::Dataset::planned(spec);
    io::save_dataset(a.out, d);
    out << "wrote " << spec.n_samples << " samples (" << spec.positive_count() << " positive, "
        << spec.hard_negative_count() << " hard negative) to " << a.out << "\n";
}

struct TrainArgs {
    std::optional<std::string> data;
    std::string out;
    TrainFlags flags;
};

void cmd_train(const TrainArgs& a, std::ostream& out) {
    std::optional<io::Dataset> dataset;
    if (a.data) dataset = io::load_dataset(*a.data);
    const io::RunConfig config = resolve_run_config(a.flags, dataset);
    if (!dataset) dataset = io::Dataset::planned(config.data);
    const Corpus corpus = render_corpus(std::move(*dataset), config.val_fraction, config.test_fraction);

    const fs::path dir(a.out);
    io::write_text(dir / "config.json", io::dump(io::to_json(config)));
    std::string log;
    const auto result = train::fit(corpus.scenes, corpus.split.train, corpus.split.val, config.train,
                                   [&](const train::EpochRecord& r) {
                                       log += io::epoch_log_line(r) + "\n";
                                       out << "epoch " << r.stats.epoch << "  loss "
                                           << fixed("%.6f", r.stats.loss) << "  val_accuracy "
                                           << fixed("%.4f", r.val_accuracy) << "\n";
                                   });
    io::write_text(dir / "metrics.jsonl", log);
    io::save_checkpoint(dir / "checkpoint_best.json",
                        io::Checkpoint{result.best, result.best_epoch, config.data.seed, config.train.seed});
    if (config.train.epochs > 0) {
        io::save_checkpoint(dir / "checkpoint_final.json",
                            io::Checkpoint{result.last, config.train.epochs, config.data.seed, config.train.seed});
    }
    out << "best epoch " << result.best_epoch << " (val_accuracy " << fixed("%.4f", result.best_val_accuracy)
        << "), written to " << (dir / "checkpoint_best.json").string() << "\n";
}

struct EvalArgs {
    std::string checkpoint;
    std::string data;
    std::string out;
    std::optional<std::string> predictions;
    std::optional<std::string> reliability;
    EvalFlags flags;
};

void cmd_eval(const EvalArgs& a, std::ostream& out) {
    const auto options = eval_options(a.flags);
    const auto ck = io::load_checkpoint(a.checkpoint);
    auto dataset = io::load_dataset(a.data);
    check_compatible(ck, dataset.spec, a.checkpoint);
    const Corpus corpus = render_corpus(std::move(dataset), a.flags.val_fraction, a.flags.test_fraction);
    const auto indices = select_split(corpus, a.flags.split);
    if (indices.empty()) throw ConfigError("split", "the selected split is empty");
    const auto records = analysis::predict(ck.state, corpus.scenes, indices);
    const auto report = metrics::evaluate(records, options);
    io::write_text(a.out, io::dump(io::to_json(report)));
    if (a.predictions) io::write_text(*a.predictions, io::predictions_csv(records));
    if (a.reliability) io::write_text(*a.reliability, io::reliability_csv(report.reliability));
    print_report(out, report);
}

struct EnsembleArgs {
    std::vector<std::string> checkpoints;
    std::string data;
    std::string out;
    std::optional<std::string> predictions;
    EvalFlags flags;
};

void cmd_ensemble(const EnsembleArgs& a, std::ostream& out) {
    if (a.checkpoints.size() < 2) {
        throw UsageError("an ensemble needs at least two --checkpoint paths, got " +
                         std::to_string(a.checkpoints.size()));
    }
    const auto options = eval_options(a.flags);
    auto dataset = io::load_dataset(a.data);
    std::vector<io::Checkpoint> members;
    for (const auto& path : a.checkpoints) {
        members.push_back(io::load_checkpoint(path));
        check_compatible(members.back(), dataset.spec, path);
    }
    const Corpus corpus = render_corpus(std::move(dataset), a.flags.val_fraction, a.flags.test_fraction);
    const auto indices = select_split(corpus, a.flags.split);
    if (indices.empty()) throw ConfigError("split", "the selected split is empty");
    std::vector<std::vector<metrics::PredictionRecord>> member_records;
    for (const auto& m : members) member_records.push_back(analysis::predict(m.state, corpus.scenes, indices));
    const auto result = metrics::ensemble_eval(member_records, options);
    io::write_text(a.out, io::dump(io::to_json(result.report)));
    if (a.predictions) io::write_text(*a.predictions, io::predictions_csv(result.records));
    print_report(out, result.report);
}

struct W2Args {
    std::string target = "2,5";
    std::string grid = "0.5:10:0.25";
    int nodes = loss::kDefaultQuadratureNodes;
    int threads = 0;
    std::string out_dir;
};

std::vector<double> parse_numbers(const std::string& s, char sep, const char* flag) {
    std::vector<double> v;
    std::size_t start = 0;
    while (true) {
        const auto end = s.find(sep, start);
        const std::string part = s.substr(start, end == std::string::npos ? std::string::npos : end - start);
        try {
            std::size_t used = 0;
            v.push_back(std::stod(part, &used));
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw UsageError(std::string(flag) + ": cannot read '" + part + "' as a number");
        }
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return v;
}

void cmd_w2_analysis(const W2Args& a, std::ostream& out) {
    const auto t = parse_numbers(a.target, ',', "--target");
    if (t.size() != 2) throw UsageError("--target expects alpha,beta");
    const auto g = parse_numbers(a.grid, ':', "--grid");
    if (g.size() != 3) throw UsageError("--grid expects lo:hi:step");
    if (!(g[2] > 0.0)) throw UsageError("--grid step must be positive");
    if (!(g[0] > 0.0) || g[1] < g[0]) throw UsageError("--grid needs 0 < lo <= hi");
    if (a.nodes < 64) throw UsageError("--nodes must be at least 64");
    betadist::BetaParams target(1.0, 1.0);
    try {
        target = betadist::BetaParams(t[0], t[1]);
    } catch (const DomainError& e) {
        throw UsageError(std::string("--target: ") + e.what());
    }
    const auto values = analysis::grid_values(g[0], g[1], g[2]);
    const int threads = a.threads > 0 ? a.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    const auto sweep = analysis::w2_sweep(target, values, values, a.nodes, threads);

    const fs::path dir(a.out_dir);
    io::write_text(dir / "w2_grid.csv", analysis::w2_csv(sweep));
    graphics::Heatmap h;
    h.x_label = "alpha";
    h.y_label = "beta";
    h.xs = values;
    h.ys = values;
    for (const auto& c : sweep.cells) h.values.push_back(c.abs_diff);
    h.title = "Absolute error |surrogate - true W2^2|, target Beta(" + io::format_double(t[0]) + ", " +
              io::format_double(t[1]) + ")";
    io::write_text(dir / "w2_abs_error.svg", graphics::heatmap_svg(h));
    h.values.clear();
    for (const auto& c : sweep.cells) h.values.push_back(c.rel_diff);
    h.title = "Relative error |surrogate - true| / true, target Beta(" + io::format_double(t[0]) + ", " +
              io::format_double(t[1]) + ")";
    io::write_text(dir / "w2_rel_error.svg", graphics::heatmap_svg(h));

    const auto& mr = sweep.max_rel();
    const auto& ma = sweep.max_abs();
    io::Json summary;
    summary["target"] = io::Json::array({t[0], t[1]});
    summary["grid"] = io::Json{{"lo", g[0]}, {"hi", g[1]}, {"step", g[2]}, {"points", values.size()}};
    summary["nodes"] = a.nodes;
    summary["median_abs_diff"] = sweep.median_abs();
    summary["p95_abs_diff"] = sweep.quantile_abs(0.95);
    summary["max_abs_diff"] = io::Json{{"alpha", ma.alpha}, {"beta", ma.beta}, {"value", ma.abs_diff}, {"extreme", ma.extreme}};
    summary["max_rel_diff"] = io::Json{{"alpha", mr.alpha}, {"beta", mr.beta}, {"value", mr.rel_diff}, {"extreme", mr.extreme}};
    io::write_text(dir / "w2_summary.json", io::dump(summary));

    out << "cells " << sweep.cells.size() << "  median |diff| " << fixed("%.3g", sweep.median_abs())
        << "  p95 " << fixed("%.3g", sweep.quantile_abs(0.95)) << "\n";
    out << "max relative " << fixed("%.3g", mr.rel_diff) << " at (" << mr.alpha << ", " << mr.beta << ")"
        << (mr.extreme ? " [extreme]" : "") << "\n";
}

struct AblationArgs {
    std::string data;
    std::string out_dir;
    TrainFlags flags;
};

void cmd_ablation(const AblationArgs& a, std::ostream& out) {
    if (a.flags.lambda1 || a.flags.lambda2) {
        throw UsageError("ablation sets lambda1 and lambda2 itself");
    }
    std::optional<io::Dataset> dataset = io::load_dataset(a.data);
    const io::RunConfig config = resolve_run_config(a.flags, dataset);
    const Corpus corpus = render_corpus(std::move(*dataset), config.val_fraction, config.test_fraction);
    const fs::path dir(a.out_dir);
    io::write_text(dir / "config.json", io::dump(io::to_json(config)));
    const auto rows = analysis::ablation(corpus.scenes, corpus.split.train, corpus.split.val,
                                         corpus.split.test, config.train);
    io::write_text(dir / "ablation.csv", analysis::ablation_csv(rows));
    const std::string table = analysis::ablation_markdown(rows);
    io::write_text(dir / "ablation.md", table);
    out << table;
}

struct RiskmapArgs {
    std::string checkpoint;
    std::string data;
    std::string out_dir;
    std::string split = "all";
    double val_fraction = 0.15;
    double test_fraction = 0.15;
};

void cmd_riskmap(const RiskmapArgs& a, std::ostream& out) {
    const auto ck = io::load_checkpoint(a.checkpoint);
    auto dataset = io::load_dataset(a.data);
    if (!dataset.has_locations) throw StructuralError("dataset '" + a.data + "' has no sample locations");
    check_compatible(ck, dataset.spec, a.checkpoint);
    const Corpus corpus = render_corpus(std::move(dataset), a.val_fraction, a.test_fraction);
    const auto indices = select_split(corpus, a.split);
    const auto records = analysis::predict(ck.state, corpus.scenes, indices);
    std::vector<graphics::MapPoint> points;
    for (std::size_t k = 0; k < indices.size(); ++k) {
        points.push_back(graphics::MapPoint{corpus.dataset.records[indices[k]].location, records[k]});
    }
    const fs::path dir(a.out_dir);
    io::write_text(dir / "riskmap.geojson", graphics::riskmap_geojson(points));
    io::write_text(dir / "riskmap.svg", graphics::riskmap_svg(points, "Predicted risk (" + a.split + " split)"));
    out << "mapped " << points.size() << " locations to " << (dir / "riskmap.geojson").string() << "\n";
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Beta-distribution crash-risk models on synthetic multi-scale scenes", "betarisk"};
    app.require_subcommand(1);
    std::function<void()> action;

    GenDataArgs gen;
    auto* c_gen = app.add_subcommand("gen-data", "Write a seeded synthetic dataset file");
    c_gen->add_option("--n", gen.n, "Number of samples");
    c_gen->add_option("--seed", gen.seed, "Corpus seed");
    c_gen->add_option("--pos-frac", gen.pos_frac, "Positive fraction");
    c_gen->add_option("--hard-frac", gen.hard_frac, "Hard-negative share of the negatives");
    c_gen->add_option("--noise", gen.noise, "Pixel noise standard deviation");
    c_gen->add_option("--out", gen.out, "Output dataset path")->required();
    c_gen->callback([&] { action = [&] { cmd_gen_data(gen, out); }; });

    TrainArgs tr;
    auto* c_train = app.add_subcommand("train", "Train a model and write a run directory");
    c_train->add_option("--data", tr.data, "Dataset file (default: regenerate from the config)");
    c_train->add_option("--out", tr.out, "Run directory")->required();
    add_train_flags(c_train, tr.flags);
    c_train->callback([&] { action = [&] { cmd_train(tr, out); }; });

    EvalArgs ev;
    auto* c_eval = app.add_subcommand("eval", "Evaluate a checkpoint on full, uncropped scenes");
    c_eval->add_option("--checkpoint", ev.checkpoint, "Checkpoint file")->required();
    c_eval->add_option("--data", ev.data, "Dataset file")->required();
    c_eval->add_option("--out", ev.out, "Report path (JSON)")->required();
    c_eval->add_option("--predictions", ev.predictions, "Per-sample predictions CSV");
    c_eval->add_option("--reliability", ev.reliability, "Reliability-diagram CSV");
    add_eval_flags(c_eval, ev.flags);
    c_eval->callback([&] { action = [&] { cmd_eval(ev, out); }; });

    EnsembleArgs en;
    auto* c_ens = app.add_subcommand("ensemble", "Evaluate a deep ensemble of checkpoints");
    c_ens->add_option("--checkpoint", en.checkpoints, "Member checkpoint (repeat, at least two)")->required();
    c_ens->add_option("--data", en.data, "Dataset file")->required();
    c_ens->add_option("--out", en.out, "Report path (JSON)")->required();
    c_ens->add_option("--predictions", en.predictions, "Per-sample ensemble predictions CSV");
    add_eval_flags(c_ens, en.flags);
    c_ens->callback([&] { action = [&] { cmd_ensemble(en, out); }; });

    W2Args w2;
    auto* c_w2 = app.add_subcommand("w2-analysis", "Compare the W2 surrogate with the true distance on a grid");
    c_w2->add_option("--target", w2.target, "Target shapes alpha,beta");
    c_w2->add_option("--grid", w2.grid, "Grid for both shapes, lo:hi:step");
    c_w2->add_option("--nodes", w2.nodes, "Quadrature nodes");
    c_w2->add_option("--threads", w2.threads, "Worker threads (default: all cores)");
    c_w2->add_option("--out-dir", w2.out_dir, "Output directory")->required();
    c_w2->callback([&] { action = [&] { cmd_w2_analysis(w2, out); }; });

    AblationArgs ab;
    auto* c_ab = app.add_subcommand("ablation", "Train the five loss-weight settings and tabulate F1/P/R");
    c_ab->add_option("--data", ab.data, "Dataset file")->required();
    c_ab->add_option("--out-dir", ab.out_dir, "Output directory")->required();
    add_train_flags(c_ab, ab.flags);
    c_ab->callback([&] { action = [&] { cmd_ablation(ab, out); }; });

    RiskmapArgs rm;
    auto* c_rm = app.add_subcommand("riskmap", "Export predicted risk per location as GeoJSON and SVG");
    c_rm->add_option("--checkpoint", rm.checkpoint, "Checkpoint file")->required();
    c_rm->add_option("--data", rm.data, "Dataset file")->required();
    c_rm->add_option("--out-dir", rm.out_dir, "Output directory")->required();
    c_rm->add_option("--split", rm.split, "train, val, test or all")
        ->check(CLI::IsMember({"train", "val", "test", "all"}));
    c_rm->add_option("--val-frac", rm.val_fraction, "Validation share used at training time");
    c_rm->add_option("--test-frac", rm.test_fraction, "Test share used at training time");
    c_rm->callback([&] { action = [&] { cmd_riskmap(rm, out); }; });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back(); // program name
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        action();
        return kExitOk;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "invalid configuration: " << e.what() << "\n";
        return kExitUsage;
    } catch (const StructuralError& e) {
        err << "input mismatch: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "invalid argument: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
}

} // namespace betarisk::cli
