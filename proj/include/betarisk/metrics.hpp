#pragma once

#include "betarisk/errors.hpp"
#include "betarisk/net.hpp"

#include <optional>
#include <span>
#include <vector>

namespace betarisk::metrics {

// Risk at or above this value predicts the positive class.
inline constexpr double kDecisionThreshold = 0.5;

inline int decide(double risk) noexcept { return risk >= kDecisionThreshold ? 1 : 0; }

struct PredictionRecord {
    int sample_id = 0;
    int label = 0;
    double risk = 0.0;
    double alpha = 1.0;
    double beta = 1.0;
    double std_dev = 0.0;
    int binary_pred = 0;

    static PredictionRecord from(int sample_id, int label, const net::RiskPrediction& p);
};

using Records = std::span<const PredictionRecord>;

// A metric that is undefined for the given labels (e.g. AUC with one class).
class UndefinedMetricError : public DomainError {
public:
    using DomainError::DomainError;
};

struct Confusion {
    long tp = 0, fp = 0, tn = 0, fn = 0;
    friend bool operator==(const Confusion&, const Confusion&) = default;
};

struct ClassificationMetrics {
    double f1 = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    Confusion confusion;
    friend bool operator==(const ClassificationMetrics&, const ClassificationMetrics&) = default;
};

ClassificationMetrics classification_metrics(Records records);

// Mann-Whitney statistic; tied (positive, negative) pairs earn half credit.
double auc(Records records);

// Average precision over descending-risk thresholds, tied risks as one group.
double prc(Records records);

enum class CalibrationMode {
    positive_class, // bins over risk, compared with the empirical positive rate
    confidence,     // bins over max(risk, 1 - risk), compared with accuracy
};

inline constexpr int kDefaultBins = 15;

struct ReliabilityBin {
    double low = 0.0;
    double high = 0.0;
    double mean_value = 0.0; // mean risk (or confidence); 0 for an empty bin
    double observed = 0.0;   // positive rate (or accuracy); 0 for an empty bin
    long count = 0;
    friend bool operator==(const ReliabilityBin&, const ReliabilityBin&) = default;
};

std::vector<ReliabilityBin> reliability_bins(Records records, int bins = kDefaultBins,
                                             CalibrationMode mode = CalibrationMode::positive_class);

// Count-weighted mean over equal-width bins of |mean value - observed rate|.
double ece(Records records, int bins = kDefaultBins,
           CalibrationMode mode = CalibrationMode::positive_class);

double brier(Records records);

struct EnsembleSummary {
    int members = 0;
    double mean_variance = 0.0;     // dataset mean of per-sample population variance
    double disagreement_rate = 0.0; // fraction of samples without a unanimous vote
    friend bool operator==(const EnsembleSummary&, const EnsembleSummary&) = default;
};

struct EvalOptions {
    int bins = kDefaultBins;
    CalibrationMode mode = CalibrationMode::positive_class;
};

struct EvalReport {
    long n_samples = 0;
    long n_positive = 0;
    ClassificationMetrics classification;
    std::optional<double> auc;
    std::optional<double> prc;
    double ece = 0.0;
    double brier = 0.0;
    int bins = kDefaultBins;
    CalibrationMode mode = CalibrationMode::positive_class;
    std::vector<ReliabilityBin> reliability;
    std::optional<EnsembleSummary> ensemble;

    friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

// All metrics over one record set. AUC/PRC are left empty when undefined.
EvalReport evaluate(Records records, const EvalOptions& options = {});

struct EnsembleResult {
    EvalReport report;
    // Per-sample ensemble prediction: the risk is the member mean, the shapes
    // are the moment-matched Beta of the member mixture.
    std::vector<PredictionRecord> records;
    std::vector<double> variance;
    std::vector<int> disagrees;
};

// Throws StructuralError when members do not share sample ids and labels, and
// UndefinedMetricError with fewer than two members.
EnsembleResult ensemble_eval(const std::vector<std::vector<PredictionRecord>>& members,
                             const EvalOptions& options = {});

} // namespace betarisk::metrics
