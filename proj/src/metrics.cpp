#include "betarisk/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace betarisk::metrics {

namespace {

std::vector<std::size_t> order_by_risk(Records records, bool descending) {
    std::vector<std::size_t> idx(records.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return descending ? records[a].risk > records[b].risk : records[a].risk < records[b].risk;
    });
    return idx;
}

long count_positives(Records records) {
    long p = 0;
    for (const auto& r : records) p += r.label == 1 ? 1 : 0;
    return p;
}

int bin_of(double value, int bins) {
    const int b = static_cast<int>(std::floor(value * bins));
    return std::clamp(b, 0, bins - 1);
}

void check_bins(int bins) {
    if (bins < 1) throw DomainError("bin count must be positive, got " + std::to_string(bins));
}

struct BinAccumulator {
    long double value_sum = 0.0L;
    long observed = 0;
    long count = 0;
};

std::vector<BinAccumulator> accumulate_bins(Records records, int bins, CalibrationMode mode) {
    check_bins(bins);
    std::vector<BinAccumulator> acc(static_cast<std::size_t>(bins));
    for (const auto& r : records) {
        double value = r.risk;
        int hit = r.label;
        if (mode == CalibrationMode::confidence) {
            value = std::max(r.risk, 1.0 - r.risk);
            hit = decide(r.risk) == r.label ? 1 : 0;
        }
        auto& a = acc[bin_of(value, bins)];
        a.value_sum += value;
        a.observed += hit;
        ++a.count;
    }
    return acc;
}

} // namespace

PredictionRecord PredictionRecord::from(int sample_id, int label, const net::RiskPrediction& p) {
    PredictionRecord r;
    r.sample_id = sample_id;
    r.label = label;
    r.risk = p.risk;
    r.alpha = p.params.alpha();
    r.beta = p.params.beta();
    r.std_dev = p.std_dev;
    r.binary_pred = decide(p.risk);
    return r;
}

ClassificationMetrics classification_metrics(Records records) {
    ClassificationMetrics m;
    auto& c = m.confusion;
    for (const auto& r : records) {
        const int pred = decide(r.risk);
        if (pred == 1 && r.label == 1) ++c.tp;
        if (pred == 1 && r.label == 0) ++c.fp;
        if (pred == 0 && r.label == 0) ++c.tn;
        if (pred == 0 && r.label == 1) ++c.fn;
    }
    m.precision = c.tp + c.fp > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
    m.recall = c.tp + c.fn > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
    // 2PR / (P + R) reduced to counts: one rounding instead of four.
    m.f1 = c.tp > 0 ? static_cast<double>(2 * c.tp) / static_cast<double>(2 * c.tp + c.fp + c.fn) : 0.0;
    return m;
}

double auc(Records records) {
    const long n_pos = count_positives(records);
    const long n_neg = static_cast<long>(records.size()) - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        throw UndefinedMetricError("AUC needs at least one positive and one negative");
    }
    const auto idx = order_by_risk(records, false);
    // Twice the number of correctly ordered pairs, ties counting once.
    long long twice_wins = 0;
    long neg_below = 0;
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        long pos = 0, neg = 0;
        while (j < idx.size() && records[idx[j]].risk == records[idx[i]].risk) {
            (records[idx[j]].label == 1 ? pos : neg) += 1;
            ++j;
        }
        twice_wins += 2LL * pos * neg_below + static_cast<long long>(pos) * neg;
        neg_below += neg;
        i = j;
    }
    return static_cast<double>(twice_wins) / (2.0 * static_cast<double>(n_pos) * n_neg);
}

double prc(Records records) {
    const long n_pos = count_positives(records);
    if (n_pos == 0) throw UndefinedMetricError("PRC needs at least one positive");
    const auto idx = order_by_risk(records, true);
    long double sum = 0.0L; // sum over thresholds of delta_tp * precision
    long tp = 0;
    long seen = 0;
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        long group_tp = 0;
        while (j < idx.size() && records[idx[j]].risk == records[idx[i]].risk) {
            group_tp += records[idx[j]].label == 1 ? 1 : 0;
            ++j;
        }
        seen += static_cast<long>(j - i);
        tp += group_tp;
        if (group_tp > 0) {
            sum += static_cast<long double>(group_tp) * tp / seen;
        }
        i = j;
    }
    return static_cast<double>(sum / n_pos);
}

std::vector<ReliabilityBin> reliability_bins(Records records, int bins, CalibrationMode mode) {
    const auto acc = accumulate_bins(records, bins, mode);
    std::vector<ReliabilityBin> out(acc.size());
    for (std::size_t b = 0; b < acc.size(); ++b) {
        auto& o = out[b];
        o.low = static_cast<double>(b) / bins;
        o.high = static_cast<double>(b + 1) / bins;
        o.count = acc[b].count;
        if (o.count > 0) {
            o.mean_value = static_cast<double>(acc[b].value_sum / o.count);
            o.observed = static_cast<double>(acc[b].observed) / static_cast<double>(o.count);
        }
    }
    return out;
}

double ece(Records records, int bins, CalibrationMode mode) {
    if (records.empty()) throw UndefinedMetricError("ECE of an empty record set");
    const auto acc = accumulate_bins(records, bins, mode);
    // sum_b (n_b / N) |mean_b - rate_b| == sum_b |sum_b(value) - hits_b| / N
    long double gap = 0.0L;
    for (const auto& a : acc) gap += std::fabs(a.value_sum - static_cast<long double>(a.observed));
    return static_cast<double>(gap) / static_cast<double>(records.size());
}

double brier(Records records) {
    if (records.empty()) throw UndefinedMetricError("Brier score of an empty record set");
    long double sum = 0.0L;
    for (const auto& r : records) {
        const long double d = static_cast<long double>(r.risk) - r.label;
        sum += d * d;
    }
    return static_cast<double>(sum) / static_cast<double>(records.size());
}

EvalReport evaluate(Records records, const EvalOptions& options) {
    if (records.empty()) throw UndefinedMetricError("cannot evaluate an empty record set");
    EvalReport r;
    r.n_samples = static_cast<long>(records.size());
    r.n_positive = count_positives(records);
    r.classification = classification_metrics(records);
    if (r.n_positive > 0 && r.n_positive < r.n_samples) r.auc = auc(records);
    if (r.n_positive > 0) r.prc = prc(records);
    r.ece = ece(records, options.bins, options.mode);
    r.brier = brier(records);
    r.bins = options.bins;
    r.mode = options.mode;
    r.reliability = reliability_bins(records, options.bins, options.mode);
    return r;
}

EnsembleResult ensemble_eval(const std::vector<std::vector<PredictionRecord>>& members,
                             const EvalOptions& options) {
    if (members.size() < 2) {
        throw UndefinedMetricError("an ensemble needs at least two members, got " +
                                   std::to_string(members.size()));
    }
    const auto& first = members.front();
    for (std::size_t m = 1; m < members.size(); ++m) {
        if (members[m].size() != first.size()) {
            throw StructuralError("ensemble member " + std::to_string(m) + " has " +
                                  std::to_string(members[m].size()) + " records, expected " +
                                  std::to_string(first.size()));
        }
        for (std::size_t i = 0; i < first.size(); ++i) {
            if (members[m][i].sample_id != first[i].sample_id ||
                members[m][i].label != first[i].label) {
                throw StructuralError("ensemble member " + std::to_string(m) +
                                      " is misaligned at position " + std::to_string(i));
            }
        }
    }

    const double count = static_cast<double>(members.size());
    EnsembleResult out;
    out.records.reserve(first.size());
    double variance_sum = 0.0;
    long disagreements = 0;
    for (std::size_t i = 0; i < first.size(); ++i) {
        // Shifted sums keep identical members exactly reproducible.
        const double r0 = first[i].risk;
        const double v0 = first[i].std_dev * first[i].std_dev;
        double shift = 0.0, member_var_shift = 0.0;
        bool unanimous = true;
        for (const auto& m : members) {
            shift += m[i].risk - r0;
            member_var_shift += m[i].std_dev * m[i].std_dev - v0;
            unanimous = unanimous && m[i].binary_pred == first[i].binary_pred;
        }
        const double mean = r0 + shift / count;
        double var = 0.0;
        for (const auto& m : members) {
            const double d = m[i].risk - mean;
            var += d * d;
        }
        var /= count;

        // Law of total variance for the mixture, then a moment-matched Beta.
        const double mixture_var = v0 + member_var_shift / count + var;
        PredictionRecord rec;
        rec.sample_id = first[i].sample_id;
        rec.label = first[i].label;
        rec.risk = mean;
        rec.std_dev = std::sqrt(mixture_var);
        const double k = mixture_var > 0.0 ? mean * (1.0 - mean) / mixture_var - 1.0 : 0.0;
        if (k > 0.0 && mean > 0.0 && mean < 1.0) {
            rec.alpha = mean * k;
            rec.beta = (1.0 - mean) * k;
        }
        rec.binary_pred = decide(mean);
        out.records.push_back(rec);
        out.variance.push_back(var);
        out.disagrees.push_back(unanimous ? 0 : 1);
        variance_sum += var;
        disagreements += unanimous ? 0 : 1;
    }

    out.report = evaluate(out.records, options);
    const double n = static_cast<double>(first.size());
    out.report.ensemble = EnsembleSummary{static_cast<int>(members.size()), variance_sum / n,
                                          static_cast<double>(disagreements) / n};
    return out;
}

} // namespace betarisk::metrics
