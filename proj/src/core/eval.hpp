#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "core/dataset.hpp"
#include "core/geometry.hpp"
#include "core/taxonomy.hpp"

namespace docground {

struct Span {
    std::string text;
    BBox box;
};

struct MatchCounts {
    int tp = 0;
    int pred = 0;
    int gt = 0;

    MatchCounts& operator+=(const MatchCounts& o) {
        tp += o.tp;
        pred += o.pred;
        gt += o.gt;
        return *this;
    }
};

// Maximum bipartite matching over admissible pairs: normalized texts equal
// and IoU strictly above the threshold.
MatchCounts match_spans(const std::vector<Span>& pred, const std::vector<Span>& gt, double iou_threshold);

struct F1Scores {
    double precision = 1.0;
    double recall = 1.0;
    double f1 = 1.0;
};

// Empty sides are vacuously right: no predictions -> precision 1, no ground
// truth -> recall 1 (both empty -> 1/1/1).
F1Scores f1_from_counts(const MatchCounts& c);
F1Scores f1_all(const std::vector<Span>& pred, const std::vector<Span>& gt, double iou_threshold);

// Normalized-equality check shared by every accuracy number we report.
bool exact_match(std::string_view a, std::string_view b);

// For GR answers: the text after the last "Answer:" marker. no_marker is set
// (and the whole string kept) when the marker is absent.
struct ExtractedAnswer {
    std::string answer;
    bool no_marker = false;
};
ExtractedAnswer extract_final_answer(std::string_view stripped);

// BLEU-4: add-one smoothing on zero-match orders, geometric mean over orders
// with at least one candidate n-gram, brevity penalty against the closest
// reference length. Tokens are whitespace-split normalized words.
double bleu4(std::string_view candidate, const std::vector<std::string>& references);

struct EvalConfig {
    double iou_threshold = 0.5;
    std::vector<double> sweep; // extra thresholds for the sweep table
};

struct TaskReport {
    int n = 0;
    int acc_hits = 0;
    int acc_total = 0;
    double bleu_sum = 0.0;
    int bleu_total = 0;
    bool f1_applicable = false;
    MatchCounts spans;

    std::optional<double> accuracy() const {
        if (acc_total == 0) return std::nullopt;
        return static_cast<double>(acc_hits) / acc_total;
    }
    std::optional<double> bleu() const {
        if (bleu_total == 0) return std::nullopt;
        return bleu_sum / bleu_total;
    }
    std::optional<F1Scores> f1() const {
        if (!f1_applicable) return std::nullopt;
        return f1_from_counts(spans);
    }
};

struct SweepPoint {
    double threshold = 0.0;
    F1Scores scores;
};

struct EvalReport {
    EvalConfig config;
    int samples = 0;
    int missing_predictions = 0;
    int unparseable_predictions = 0;
    std::vector<std::string> unknown_prediction_ids;
    std::map<std::string, TaskReport> by_task;              // "Ga", ... and "ALL"
    std::map<std::string, TaskReport> by_doc_type;          // "poster", "chart", "pdf"
    std::vector<SweepPoint> sweep;
};

// Scores predictions against ground-truth samples. Throws SchemaError on
// duplicate prediction ids. Predictions for unknown ids are listed and
// excluded; samples without predictions score as empty output.
EvalReport evaluate(const std::vector<Sample>& gt, const std::vector<Prediction>& preds, const EvalConfig& cfg = {});

// F1_all over all grounded-answer samples at each threshold. Thresholds must
// be strictly increasing; throws std::invalid_argument otherwise.
std::vector<SweepPoint> threshold_sweep(const std::vector<Sample>& gt, const std::vector<Prediction>& preds,
                                        const std::vector<double>& thresholds);

nlohmann::ordered_json report_to_json(const EvalReport& r);
std::string report_to_text(const EvalReport& r);

} // namespace docground
