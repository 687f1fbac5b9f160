// Binary-classification evaluation: ROC sweep with tied scores grouped,
// trapezoidal AUC, conservative TPR-at-FPR operating points, accuracy.
#pragma once

#include <string>
#include <vector>

#include "botwatch/artifact.hpp"
#include "botwatch/corpus.hpp"

namespace botwatch {

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    double threshold = 0.0;  // classify positive at score >= threshold
};

struct RocCurve {
    std::vector<RocPoint> points;  // fpr non-decreasing, (0,0) .. (1,1)
    double auc = 0.0;
};

// Thresholds swept over distinct scores descending; a single-class label
// vector throws.
RocCurve roc(const std::vector<double>& scores, const std::vector<int>& labels);

struct OperatingPoint {
    double target_fpr = 0.0;
    double achieved_fpr = 0.0;
    double tpr = 0.0;
};

// Best TPR among curve points with fpr <= target; no interpolation, so each
// reported TPR is achievable at a real threshold.
std::vector<OperatingPoint> tpr_at_fpr(const RocCurve& curve,
                                       const std::vector<double>& targets);

// Linear interpolation at the exact target, for comparison against reported
// operating points.
std::vector<OperatingPoint> tpr_at_fpr_interpolated(const RocCurve& curve,
                                                    const std::vector<double>& targets);

struct EvalReport {
    double auc = 0.0;
    double accuracy = 0.0;  // threshold 0.5, score exactly 0.5 counts positive
    std::size_t positives = 0;
    std::size_t negatives = 0;
    std::vector<OperatingPoint> operating_points;
};

struct EvalOutput {
    EvalReport report;
    RocCurve curve;
    std::vector<double> scores;
};

EvalOutput evaluate(const ModelArtifact& artifact, const std::vector<TextSample>& test,
                    const std::vector<double>& fpr_targets, bool interpolate = false);

std::string report_to_json(const EvalReport& report);
std::string roc_to_csv(const RocCurve& curve);

}  // namespace botwatch
