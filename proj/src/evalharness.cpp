#include "botwatch/evalharness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace botwatch {

RocCurve roc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size()) {
        throw std::runtime_error("roc: scores and labels differ in length");
    }
    std::size_t pos = 0, neg = 0;
    for (const int y : labels) (y ? pos : neg) += 1;
    if (pos == 0 || neg == 0) throw std::runtime_error("roc needs both classes present");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve curve;
    curve.points.push_back(RocPoint{0.0, 0.0, std::numeric_limits<double>::infinity()});
    std::size_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double threshold = scores[order[i]];
        // tied scores collapse into one step
        while (i < order.size() && scores[order[i]] == threshold) {
            (labels[order[i]] ? tp : fp) += 1;
            ++i;
        }
        curve.points.push_back(RocPoint{static_cast<double>(fp) / static_cast<double>(neg),
                                        static_cast<double>(tp) / static_cast<double>(pos),
                                        threshold});
    }

    double auc = 0.0;
    for (std::size_t k = 1; k < curve.points.size(); ++k) {
        const auto& a = curve.points[k - 1];
        const auto& b = curve.points[k];
        auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
    }
    curve.auc = auc;
    return curve;
}

std::vector<OperatingPoint> tpr_at_fpr(const RocCurve& curve,
                                       const std::vector<double>& targets) {
    std::vector<OperatingPoint> points;
    points.reserve(targets.size());
    for (const double target : targets) {
        OperatingPoint op{target, 0.0, 0.0};
        for (const auto& p : curve.points) {
            if (p.fpr > target) break;  // fpr is non-decreasing
            if (p.tpr > op.tpr) {
                op.tpr = p.tpr;
                op.achieved_fpr = p.fpr;
            }
        }
        points.push_back(op);
    }
    return points;
}

std::vector<OperatingPoint> tpr_at_fpr_interpolated(const RocCurve& curve,
                                                    const std::vector<double>& targets) {
    std::vector<OperatingPoint> points;
    points.reserve(targets.size());
    for (const double target : targets) {
        OperatingPoint op{target, target, 0.0};
        for (std::size_t k = 1; k < curve.points.size(); ++k) {
            const auto& a = curve.points[k - 1];
            const auto& b = curve.points[k];
            if (target > b.fpr) continue;
            if (b.fpr == a.fpr) {
                op.tpr = std::max(a.tpr, b.tpr);
            } else {
                const double w = (target - a.fpr) / (b.fpr - a.fpr);
                op.tpr = a.tpr + w * (b.tpr - a.tpr);
            }
            break;
        }
        points.push_back(op);
    }
    return points;
}

EvalOutput evaluate(const ModelArtifact& artifact, const std::vector<TextSample>& test,
                    const std::vector<double>& fpr_targets, bool interpolate) {
    std::vector<std::string> texts;
    std::vector<int> labels;
    texts.reserve(test.size());
    for (const auto& sample : test) {
        texts.push_back(sample.text);
        labels.push_back(sample.label);
    }

    EvalOutput out;
    out.scores = score_artifact(artifact, texts);
    out.curve = roc(out.scores, labels);
    out.report.auc = out.curve.auc;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        (labels[i] ? out.report.positives : out.report.negatives) += 1;
        if ((out.scores[i] >= 0.5 ? 1 : 0) == labels[i]) ++correct;
    }
    out.report.accuracy = static_cast<double>(correct) / static_cast<double>(labels.size());
    out.report.operating_points = interpolate ? tpr_at_fpr_interpolated(out.curve, fpr_targets)
                                              : tpr_at_fpr(out.curve, fpr_targets);
    return out;
}

std::string report_to_json(const EvalReport& report) {
    nlohmann::json ops = nlohmann::json::array();
    for (const auto& op : report.operating_points) {
        ops.push_back({{"target_fpr", op.target_fpr},
                       {"achieved_fpr", op.achieved_fpr},
                       {"tpr", op.tpr}});
    }
    const nlohmann::json doc{{"auc", report.auc},
                             {"accuracy", report.accuracy},
                             {"positives", report.positives},
                             {"negatives", report.negatives},
                             {"operating_points", ops}};
    return doc.dump(2) + "\n";
}

std::string roc_to_csv(const RocCurve& curve) {
    std::string out = "fpr,tpr,threshold\n";
    char line[128];
    for (const auto& p : curve.points) {
        if (std::isinf(p.threshold)) {
            std::snprintf(line, sizeof(line), "%.12g,%.12g,inf\n", p.fpr, p.tpr);
        } else {
            std::snprintf(line, sizeof(line), "%.12g,%.12g,%.12g\n", p.fpr, p.tpr, p.threshold);
        }
        out += line;
    }
    return out;
}

}  // namespace botwatch
