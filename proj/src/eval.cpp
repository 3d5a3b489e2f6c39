#include "iad/eval.hpp"

#include <algorithm>

namespace iad {

std::string_view to_string(Outcome outcome) noexcept {
    switch (outcome) {
        case Outcome::TruePositive: return "TP";
        case Outcome::FalsePositive: return "FP";
        case Outcome::FalseNegative: return "FN";
        case Outcome::TrueNegative: return "TN";
    }
    return "?";
}

namespace {

EvalReport finalize(std::vector<VmmClassification> table) {
    EvalReport report;
    for (const VmmClassification& c : table) {
        switch (c.outcome) {
            case Outcome::TruePositive: ++report.true_positives; break;
            case Outcome::FalsePositive: ++report.false_positives; break;
            case Outcome::FalseNegative: ++report.false_negatives; break;
            case Outcome::TrueNegative: ++report.true_negatives; break;
        }
    }
    const double tp = static_cast<double>(report.true_positives);
    const double fp = static_cast<double>(report.false_positives);
    const double fn = static_cast<double>(report.false_negatives);
    report.precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    report.recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    report.f1 = report.precision + report.recall > 0
                    ? 2.0 * report.precision * report.recall /
                          (report.precision + report.recall)
                    : 0.0;
    report.table = std::move(table);
    return report;
}

Outcome classify_outcome(bool truth, bool predicted) {
    if (truth) return predicted ? Outcome::TruePositive : Outcome::FalseNegative;
    return predicted ? Outcome::FalsePositive : Outcome::TrueNegative;
}

}  // namespace

EvalReport f1_score(const std::map<std::string, bool>& predicted,
                    const std::vector<GroundTruth>& truth) {
    std::vector<VmmClassification> table;
    table.reserve(truth.size());
    for (const GroundTruth& label : truth) {
        const auto it = predicted.find(label.vmm_id);
        if (it == predicted.end()) throw MissingPredictionError(label.vmm_id);
        table.push_back(VmmClassification{label.vmm_id, label.anomalous, it->second,
                                          classify_outcome(label.anomalous, it->second)});
    }
    return finalize(std::move(table));
}

EvalReport event_overlap_f1(const std::vector<DetectionResult>& results,
                            const std::vector<GroundTruth>& truth,
                            std::uint64_t early_slack_ticks) {
    std::vector<VmmClassification> table;
    table.reserve(truth.size());
    for (const GroundTruth& label : truth) {
        const auto it = std::find_if(results.begin(), results.end(),
                                     [&](const DetectionResult& r) {
                                         return r.vmm_id == label.vmm_id;
                                     });
        if (it == results.end()) throw MissingPredictionError(label.vmm_id);

        bool predicted = false;
        if (label.anomalous && label.fault_interval) {
            const std::uint64_t lo =
                label.fault_interval->start_tick > early_slack_ticks
                    ? label.fault_interval->start_tick - early_slack_ticks
                    : 1;
            const std::uint64_t hi = label.fault_interval->end_tick;
            for (const AnomalyEvent& e : it->events)
                if (e.start_tick <= hi && e.end_tick >= lo) {
                    predicted = true;
                    break;
                }
        } else {
            predicted = !it->events.empty();
        }
        table.push_back(VmmClassification{label.vmm_id, label.anomalous, predicted,
                                          classify_outcome(label.anomalous, predicted)});
    }
    return finalize(std::move(table));
}

}  // namespace iad
