#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "iad/engine.hpp"
#include "iad/model.hpp"

namespace iad {

enum class Outcome { TruePositive, FalsePositive, FalseNegative, TrueNegative };

std::string_view to_string(Outcome outcome) noexcept;

struct VmmClassification {
    std::string vmm_id;
    bool truth = false;
    bool predicted = false;
    Outcome outcome = Outcome::TrueNegative;
};

/// Binary-classification summary at VMM granularity (positive = anomalous).
/// Zero-denominator cases yield 0, never NaN; counts sum to the number of
/// labeled VMMs.
struct EvalReport {
    std::uint64_t true_positives = 0;
    std::uint64_t false_positives = 0;
    std::uint64_t false_negatives = 0;
    std::uint64_t true_negatives = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::vector<VmmClassification> table;
};

/// Scores predictions against the labels. Every labeled VMM needs a
/// prediction (MissingPredictionError otherwise); extra predictions are
/// ignored.
EvalReport f1_score(const std::map<std::string, bool>& predicted,
                    const std::vector<GroundTruth>& truth);

/// Timing-aware variant: a truth-anomalous VMM counts as detected only if
/// one of its events overlaps the labeled fault interval widened left by
/// early_slack_ticks (detection may fire up to w ticks early). Catches
/// detectors that fire at the wrong time, which plain VMM-level F1 cannot.
EvalReport event_overlap_f1(const std::vector<DetectionResult>& results,
                            const std::vector<GroundTruth>& truth,
                            std::uint64_t early_slack_ticks);

}  // namespace iad
