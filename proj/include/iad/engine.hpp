#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iad/change_detect.hpp"
#include "iad/model.hpp"

namespace iad {

/// A maximal run of anomalous ticks for one VMM (nearby runs merged).
struct AnomalyEvent {
    std::string vmm_id;
    std::uint64_t start_tick = 0;
    std::uint64_t end_tick = 0;
    double peak_vote_fraction = 0.0;

    friend bool operator==(const AnomalyEvent&, const AnomalyEvent&) = default;
};

/// Streaming IAD over one VMM: d per-VM detectors advanced in lock-step plus
/// the minPercentVMsFault voting rule.
class VmmEngineState {
public:
    VmmEngineState(std::string vmm_id, std::vector<std::string> vm_ids,
                   const DetectorConfig& cfg);

    /// Ingests one tick (one value per hosted VM, group order). Emits the
    /// VmmVerdict for tick ticks_seen - w once the detectors are warm.
    /// Throws ArityMismatchError when xs.size() != vm_count().
    std::optional<VmmVerdict> step(std::span<const double> xs);

    const std::string& vmm_id() const noexcept { return vmm_id_; }
    std::size_t vm_count() const noexcept { return vms_.size(); }
    std::uint64_t ticks_seen() const noexcept { return ticks_seen_; }
    const DetectorConfig& config() const noexcept { return cfg_; }

private:
    std::string vmm_id_;
    std::vector<VmDetectorState> vms_;
    DetectorConfig cfg_;
    std::uint64_t ticks_seen_ = 0;
};

/// Collapses anomalous verdict ticks into events, merging runs whose gap of
/// non-anomalous ticks is <= max_gap. Verdicts must be sorted by tick.
std::vector<AnomalyEvent> merge_events(const std::vector<VmmVerdict>& verdicts,
                                       std::uint64_t max_gap = 2);

/// VMM-level prediction: anomalous iff at least min_events events.
bool classify_vmm(const std::vector<AnomalyEvent>& events, std::size_t min_events = 1);

/// Everything detect_offline produces for one VMM.
struct DetectionResult {
    std::string vmm_id;
    std::size_t vm_count = 0;
    std::uint64_t ticks = 0;
    std::vector<VmmVerdict> verdicts;
    std::vector<AnomalyEvent> events;
    bool predicted_anomalous = false;
    double detection_seconds = 0.0;
};

/// Batch detection: validates the group, replays it tick-by-tick through
/// VmmEngineState::step and merges events. Identical verdicts to streaming
/// by construction.
DetectionResult detect_offline(const VmmGroup& group, const DetectorConfig& cfg,
                               std::uint64_t event_max_gap = 2, std::size_t min_events = 1);

/// Independent detection over many VMMs, optionally spread across threads.
/// Output order and content match the input order and are identical for any
/// parallelism level.
std::vector<DetectionResult> detect_groups(const std::vector<VmmGroup>& groups,
                                           const DetectorConfig& cfg,
                                           std::uint64_t event_max_gap = 2,
                                           std::size_t min_events = 1,
                                           unsigned parallelism = 1);

}  // namespace iad
