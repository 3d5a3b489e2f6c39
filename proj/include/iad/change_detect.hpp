#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iad/model.hpp"
#include "iad/running_stats.hpp"

namespace iad {

/// Decision about one tick of one VM's stream.
struct ChangePointVerdict {
    std::uint64_t tick = 0;
    bool change_point = false;

    friend bool operator==(const ChangePointVerdict&, const ChangePointVerdict&) = default;
};

/// True iff the absolute percentage difference between the window mean and
/// the pre-window global mean exceeds cfg.mean_threshold_percent.
bool mean_detector(std::span<const double> window, const RunningStats& history,
                   const DetectorConfig& cfg);

/// True iff |z| > cfg.z_multiplier where z = (windowed_mean - global_mean)
/// / (global_std / sqrt(w)). A constant history (std <= epsilon) degrades to
/// an epsilon comparison of the means. Needs history.count() >= 2.
bool zscore_detector(std::span<const double> window, const RunningStats& history,
                     const DetectorConfig& cfg);

/// Same predicates with the window mean already computed (the streaming
/// state keeps it incrementally).
bool mean_detector_at(double window_mean, const RunningStats& history,
                      const DetectorConfig& cfg);
bool zscore_detector_at(double window_mean, std::size_t window_size,
                        const RunningStats& history, const DetectorConfig& cfg);

/// History ticks required before the first verdict: the configured warm-up,
/// floored at what the detector kind needs (1 for mean, 2 for z-score).
std::uint64_t effective_warmup(const DetectorConfig& cfg) noexcept;

/// Online per-VM change-point detector. Holds the w most recent values in a
/// FIFO window covering ticks (t, t+w]; values leaving the window fold into
/// the running global statistics over ticks <= t. Upon ingesting tick t+w
/// (and once warm) it emits the verdict for tick t = ticks_seen - w.
class VmDetectorState {
public:
    VmDetectorState(std::string vm_id, const DetectorConfig& cfg);

    /// Ingests the next tick. Returns the verdict for tick ticks_seen - w
    /// once the window is full and the history is warm, nullopt otherwise.
    std::optional<ChangePointVerdict> step(double x, const DetectorConfig& cfg);

    const std::string& vm_id() const noexcept { return vm_id_; }
    std::uint64_t ticks_seen() const noexcept { return ticks_seen_; }
    const RunningStats& history_stats() const noexcept { return history_; }
    std::size_t pending_size() const noexcept { return fill_; }

    /// Snapshot of the pending window in arrival order.
    std::vector<double> pending_window() const;

private:
    std::string vm_id_;
    std::vector<double> ring_;  // capacity w
    std::size_t head_ = 0;      // index of the oldest pending value
    std::size_t fill_ = 0;
    double window_sum_ = 0.0;
    RunningStats history_;
    std::uint64_t ticks_seen_ = 0;
};

}  // namespace iad
