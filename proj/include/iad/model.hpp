#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iad/errors.hpp"

namespace iad {

/// One VM's utilization time series. Ticks are 1-based: values[0] is tick 1.
struct VmSeries {
    std::string vm_id;
    std::vector<double> values;
};

/// The d equally-long series hosted on one VMM; the unit of detection.
struct VmmGroup {
    std::string vmm_id;
    std::vector<VmSeries> series;

    std::size_t vm_count() const noexcept { return series.size(); }
    std::size_t tick_count() const noexcept { return series.empty() ? 0 : series.front().values.size(); }
};

enum class DetectorKind { MeanBased, ZScoreBased };

std::string_view to_string(DetectorKind kind) noexcept;
DetectorKind detector_kind_from_string(std::string_view name);

/// Detection hyper-parameters. Defaults: w=60 ticks, mean threshold k=5%,
/// z multiplier 3, minPercentVMsFault f=90%, warm-up of one window of
/// history before the first verdict.
struct DetectorConfig {
    std::uint32_t w = 60;
    double mean_threshold_percent = 5.0;
    double z_multiplier = 3.0;
    double min_percent_vms_fault = 90.0;
    std::uint64_t warmup_ticks = 60;
    double epsilon = 1e-9;
    DetectorKind detector_kind = DetectorKind::ZScoreBased;

    /// Throws InvalidConfigError on out-of-range fields.
    void validate() const;
};

/// Inclusive 1-based tick range.
struct TickInterval {
    std::uint64_t start_tick = 0;
    std::uint64_t end_tick = 0;

    bool contains(std::uint64_t tick) const noexcept {
        return tick >= start_tick && tick <= end_tick;
    }
    friend bool operator==(const TickInterval&, const TickInterval&) = default;
};

/// Per-tick decision for one VMM. changed_vm_ids is kept sorted so it
/// behaves as a set regardless of the VM order inside the group.
struct VmmVerdict {
    std::string vmm_id;
    std::uint64_t tick = 0;
    bool anomalous = false;
    std::vector<std::string> changed_vm_ids;
    double vote_fraction = 0.0;
};

/// VMM-level label, optionally with the injected fault interval.
struct GroundTruth {
    std::string vmm_id;
    bool anomalous = false;
    std::optional<TickInterval> fault_interval;
};

/// Checks the group for zero-length series and length mismatches; both abort
/// detection for the whole group. Returns the group untouched on success.
/// Throws EmptySeriesError or LengthMismatchError.
const VmmGroup& validate_group(const VmmGroup& group);

/// Values outside [0,100] are legal (detection does not need bounds) but
/// worth a warning at ingestion time; this counts them.
std::size_t count_values_outside_range(const VmmGroup& group) noexcept;

}  // namespace iad
