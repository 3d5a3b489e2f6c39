#include "iad/model.hpp"

#include <cmath>

namespace iad {

std::string_view to_string(DetectorKind kind) noexcept {
    switch (kind) {
        case DetectorKind::MeanBased: return "mean";
        case DetectorKind::ZScoreBased: return "zscore";
    }
    return "unknown";
}

DetectorKind detector_kind_from_string(std::string_view name) {
    if (name == "mean") return DetectorKind::MeanBased;
    if (name == "zscore") return DetectorKind::ZScoreBased;
    throw InvalidConfigError("unknown detector kind '" + std::string(name) +
                             "' (expected 'mean' or 'zscore')");
}

void DetectorConfig::validate() const {
    if (w < 2) throw InvalidConfigError("w must be >= 2");
    if (!(mean_threshold_percent > 0.0))
        throw InvalidConfigError("mean_threshold_percent must be > 0");
    if (!(z_multiplier > 0.0)) throw InvalidConfigError("z_multiplier must be > 0");
    if (!(min_percent_vms_fault > 0.0) || min_percent_vms_fault > 100.0)
        throw InvalidConfigError("min_percent_vms_fault must be in (0,100]");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw InvalidConfigError("epsilon must be a finite positive real");
}

const VmmGroup& validate_group(const VmmGroup& group) {
    if (group.series.empty())
        throw InvalidConfigError("vmm '" + group.vmm_id + "' hosts no VMs");
    const std::size_t expected = group.series.front().values.size();
    for (const VmSeries& s : group.series) {
        if (s.values.empty()) throw EmptySeriesError(s.vm_id);
        if (s.values.size() != expected)
            throw LengthMismatchError(expected, s.vm_id, s.values.size());
    }
    return group;
}

std::size_t count_values_outside_range(const VmmGroup& group) noexcept {
    std::size_t n = 0;
    for (const VmSeries& s : group.series)
        for (double v : s.values)
            if (v < 0.0 || v > 100.0) ++n;
    return n;
}

}  // namespace iad
