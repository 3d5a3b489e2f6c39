#include "iad/change_detect.hpp"

#include <algorithm>
#include <cmath>

namespace iad {

bool mean_detector_at(double window_mean, const RunningStats& history,
                      const DetectorConfig& cfg) {
    const double global_mean = history.mean();
    const double denom = std::max(std::abs(global_mean), cfg.epsilon);
    const double percent_diff = 100.0 * std::abs(window_mean - global_mean) / denom;
    return percent_diff > cfg.mean_threshold_percent;
}

bool zscore_detector_at(double window_mean, std::size_t window_size,
                        const RunningStats& history, const DetectorConfig& cfg) {
    if (history.count() < 2)
        throw InsufficientHistoryError("z-score detector needs at least 2 history ticks");
    const double global_mean = history.mean();
    const double global_std = history.stddev();
    if (global_std <= cfg.epsilon)
        return std::abs(window_mean - global_mean) > cfg.epsilon;
    const double z = (window_mean - global_mean) /
                     (global_std / std::sqrt(static_cast<double>(window_size)));
    return std::abs(z) > cfg.z_multiplier;
}

bool mean_detector(std::span<const double> window, const RunningStats& history,
                   const DetectorConfig& cfg) {
    return mean_detector_at(windowed_mean(window), history, cfg);
}

bool zscore_detector(std::span<const double> window, const RunningStats& history,
                     const DetectorConfig& cfg) {
    return zscore_detector_at(windowed_mean(window), window.size(), history, cfg);
}

std::uint64_t effective_warmup(const DetectorConfig& cfg) noexcept {
    const std::uint64_t floor = cfg.detector_kind == DetectorKind::ZScoreBased ? 2 : 1;
    return std::max(cfg.warmup_ticks, floor);
}

VmDetectorState::VmDetectorState(std::string vm_id, const DetectorConfig& cfg)
    : vm_id_(std::move(vm_id)) {
    cfg.validate();
    ring_.resize(cfg.w, 0.0);
}

std::optional<ChangePointVerdict> VmDetectorState::step(double x, const DetectorConfig& cfg) {
    if (!std::isfinite(x))
        throw InvalidSampleError("non-finite sample for vm '" + vm_id_ + "'");
    if (cfg.w != ring_.size())
        throw InvalidConfigError("cfg.w changed mid-stream for vm '" + vm_id_ + "'");

    const std::size_t w = ring_.size();
    ++ticks_seen_;
    if (fill_ < w) {
        ring_[(head_ + fill_) % w] = x;
        ++fill_;
        window_sum_ += x;
    } else {
        const double oldest = ring_[head_];
        history_.push(oldest);
        window_sum_ += x - oldest;
        ring_[head_] = x;
        head_ = (head_ + 1) % w;
    }

    if (fill_ < w || history_.count() < effective_warmup(cfg)) return std::nullopt;

    const std::uint64_t t = ticks_seen_ - w;
    const double wm = window_sum_ / static_cast<double>(w);
    const bool change = cfg.detector_kind == DetectorKind::ZScoreBased
                            ? zscore_detector_at(wm, w, history_, cfg)
                            : mean_detector_at(wm, history_, cfg);
    return ChangePointVerdict{t, change};
}

std::vector<double> VmDetectorState::pending_window() const {
    std::vector<double> out;
    out.reserve(fill_);
    for (std::size_t i = 0; i < fill_; ++i) out.push_back(ring_[(head_ + i) % ring_.size()]);
    return out;
}

}  // namespace iad
