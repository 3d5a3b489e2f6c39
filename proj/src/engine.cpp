#include "iad/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>

namespace iad {

VmmEngineState::VmmEngineState(std::string vmm_id, std::vector<std::string> vm_ids,
                               const DetectorConfig& cfg)
    : vmm_id_(std::move(vmm_id)), cfg_(cfg) {
    cfg_.validate();
    if (vm_ids.empty())
        throw InvalidConfigError("vmm '" + vmm_id_ + "' needs at least one VM");
    vms_.reserve(vm_ids.size());
    for (std::string& id : vm_ids) vms_.emplace_back(std::move(id), cfg_);
}

std::optional<VmmVerdict> VmmEngineState::step(std::span<const double> xs) {
    if (xs.size() != vms_.size()) throw ArityMismatchError(vms_.size(), xs.size());
    ++ticks_seen_;

    bool have_verdict = false;
    std::uint64_t tick = 0;
    std::vector<std::string> changed;
    for (std::size_t j = 0; j < vms_.size(); ++j) {
        const auto v = vms_[j].step(xs[j], cfg_);
        if (!v) continue;
        have_verdict = true;  // lock-step: all VMs report the same tick
        tick = v->tick;
        if (v->change_point) changed.push_back(vms_[j].vm_id());
    }
    if (!have_verdict) return std::nullopt;

    std::sort(changed.begin(), changed.end());
    const double d = static_cast<double>(vms_.size());
    const double vote = static_cast<double>(changed.size()) / d;
    const bool anomalous = vote * 100.0 >= cfg_.min_percent_vms_fault;
    return VmmVerdict{vmm_id_, tick, anomalous, std::move(changed), vote};
}

std::vector<AnomalyEvent> merge_events(const std::vector<VmmVerdict>& verdicts,
                                       std::uint64_t max_gap) {
    std::vector<AnomalyEvent> events;
    for (const VmmVerdict& v : verdicts) {
        if (!v.anomalous) continue;
        if (!events.empty() && v.tick >= events.back().end_tick &&
            v.tick - events.back().end_tick <= max_gap + 1) {
            events.back().end_tick = v.tick;
            events.back().peak_vote_fraction =
                std::max(events.back().peak_vote_fraction, v.vote_fraction);
        } else {
            events.push_back(AnomalyEvent{v.vmm_id, v.tick, v.tick, v.vote_fraction});
        }
    }
    return events;
}

bool classify_vmm(const std::vector<AnomalyEvent>& events, std::size_t min_events) {
    return events.size() >= min_events;
}

DetectionResult detect_offline(const VmmGroup& group, const DetectorConfig& cfg,
                               std::uint64_t event_max_gap, std::size_t min_events) {
    validate_group(group);

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> vm_ids;
    vm_ids.reserve(group.series.size());
    for (const VmSeries& s : group.series) vm_ids.push_back(s.vm_id);
    VmmEngineState engine(group.vmm_id, std::move(vm_ids), cfg);

    const std::size_t n = group.tick_count();
    const std::size_t d = group.vm_count();
    DetectionResult result;
    result.vmm_id = group.vmm_id;
    result.vm_count = d;
    result.ticks = n;

    std::vector<double> xs(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) xs[j] = group.series[j].values[i];
        if (auto verdict = engine.step(xs)) result.verdicts.push_back(std::move(*verdict));
    }
    result.events = merge_events(result.verdicts, event_max_gap);
    result.predicted_anomalous = classify_vmm(result.events, min_events);
    const auto t1 = std::chrono::steady_clock::now();
    result.detection_seconds = std::chrono::duration<double>(t1 - t0).count();
    return result;
}

std::vector<DetectionResult> detect_groups(const std::vector<VmmGroup>& groups,
                                           const DetectorConfig& cfg,
                                           std::uint64_t event_max_gap,
                                           std::size_t min_events, unsigned parallelism) {
    std::vector<DetectionResult> results(groups.size());
    if (parallelism <= 1 || groups.size() <= 1) {
        for (std::size_t i = 0; i < groups.size(); ++i)
            results[i] = detect_offline(groups[i], cfg, event_max_gap, min_events);
        return results;
    }

    // VMMs are independent; threads claim indices and fill disjoint slots, so
    // the result is identical to the serial loop.
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < groups.size(); i = next++) {
            try {
                results[i] = detect_offline(groups[i], cfg, event_max_gap, min_events);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    const unsigned n_threads =
        std::min<std::size_t>(parallelism, groups.size());
    std::vector<std::thread> threads;
    threads.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
    if (error) std::rethrow_exception(error);
    return results;
}

}  // namespace iad
