#include "iad/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace iad {

namespace rng {

std::uint64_t hash64(std::string_view s) noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

namespace {
std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}
}  // namespace

std::uint64_t substream_seed(std::uint64_t seed, std::string_view a, std::string_view b,
                             std::string_view c) noexcept {
    std::uint64_t h = splitmix64(seed ^ 0x6A09E667F3BCC909ULL);
    h = splitmix64(h ^ hash64(a));
    if (!b.empty()) h = splitmix64(h ^ hash64(b));
    if (!c.empty()) h = splitmix64(h ^ hash64(c));
    return h;
}

double Stream::gauss() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - u01();  // (0,1], keeps log() finite
    const double u2 = u01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

std::uint64_t Stream::below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
        const std::uint64_t r = next_u64();
        if (r >= threshold) return r % bound;
    }
}

}  // namespace rng

namespace {

double clamp_util(double v) { return std::clamp(v, 0.0, 100.0); }

std::string padded_id(std::string_view prefix, std::size_t index, std::size_t total) {
    std::size_t width = 1;
    for (std::size_t n = total > 0 ? total - 1 : 0; n >= 10; n /= 10) ++width;
    std::string digits = std::to_string(index);
    std::string out(prefix);
    out.append(width > digits.size() ? width - digits.size() : 0, '0');
    out += digits;
    return out;
}

std::uint64_t percent_count(double percent, std::uint64_t total) {
    return static_cast<std::uint64_t>(std::llround(percent / 100.0 * static_cast<double>(total)));
}

}  // namespace

TickInterval SyntheticSpec::resolved_fault_interval() const noexcept {
    if (fault_start != 0 || fault_end != 0) return {fault_start, fault_end};
    const auto start = static_cast<std::uint64_t>(std::llround(0.4 * static_cast<double>(ticks)));
    const auto end = static_cast<std::uint64_t>(std::llround(0.6 * static_cast<double>(ticks)));
    return {std::max<std::uint64_t>(start, 1), std::max<std::uint64_t>(end, 1)};
}

void SyntheticSpec::validate() const {
    if (num_vmms < 1) throw InvalidSpecError("num_vmms", "must be >= 1");
    if (vms_per_vmm < 1) throw InvalidSpecError("vms_per_vmm", "must be >= 1");
    if (ticks < 1) throw InvalidSpecError("ticks", "must be >= 1");
    if (percent_vms_with_fault < 0.0 || percent_vms_with_fault > 100.0)
        throw InvalidSpecError("percent_vms_with_fault", "must be in [0,100]");
    if (percent_anomalous_vmms < 0.0 || percent_anomalous_vmms > 100.0)
        throw InvalidSpecError("percent_anomalous_vmms", "must be in [0,100]");
    if (!(baseline_mean_range[0] <= baseline_mean_range[1]))
        throw InvalidSpecError("baseline_mean_range", "lo must be <= hi");
    if (baseline_mean_range[0] < 0.0 || baseline_mean_range[1] > 100.0)
        throw InvalidSpecError("baseline_mean_range", "must lie within [0,100]");
    if (!(baseline_std > 0.0)) throw InvalidSpecError("baseline_std", "must be > 0");
    if (!std::isfinite(fault_shift)) throw InvalidSpecError("fault_shift", "must be finite");
    const TickInterval fi = resolved_fault_interval();
    if (fi.start_tick < 1 || fi.start_tick > fi.end_tick || fi.end_tick > ticks)
        throw InvalidSpecError("fault_interval",
                               "need 1 <= start <= end <= ticks, got [" +
                                   std::to_string(fi.start_tick) + "," +
                                   std::to_string(fi.end_tick) + "] with ticks=" +
                                   std::to_string(ticks));
}

SyntheticDataset generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    const TickInterval fault = spec.resolved_fault_interval();
    const std::uint64_t n_anomalous = percent_count(spec.percent_anomalous_vmms, spec.num_vmms);
    const std::uint64_t n_faulted_vms = percent_count(spec.percent_vms_with_fault, spec.vms_per_vmm);

    SyntheticDataset out;
    out.groups.reserve(spec.num_vmms);
    out.labels.reserve(spec.num_vmms);

    for (std::uint32_t i = 0; i < spec.num_vmms; ++i) {
        VmmGroup group;
        group.vmm_id = padded_id("vmm-", i, spec.num_vmms);
        const bool designated = i < n_anomalous;

        double shift = spec.fault_shift;
        if (designated && spec.random_shift_sign) {
            rng::Stream vmm_stream(rng::substream_seed(spec.seed, group.vmm_id, "sign"));
            if (vmm_stream.u01() < 0.5) shift = -shift;
        }

        bool injected_any = false;
        group.series.reserve(spec.vms_per_vmm);
        for (std::uint32_t j = 0; j < spec.vms_per_vmm; ++j) {
            VmSeries series;
            series.vm_id = group.vmm_id + "-" + padded_id("vm-", j, spec.vms_per_vmm);
            rng::Stream stream(rng::substream_seed(spec.seed, group.vmm_id, series.vm_id));
            const double mu = spec.baseline_mean_range[0] +
                              stream.u01() * (spec.baseline_mean_range[1] -
                                              spec.baseline_mean_range[0]);
            series.values.reserve(spec.ticks);
            for (std::uint64_t t = 0; t < spec.ticks; ++t)
                series.values.push_back(clamp_util(mu + spec.baseline_std * stream.gauss()));

            if (designated && j < n_faulted_vms && shift != 0.0) {
                series = inject_anomaly(std::move(series), fault, shift);
                injected_any = true;
            }
            group.series.push_back(std::move(series));
        }

        GroundTruth label;
        label.vmm_id = group.vmm_id;
        label.anomalous = injected_any;
        if (injected_any) label.fault_interval = fault;
        out.labels.push_back(std::move(label));
        out.groups.push_back(std::move(group));
    }
    return out;
}

VmSeries inject_anomaly(VmSeries series, TickInterval interval, double shift) {
    if (interval.start_tick < 1 || interval.start_tick > interval.end_tick ||
        interval.end_tick > series.values.size())
        throw IntervalOutOfRangeError(
            "interval [" + std::to_string(interval.start_tick) + "," +
            std::to_string(interval.end_tick) + "] outside series '" + series.vm_id +
            "' of length " + std::to_string(series.values.size()));
    for (std::uint64_t t = interval.start_tick; t <= interval.end_tick; ++t)
        series.values[t - 1] = clamp_util(series.values[t - 1] + shift);
    return series;
}

std::vector<VmmGroup> group_traces(std::vector<VmSeries> pool, std::size_t vms_per_vmm,
                                   std::uint64_t seed, bool truncate_to_shortest) {
    if (vms_per_vmm < 1) throw InvalidSpecError("vms_per_vmm", "must be >= 1");
    if (pool.size() < vms_per_vmm)
        throw PoolTooSmallError("pool of " + std::to_string(pool.size()) +
                                " VMs cannot fill a VMM of " + std::to_string(vms_per_vmm));

    if (truncate_to_shortest) {
        std::size_t shortest = pool.front().values.size();
        for (const VmSeries& s : pool) shortest = std::min(shortest, s.values.size());
        for (VmSeries& s : pool) s.values.resize(shortest);
    } else {
        const std::size_t expected = pool.front().values.size();
        for (const VmSeries& s : pool)
            if (s.values.size() != expected)
                throw LengthMismatchError(expected, s.vm_id, s.values.size());
    }

    std::vector<std::size_t> order(pool.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng::Stream stream(rng::substream_seed(seed, "group-traces"));
    stream.shuffle(order);

    const std::size_t n_groups = pool.size() / vms_per_vmm;
    std::vector<VmmGroup> groups;
    groups.reserve(n_groups);
    for (std::size_t g = 0; g < n_groups; ++g) {
        VmmGroup group;
        group.vmm_id = padded_id("vmm-", g, n_groups);
        group.series.reserve(vms_per_vmm);
        for (std::size_t k = 0; k < vms_per_vmm; ++k)
            group.series.push_back(std::move(pool[order[g * vms_per_vmm + k]]));
        groups.push_back(std::move(group));
    }
    return groups;
}

VmmGroup tile_with_noise(const VmmGroup& group, std::uint64_t target_ticks,
                         double noise_std, std::uint64_t seed) {
    if (!(noise_std >= 0.0)) throw InvalidSpecError("noise_std", "must be >= 0");
    VmmGroup out;
    out.vmm_id = group.vmm_id;
    out.series.reserve(group.series.size());
    for (const VmSeries& s : group.series) {
        if (s.values.empty()) throw EmptySeriesError(s.vm_id);
        VmSeries extended;
        extended.vm_id = s.vm_id;
        extended.values = s.values;
        if (target_ticks > s.values.size()) {
            rng::Stream stream(rng::substream_seed(seed, group.vmm_id, s.vm_id, "tile"));
            extended.values.reserve(target_ticks);
            const std::size_t n = s.values.size();
            for (std::uint64_t t = n; t < target_ticks; ++t)
                extended.values.push_back(
                    clamp_util(s.values[t % n] + noise_std * stream.gauss()));
        }
        out.series.push_back(std::move(extended));
    }
    return out;
}

}  // namespace iad
