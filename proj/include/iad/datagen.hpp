#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "iad/model.hpp"

namespace iad {

namespace rng {

/// Stable 64-bit hash (FNV-1a); std::hash is not portable across builds.
std::uint64_t hash64(std::string_view s) noexcept;

/// Derives the seed for one named substream. Generation is keyed by
/// (seed, vmm_id, vm_id[, tag]) so output does not depend on the order or
/// parallelism of generation.
std::uint64_t substream_seed(std::uint64_t seed, std::string_view a,
                             std::string_view b = {}, std::string_view c = {}) noexcept;

/// Deterministic random stream. mt19937_64 is fully specified by the
/// standard; the uniform and Gaussian transforms are spelled out here
/// because the std distributions are implementation-defined.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0,1), 53-bit resolution.
    double u01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (pairs cached).
    double gauss();

    /// Uniform integer in [0, bound), unbiased via rejection.
    std::uint64_t below(std::uint64_t bound);

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i)
            std::swap(items[i - 1], items[below(i)]);
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace rng

/// Parameters for the synthetic dataset generator. Per-VM baselines are
/// uniform in baseline_mean_range, per-tick values Gaussian around them;
/// anomalous VMMs get fault_shift added to a fraction of their VMs over
/// fault_interval. fault_start/fault_end of 0 mean "40%..60% of ticks".
struct SyntheticSpec {
    std::uint32_t num_vmms = 10;
    std::uint32_t vms_per_vmm = 10;
    double percent_vms_with_fault = 100.0;
    double percent_anomalous_vmms = 50.0;
    std::uint64_t ticks = 1000;
    std::array<double, 2> baseline_mean_range{20.0, 60.0};
    double baseline_std = 2.0;
    double fault_shift = 25.0;
    bool random_shift_sign = true;  // per-VMM coin flip on the shift direction
    std::uint64_t fault_start = 0;
    std::uint64_t fault_end = 0;
    std::uint64_t seed = 42;

    /// Fault interval with the 40%..60% default applied.
    TickInterval resolved_fault_interval() const noexcept;

    /// Throws InvalidSpecError naming the offending field.
    void validate() const;
};

struct SyntheticDataset {
    std::vector<VmmGroup> groups;
    std::vector<GroundTruth> labels;
};

/// Generates labeled groups. Deterministic given spec.seed; each VM's values
/// come from substream (seed, vmm_id, vm_id). A VMM is labeled anomalous iff
/// at least one of its VMs was injected.
SyntheticDataset generate_synthetic(const SyntheticSpec& spec);

/// Adds `shift` to the values inside the 1-based inclusive interval and
/// clamps everything it touched to [0,100]. Other ticks are untouched.
VmSeries inject_anomaly(VmSeries series, TickInterval interval, double shift);

/// Randomly partitions the pool into groups of vms_per_vmm (leftovers
/// dropped), the recipe used to adapt external per-VM traces. Series must be
/// equally long unless truncate_to_shortest is set.
std::vector<VmmGroup> group_traces(std::vector<VmSeries> pool, std::size_t vms_per_vmm,
                                   std::uint64_t seed, bool truncate_to_shortest = false);

/// Extends every series to target_ticks by tiling it with additive Gaussian
/// noise (the scalability-benchmark recipe). No-op if already long enough.
VmmGroup tile_with_noise(const VmmGroup& group, std::uint64_t target_ticks,
                         double noise_std, std::uint64_t seed);

}  // namespace iad
