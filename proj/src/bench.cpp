#include "iad/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <thread>

#include "iad/engine.hpp"

namespace iad {

namespace {

double median3(double a, double b, double c) {
    return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

BenchReport bench_scaling(const std::vector<std::size_t>& vm_counts,
                          const std::vector<std::uint64_t>& tick_counts,
                          const SyntheticSpec& base_spec, const DetectorConfig& cfg,
                          int repetitions, unsigned parallelism) {
    if (vm_counts.empty()) throw InvalidSpecError("vm_counts", "must be non-empty");
    if (tick_counts.empty()) throw InvalidSpecError("tick_counts", "must be non-empty");
    if (repetitions < 1) throw InvalidSpecError("repetitions", "must be >= 1");
    cfg.validate();

    BenchReport report;
    report.parallelism = parallelism;
    report.repetitions = repetitions;
    report.compiler = __VERSION__;
    report.hardware_threads = std::thread::hardware_concurrency();

    for (const std::size_t vms : vm_counts) {
        for (const std::uint64_t ticks : tick_counts) {
            SyntheticSpec spec = base_spec;
            spec.num_vmms = 1;
            spec.vms_per_vmm = static_cast<std::uint32_t>(vms);
            spec.ticks = std::min<std::uint64_t>(ticks, base_spec.ticks);
            SyntheticDataset data = generate_synthetic(spec);
            VmmGroup group = ticks > spec.ticks
                                 ? tile_with_noise(data.groups.front(), ticks,
                                                   spec.baseline_std, spec.seed)
                                 : std::move(data.groups.front());

            std::vector<double> timings;
            timings.reserve(static_cast<std::size_t>(repetitions));
            for (int rep = 0; rep < repetitions; ++rep) {
                const auto t0 = std::chrono::steady_clock::now();
                DetectionResult result = detect_offline(group, cfg);
                const auto t1 = std::chrono::steady_clock::now();
                (void)result;
                timings.push_back(std::chrono::duration<double>(t1 - t0).count());
            }
            const double seconds = timings.size() == 3
                                       ? median3(timings[0], timings[1], timings[2])
                                       : median(timings);
            report.grid.push_back(BenchEntry{vms, ticks, seconds});
        }
    }
    return report;
}

std::string bench_report_csv(const BenchReport& report) {
    std::string out = "num_vms,num_ticks,seconds\n";
    for (const BenchEntry& e : report.grid) {
        out += std::to_string(e.num_vms);
        out += ',';
        out += std::to_string(e.num_ticks);
        out += ',';
        char buf[32];
        const auto r = std::to_chars(buf, buf + sizeof(buf), e.seconds);
        out.append(buf, r.ptr);
        out += '\n';
    }
    return out;
}

}  // namespace iad
