#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iad/datagen.hpp"
#include "iad/model.hpp"

namespace iad {

struct BenchEntry {
    std::size_t num_vms = 0;
    std::uint64_t num_ticks = 0;
    double seconds = 0.0;  // median over repetitions, detection only
};

struct BenchReport {
    std::vector<BenchEntry> grid;
    unsigned parallelism = 1;
    int repetitions = 3;
    std::string compiler;
    unsigned hardware_threads = 0;
};

/// Times detect_offline over a (VM count x tick count) grid of single-VMM
/// datasets built from base_spec: generated at base_spec.ticks and tiled
/// with Gaussian noise out to the target tick count. Data construction and
/// I/O are outside the timed region; each grid point reports the median of
/// `repetitions` runs on identical data.
BenchReport bench_scaling(const std::vector<std::size_t>& vm_counts,
                          const std::vector<std::uint64_t>& tick_counts,
                          const SyntheticSpec& base_spec, const DetectorConfig& cfg,
                          int repetitions = 3, unsigned parallelism = 1);

/// `num_vms,num_ticks,seconds` rows for plotting.
std::string bench_report_csv(const BenchReport& report);

}  // namespace iad
