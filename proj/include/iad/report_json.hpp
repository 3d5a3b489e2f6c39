#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "iad/bench.hpp"
#include "iad/engine.hpp"
#include "iad/eval.hpp"
#include "iad/model.hpp"

namespace iad {

/// Engine/run options echoed into every JSON artifact so a run can be
/// reproduced from its output alone.
struct RunOptions {
    DetectorConfig detector;
    std::uint64_t event_max_gap = 2;
    std::size_t min_events = 1;
    unsigned parallelism = 1;
};

nlohmann::json config_to_json(const RunOptions& options);
RunOptions config_from_json(const nlohmann::json& j);

/// Detection document: config echo, per-VMM verdict summary (anomalous
/// ticks with their vote fractions, merged events, prediction) and wall
/// clock timings. When include_full_verdicts is set, every verdict is
/// included verbatim. Deterministic apart from the "timings" object.
nlohmann::json detection_report_to_json(const std::vector<DetectionResult>& results,
                                        const RunOptions& options,
                                        bool include_full_verdicts = false);

/// The subset of the detection document evaluation needs.
struct ParsedDetectionReport {
    RunOptions options;
    std::map<std::string, bool> predicted;
    std::vector<DetectionResult> results;  // verdicts only if the file has them
};

ParsedDetectionReport detection_report_from_json(const nlohmann::json& j);

nlohmann::json eval_report_to_json(const EvalReport& report);
nlohmann::json bench_report_to_json(const BenchReport& report, const RunOptions& options);

nlohmann::json load_json(const std::filesystem::path& path);
void write_json_atomic(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace iad
