#include "iad/report_json.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "iad/csv_io.hpp"

namespace iad {

using nlohmann::json;

json config_to_json(const RunOptions& options) {
    return json{
        {"w", options.detector.w},
        {"mean_threshold_percent", options.detector.mean_threshold_percent},
        {"z_multiplier", options.detector.z_multiplier},
        {"min_percent_vms_fault", options.detector.min_percent_vms_fault},
        {"warmup_ticks", options.detector.warmup_ticks},
        {"epsilon", options.detector.epsilon},
        {"detector", std::string(to_string(options.detector.detector_kind))},
        {"event_max_gap", options.event_max_gap},
        {"min_events", options.min_events},
        {"parallelism", options.parallelism},
    };
}

RunOptions config_from_json(const json& j) {
    RunOptions options;
    options.detector.w = j.at("w").get<std::uint32_t>();
    options.detector.mean_threshold_percent = j.at("mean_threshold_percent").get<double>();
    options.detector.z_multiplier = j.at("z_multiplier").get<double>();
    options.detector.min_percent_vms_fault = j.at("min_percent_vms_fault").get<double>();
    options.detector.warmup_ticks = j.at("warmup_ticks").get<std::uint64_t>();
    options.detector.epsilon = j.at("epsilon").get<double>();
    options.detector.detector_kind =
        detector_kind_from_string(j.at("detector").get<std::string>());
    options.event_max_gap = j.at("event_max_gap").get<std::uint64_t>();
    options.min_events = j.at("min_events").get<std::size_t>();
    options.parallelism = j.at("parallelism").get<unsigned>();
    return options;
}

namespace {

json event_to_json(const AnomalyEvent& e) {
    return json{{"start_tick", e.start_tick},
                {"end_tick", e.end_tick},
                {"peak_vote_fraction", e.peak_vote_fraction}};
}

AnomalyEvent event_from_json(const std::string& vmm_id, const json& j) {
    AnomalyEvent e;
    e.vmm_id = vmm_id;
    e.start_tick = j.at("start_tick").get<std::uint64_t>();
    e.end_tick = j.at("end_tick").get<std::uint64_t>();
    e.peak_vote_fraction = j.at("peak_vote_fraction").get<double>();
    return e;
}

}  // namespace

json detection_report_to_json(const std::vector<DetectionResult>& results,
                              const RunOptions& options, bool include_full_verdicts) {
    json vmms = json::array();
    double total_seconds = 0.0;
    json per_vmm_seconds = json::object();
    for (const DetectionResult& r : results) {
        json anomalous_ticks = json::array();
        json vote_fractions = json::array();
        for (const VmmVerdict& v : r.verdicts) {
            if (!v.anomalous) continue;
            anomalous_ticks.push_back(v.tick);
            vote_fractions.push_back(v.vote_fraction);
        }
        json events = json::array();
        for (const AnomalyEvent& e : r.events) events.push_back(event_to_json(e));

        json entry{
            {"vmm_id", r.vmm_id},
            {"num_vms", r.vm_count},
            {"ticks", r.ticks},
            {"verdict_count", r.verdicts.size()},
            {"first_verdict_tick",
             r.verdicts.empty() ? json(nullptr) : json(r.verdicts.front().tick)},
            {"last_verdict_tick",
             r.verdicts.empty() ? json(nullptr) : json(r.verdicts.back().tick)},
            {"anomalous_ticks", std::move(anomalous_ticks)},
            {"vote_fractions", std::move(vote_fractions)},
            {"events", std::move(events)},
            {"predicted_anomalous", r.predicted_anomalous},
        };
        if (include_full_verdicts) {
            json verdicts = json::array();
            for (const VmmVerdict& v : r.verdicts)
                verdicts.push_back(json{{"tick", v.tick},
                                        {"anomalous", v.anomalous},
                                        {"vote_fraction", v.vote_fraction},
                                        {"changed_vm_ids", v.changed_vm_ids}});
            entry["verdicts"] = std::move(verdicts);
        }
        vmms.push_back(std::move(entry));
        per_vmm_seconds[r.vmm_id] = r.detection_seconds;
        total_seconds += r.detection_seconds;
    }

    return json{
        {"schema", "iad.detection/1"},
        {"config", config_to_json(options)},
        {"vmms", std::move(vmms)},
        {"timings",
         {{"detection_seconds_total", total_seconds},
          {"detection_seconds_per_vmm", std::move(per_vmm_seconds)}}},
    };
}

ParsedDetectionReport detection_report_from_json(const json& j) {
    if (j.value("schema", "") != "iad.detection/1")
        throw Error("not an iad.detection/1 document");
    ParsedDetectionReport parsed;
    parsed.options = config_from_json(j.at("config"));
    for (const json& entry : j.at("vmms")) {
        DetectionResult r;
        r.vmm_id = entry.at("vmm_id").get<std::string>();
        r.vm_count = entry.at("num_vms").get<std::size_t>();
        r.ticks = entry.at("ticks").get<std::uint64_t>();
        r.predicted_anomalous = entry.at("predicted_anomalous").get<bool>();
        for (const json& e : entry.at("events"))
            r.events.push_back(event_from_json(r.vmm_id, e));
        if (entry.contains("verdicts")) {
            for (const json& v : entry.at("verdicts")) {
                VmmVerdict verdict;
                verdict.vmm_id = r.vmm_id;
                verdict.tick = v.at("tick").get<std::uint64_t>();
                verdict.anomalous = v.at("anomalous").get<bool>();
                verdict.vote_fraction = v.at("vote_fraction").get<double>();
                verdict.changed_vm_ids =
                    v.at("changed_vm_ids").get<std::vector<std::string>>();
                r.verdicts.push_back(std::move(verdict));
            }
        }
        parsed.predicted[r.vmm_id] = r.predicted_anomalous;
        parsed.results.push_back(std::move(r));
    }
    return parsed;
}

json eval_report_to_json(const EvalReport& report) {
    json table = json::array();
    for (const VmmClassification& c : report.table)
        table.push_back(json{{"vmm_id", c.vmm_id},
                             {"truth_anomalous", c.truth},
                             {"predicted_anomalous", c.predicted},
                             {"outcome", std::string(to_string(c.outcome))}});
    return json{
        {"schema", "iad.eval/1"},
        {"true_positives", report.true_positives},
        {"false_positives", report.false_positives},
        {"false_negatives", report.false_negatives},
        {"true_negatives", report.true_negatives},
        {"precision", report.precision},
        {"recall", report.recall},
        {"f1", report.f1},
        {"per_vmm", std::move(table)},
    };
}

json bench_report_to_json(const BenchReport& report, const RunOptions& options) {
    json grid = json::array();
    for (const BenchEntry& e : report.grid)
        grid.push_back(json{{"num_vms", e.num_vms},
                            {"num_ticks", e.num_ticks},
                            {"seconds", e.seconds}});
    return json{
        {"schema", "iad.bench/1"},
        {"config", config_to_json(options)},
        {"parallelism", report.parallelism},
        {"repetitions", report.repetitions},
        {"environment",
         {{"compiler", report.compiler}, {"hardware_threads", report.hardware_threads}}},
        {"grid", std::move(grid)},
    };
}

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw Error("malformed JSON in '" + path.string() + "': " + e.what());
    }
    return j;
}

void write_json_atomic(const json& j, const std::filesystem::path& path) {
    write_file_atomic(path, j.dump(2) + "\n");
}

}  // namespace iad
