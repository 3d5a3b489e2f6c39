// iad: detect anomalous hypervisors from the utilization series of their VMs.
//
// Subcommands: generate (synthetic labeled datasets), detect (run detection
// over a trace file), evaluate (score a detection report against labels),
// bench (scalability grid), pipeline (generate + detect + evaluate in one
// deterministic run). Exit codes: 0 success, 2 usage/validation, 3 I/O,
// 4 internal.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "iad/bench.hpp"
#include "iad/csv_io.hpp"
#include "iad/datagen.hpp"
#include "iad/engine.hpp"
#include "iad/errors.hpp"
#include "iad/eval.hpp"
#include "iad/report_json.hpp"

namespace {

struct GenerateArgs {
    iad::SyntheticSpec spec;
    std::string traces_path = "traces.csv";
    std::string labels_path = "labels.csv";
};

struct DetectArgs {
    iad::RunOptions options;
    std::string traces_path;
    std::string out_path = "detection.json";
    std::string detector_name = "zscore";
    bool full_verdicts = false;
};

struct EvaluateArgs {
    std::string report_path;
    std::string labels_path;
    std::string out_path = "eval.json";
};

struct BenchArgs {
    std::vector<std::size_t> vm_counts{1, 10, 100};
    std::vector<std::uint64_t> tick_counts{1000, 10000};
    std::uint64_t base_ticks = 10000;
    std::uint64_t seed = 42;
    int repetitions = 3;
    iad::RunOptions options;
    std::string detector_name = "zscore";
    std::string out_path = "bench.json";
    std::string csv_path = "bench.csv";
};

struct PipelineArgs {
    iad::SyntheticSpec spec;
    iad::RunOptions options;
    std::string detector_name = "zscore";
    std::string detection_out;  // optional artifact paths
    std::string eval_out;
};

void add_spec_options(CLI::App& cmd, iad::SyntheticSpec& spec) {
    cmd.add_option("--num-vmms", spec.num_vmms, "Number of VMMs to generate")
        ->capture_default_str();
    cmd.add_option("--vms-per-vmm", spec.vms_per_vmm, "VMs hosted per VMM")
        ->capture_default_str();
    cmd.add_option("--ticks", spec.ticks, "Ticks per series")->capture_default_str();
    cmd.add_option("--percent-anomalous-vmms", spec.percent_anomalous_vmms,
                   "Share of VMMs that receive a fault, in percent")
        ->capture_default_str();
    cmd.add_option("--percent-vms-with-fault", spec.percent_vms_with_fault,
                   "Share of VMs injected inside an anomalous VMM, in percent")
        ->capture_default_str();
    cmd.add_option("--baseline-mean-min", spec.baseline_mean_range[0],
                   "Lower bound for per-VM baseline mean utilization")
        ->capture_default_str();
    cmd.add_option("--baseline-mean-max", spec.baseline_mean_range[1],
                   "Upper bound for per-VM baseline mean utilization")
        ->capture_default_str();
    cmd.add_option("--baseline-std", spec.baseline_std, "Gaussian noise std around the baseline")
        ->capture_default_str();
    cmd.add_option("--fault-shift", spec.fault_shift, "Mean shift injected during the fault")
        ->capture_default_str();
    cmd.add_flag("--random-shift-sign,!--fixed-shift-sign", spec.random_shift_sign,
                 "Pick the shift direction per VMM at random (default on)");
    cmd.add_option("--fault-start", spec.fault_start,
                   "First injected tick; 0 means 40% of the stream")
        ->capture_default_str();
    cmd.add_option("--fault-end", spec.fault_end,
                   "Last injected tick; 0 means 60% of the stream")
        ->capture_default_str();
    cmd.add_option("--seed", spec.seed, "Generation seed")
        ->envname("IAD_SEED")
        ->capture_default_str();
}

/// Shared detection flags. Returns the --warmup-ticks option so callers can
/// apply the "default to w" rule only when it was not given explicitly.
CLI::Option* add_detector_options(CLI::App& cmd, iad::RunOptions& options,
                                  std::string& detector_name) {
    iad::DetectorConfig& d = options.detector;
    cmd.add_option("--detector", detector_name, "Change-point detector: mean or zscore")
        ->check(CLI::IsMember({"mean", "zscore"}))
        ->envname("IAD_DETECTOR")
        ->capture_default_str();
    cmd.add_option("-w,--window", d.w, "Window length w in ticks")
        ->envname("IAD_WINDOW")
        ->capture_default_str();
    cmd.add_option("--mean-threshold", d.mean_threshold_percent,
                   "Mean detector threshold k, percent difference")
        ->capture_default_str();
    cmd.add_option("--z-multiplier", d.z_multiplier, "Z-score detector threshold multiplier")
        ->capture_default_str();
    cmd.add_option("--min-percent-vms-fault", d.min_percent_vms_fault,
                   "Percent of VMs that must change to flag the VMM")
        ->envname("IAD_MIN_PERCENT_VMS_FAULT")
        ->capture_default_str();
    CLI::Option* warmup =
        cmd.add_option("--warmup-ticks", d.warmup_ticks,
                       "History ticks before the first verdict (default: w)")
            ->capture_default_str();
    cmd.add_option("--epsilon", d.epsilon, "Degenerate-guard epsilon")->capture_default_str();
    cmd.add_option("--event-max-gap", options.event_max_gap,
                   "Merge anomalous runs separated by at most this many clean ticks")
        ->capture_default_str();
    cmd.add_option("--min-events", options.min_events,
                   "Events needed to call a VMM anomalous")
        ->capture_default_str();
    cmd.add_option("--parallelism", options.parallelism, "Worker threads across VMMs")
        ->envname("IAD_PARALLELISM")
        ->capture_default_str();
    return warmup;
}

void finalize_detector(iad::RunOptions& options, const std::string& detector_name,
                       const CLI::Option* warmup_opt) {
    options.detector.detector_kind = iad::detector_kind_from_string(detector_name);
    if (warmup_opt->count() == 0) options.detector.warmup_ticks = options.detector.w;
    options.detector.validate();
}

/// Wraps group validation so failures name the VMM as well as the VM.
void validate_groups(const std::vector<iad::VmmGroup>& groups) {
    for (const iad::VmmGroup& g : groups) {
        try {
            iad::validate_group(g);
        } catch (const iad::IoError&) {
            throw;
        } catch (const iad::Error& e) {
            throw iad::Error("vmm '" + g.vmm_id + "': " + e.what());
        }
    }
}

void warn_out_of_range(const std::vector<iad::VmmGroup>& groups) {
    std::size_t outside = 0;
    for (const iad::VmmGroup& g : groups) outside += iad::count_values_outside_range(g);
    if (outside > 0)
        std::cerr << "warning: " << outside
                  << " utilization values outside [0,100]; detection proceeds\n";
}

std::map<std::string, bool> predictions_of(const std::vector<iad::DetectionResult>& results) {
    std::map<std::string, bool> predicted;
    for (const iad::DetectionResult& r : results) predicted[r.vmm_id] = r.predicted_anomalous;
    return predicted;
}

/// Both directions must match: every label needs a prediction (library rule)
/// and every predicted VMM needs a label, so silent partial scoring is
/// impossible from the command line.
void require_label_coverage(const std::map<std::string, bool>& predicted,
                            const std::vector<iad::GroundTruth>& labels) {
    std::map<std::string, bool> labeled;
    for (const iad::GroundTruth& l : labels) labeled[l.vmm_id] = true;
    for (const auto& [vmm_id, ignored] : predicted) {
        (void)ignored;
        if (!labeled.count(vmm_id))
            throw iad::Error("no ground-truth label for vmm '" + vmm_id + "'");
    }
}

int run_generate(const GenerateArgs& args) {
    args.spec.validate();
    const iad::SyntheticDataset data = iad::generate_synthetic(args.spec);
    iad::write_traces_csv(data.groups, args.traces_path);
    iad::write_labels_csv(data.labels, args.labels_path);

    std::size_t anomalous = 0;
    for (const iad::GroundTruth& l : data.labels) anomalous += l.anomalous ? 1 : 0;
    std::cout << "generated " << data.groups.size() << " VMMs (" << anomalous << " anomalous), "
              << args.spec.vms_per_vmm << " VMs each, " << args.spec.ticks << " ticks, seed "
              << args.spec.seed << "\n"
              << "traces: " << args.traces_path << "\n"
              << "labels: " << args.labels_path << "\n";
    return 0;
}

int run_detect(const DetectArgs& args) {
    const std::vector<iad::VmmGroup> groups = iad::read_traces_csv(args.traces_path);
    if (groups.empty()) throw iad::Error("no data rows in '" + args.traces_path + "'");
    validate_groups(groups);
    warn_out_of_range(groups);

    const std::vector<iad::DetectionResult> results =
        iad::detect_groups(groups, args.options.detector, args.options.event_max_gap,
                           args.options.min_events, args.options.parallelism);
    iad::write_json_atomic(
        iad::detection_report_to_json(results, args.options, args.full_verdicts), args.out_path);

    std::size_t flagged = 0;
    double seconds = 0.0;
    for (const iad::DetectionResult& r : results) {
        std::cout << r.vmm_id << ": " << (r.predicted_anomalous ? "anomalous" : "ok") << " ("
                  << r.events.size() << " events)\n";
        flagged += r.predicted_anomalous ? 1 : 0;
        seconds += r.detection_seconds;
    }
    std::cout << "flagged " << flagged << "/" << results.size() << " VMMs in " << seconds
              << " s\nreport: " << args.out_path << "\n";
    return 0;  // finding anomalies is the job, not an error
}

int run_evaluate(const EvaluateArgs& args) {
    const iad::ParsedDetectionReport report =
        iad::detection_report_from_json(iad::load_json(args.report_path));
    const std::vector<iad::GroundTruth> labels = iad::read_labels_csv(args.labels_path);
    require_label_coverage(report.predicted, labels);
    const iad::EvalReport eval = iad::f1_score(report.predicted, labels);
    iad::write_json_atomic(iad::eval_report_to_json(eval), args.out_path);

    std::cout << "tp " << eval.true_positives << ", fp " << eval.false_positives << ", fn "
              << eval.false_negatives << ", tn " << eval.true_negatives << "\n";
    std::printf("precision %.6f, recall %.6f, f1 %.6f\n", eval.precision, eval.recall, eval.f1);
    std::cout << "report: " << args.out_path << "\n";
    return 0;
}

int run_bench(const BenchArgs& args) {
    iad::SyntheticSpec base;
    base.num_vmms = 1;
    base.vms_per_vmm = 1;  // bench_scaling overrides per grid point
    base.ticks = args.base_ticks;
    base.percent_anomalous_vmms = 0.0;  // fault-free data, steady-state timing
    base.seed = args.seed;

    const iad::BenchReport report =
        iad::bench_scaling(args.vm_counts, args.tick_counts, base, args.options.detector,
                           args.repetitions, args.options.parallelism);
    iad::write_json_atomic(iad::bench_report_to_json(report, args.options), args.out_path);
    iad::write_file_atomic(args.csv_path, iad::bench_report_csv(report));

    for (const iad::BenchEntry& e : report.grid)
        std::printf("%zu VMs x %llu ticks: %.4f s\n", e.num_vms,
                    static_cast<unsigned long long>(e.num_ticks), e.seconds);
    std::cout << "report: " << args.out_path << "\ncsv: " << args.csv_path << "\n";
    return 0;
}

int run_pipeline(const PipelineArgs& args) {
    args.spec.validate();
    const iad::SyntheticDataset data = iad::generate_synthetic(args.spec);
    const std::vector<iad::DetectionResult> results =
        iad::detect_groups(data.groups, args.options.detector, args.options.event_max_gap,
                           args.options.min_events, args.options.parallelism);
    if (!args.detection_out.empty())
        iad::write_json_atomic(iad::detection_report_to_json(results, args.options),
                               args.detection_out);

    const iad::EvalReport eval = iad::f1_score(predictions_of(results), data.labels);
    if (!args.eval_out.empty())
        iad::write_json_atomic(iad::eval_report_to_json(eval), args.eval_out);

    std::printf("seed %llu: tp %llu fp %llu fn %llu tn %llu, precision %.6f, recall %.6f\n",
                static_cast<unsigned long long>(args.spec.seed),
                static_cast<unsigned long long>(eval.true_positives),
                static_cast<unsigned long long>(eval.false_positives),
                static_cast<unsigned long long>(eval.false_negatives),
                static_cast<unsigned long long>(eval.true_negatives), eval.precision,
                eval.recall);
    std::printf("%.6f\n", eval.f1);  // final line: bare F1 for scripts
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Indirect anomaly detection for hypervisors from per-VM utilization series"};
    app.require_subcommand(1);
    app.fallthrough();  // lets --config appear after the subcommand name
    app.set_config("--config", "", "Read options from an INI-style file ([subcommand] sections)")
        ->envname("IAD_CONFIG");
    app.allow_config_extras(false);

    GenerateArgs gen;
    CLI::App* generate = app.add_subcommand("generate", "Write a synthetic labeled dataset");
    add_spec_options(*generate, gen.spec);
    generate->add_option("--traces", gen.traces_path, "Output trace CSV (.gz for gzip)")
        ->capture_default_str();
    generate->add_option("--labels", gen.labels_path, "Output labels CSV (.gz for gzip)")
        ->capture_default_str();

    DetectArgs det;
    CLI::App* detect = app.add_subcommand("detect", "Run detection over a trace CSV");
    detect->add_option("--traces", det.traces_path, "Input trace CSV (.gz accepted)")
        ->required();
    detect->add_option("--out", det.out_path, "Output detection report JSON")
        ->capture_default_str();
    detect->add_flag("--full-verdicts", det.full_verdicts,
                     "Embed every per-tick verdict in the report");
    CLI::Option* det_warmup = add_detector_options(*detect, det.options, det.detector_name);

    EvaluateArgs eva;
    CLI::App* evaluate =
        app.add_subcommand("evaluate", "Score a detection report against ground truth");
    evaluate->add_option("--report", eva.report_path, "Detection report JSON")->required();
    evaluate->add_option("--labels", eva.labels_path, "Ground-truth labels CSV")->required();
    evaluate->add_option("--out", eva.out_path, "Output evaluation JSON")->capture_default_str();

    BenchArgs ben;
    CLI::App* bench = app.add_subcommand("bench", "Time detection over a (VMs x ticks) grid");
    bench->add_option("--vms", ben.vm_counts, "Comma-separated VM counts")
        ->delimiter(',')
        ->capture_default_str();
    bench->add_option("--ticks", ben.tick_counts, "Comma-separated tick counts")
        ->delimiter(',')
        ->capture_default_str();
    bench->add_option("--base-ticks", ben.base_ticks,
                      "Ticks generated before tiling up to each target")
        ->capture_default_str();
    bench->add_option("--seed", ben.seed, "Generation seed")
        ->envname("IAD_SEED")
        ->capture_default_str();
    bench->add_option("--repetitions", ben.repetitions, "Runs per grid point (median reported)")
        ->capture_default_str();
    bench->add_option("--out", ben.out_path, "Output benchmark JSON")->capture_default_str();
    bench->add_option("--csv", ben.csv_path, "Output plot-ready CSV")->capture_default_str();
    CLI::Option* ben_warmup = add_detector_options(*bench, ben.options, ben.detector_name);

    PipelineArgs pipe;
    CLI::App* pipeline =
        app.add_subcommand("pipeline", "generate + detect + evaluate in one run");
    add_spec_options(*pipeline, pipe.spec);
    CLI::Option* pipe_warmup = add_detector_options(*pipeline, pipe.options, pipe.detector_name);
    pipeline->add_option("--detection-out", pipe.detection_out,
                         "Also write the detection report JSON here");
    pipeline->add_option("--eval-out", pipe.eval_out, "Also write the evaluation JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help/version exit clean, usage errors exit 2
    }

    try {
        if (*generate) return run_generate(gen);
        if (*detect) {
            finalize_detector(det.options, det.detector_name, det_warmup);
            return run_detect(det);
        }
        if (*evaluate) return run_evaluate(eva);
        if (*bench) {
            finalize_detector(ben.options, ben.detector_name, ben_warmup);
            if (ben.repetitions < 1) throw iad::InvalidConfigError("repetitions must be >= 1");
            return run_bench(ben);
        }
        if (*pipeline) {
            finalize_detector(pipe.options, pipe.detector_name, pipe_warmup);
            return run_pipeline(pipe);
        }
    } catch (const iad::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const iad::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
