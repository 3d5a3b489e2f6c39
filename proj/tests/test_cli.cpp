#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "iad/report_json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CmdResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr interleaved
};

/// Runs the CLI under test (path in IAD_CLI_BIN). `prefix` can carry env
/// assignments, e.g. "IAD_SEED=9".
CmdResult run_cli(const std::string& args, const std::string& prefix = "") {
    const char* bin = std::getenv("IAD_CLI_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "IAD_CLI_BIN must point at the iad binary");
    const std::string cmd = prefix + (prefix.empty() ? "" : " ") + bin + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CmdResult result;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe)) result.output.append(buf, n);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("iad-cli-" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Last non-empty line of a command's output.
std::string last_line(const std::string& text) {
    std::istringstream in(text);
    std::string line, last;
    while (std::getline(in, line)) {
        if (!line.empty()) last = line;
    }
    return last;
}

const std::string kSmallSpec =
    "--num-vmms 4 --vms-per-vmm 3 --ticks 160 --seed 7 "
    "--fault-start 60 --fault-end 120";
const std::string kSmallDetector = "--window 20 --warmup-ticks 20";

}  // namespace

TEST_CASE("cli: usage errors exit 2, help exits 0") {
    CHECK(run_cli("").exit_code == 2);                       // missing subcommand
    CHECK(run_cli("generate --no-such-flag").exit_code == 2);
    CHECK(run_cli("detect").exit_code == 2);                 // missing required --traces
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("detect --help").exit_code == 0);
}

TEST_CASE("cli: generate writes both files and a summary, deterministically") {
    TempDir dir;
    const std::string traces = dir.file("traces.csv");
    const std::string labels = dir.file("labels.csv");
    auto r = run_cli("generate " + kSmallSpec + " --traces " + traces + " --labels " + labels);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("4 VMMs (2 anomalous)") != std::string::npos);
    CHECK(r.output.find("seed 7") != std::string::npos);
    REQUIRE(fs::exists(traces));
    REQUIRE(fs::exists(labels));

    const std::string traces_a = slurp(traces);
    auto again =
        run_cli("generate " + kSmallSpec + " --traces " + traces + " --labels " + labels);
    CHECK(again.exit_code == 0);
    CHECK(slurp(traces) == traces_a);

    auto other = run_cli("generate --num-vmms 4 --vms-per-vmm 3 --ticks 160 --seed 8 --traces " +
                         traces + " --labels " + labels);
    CHECK(other.exit_code == 0);
    CHECK(slurp(traces) != traces_a);
}

TEST_CASE("cli: generate rejects a bad spec with exit 2") {
    TempDir dir;
    auto r = run_cli("generate --num-vmms 0 --traces " + dir.file("t.csv") + " --labels " +
                     dir.file("l.csv"));
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("num_vmms") != std::string::npos);
}

TEST_CASE("cli: seed can come from the environment") {
    TempDir dir;
    auto r = run_cli("generate --num-vmms 2 --vms-per-vmm 2 --ticks 100 --traces " +
                         dir.file("t.csv") + " --labels " + dir.file("l.csv"),
                     "IAD_SEED=123");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("seed 123") != std::string::npos);
}

TEST_CASE("cli: detect end-to-end on generated data") {
    TempDir dir;
    const std::string traces = dir.file("traces.csv");
    const std::string labels = dir.file("labels.csv");
    REQUIRE(run_cli("generate " + kSmallSpec + " --traces " + traces + " --labels " + labels)
                .exit_code == 0);

    const std::string report = dir.file("detection.json");
    auto r = run_cli("detect --traces " + traces + " --out " + report + " " + kSmallDetector +
                     " --min-percent-vms-fault 90");
    CHECK(r.exit_code == 0);  // anomalies found is still success
    REQUIRE(fs::exists(report));

    json j = json::parse(slurp(report));
    CHECK(j.at("schema") == "iad.detection/1");
    CHECK(j.at("config").at("w") == 20);
    CHECK(j.at("config").at("warmup_ticks") == 20);
    CHECK(j.at("config").at("min_percent_vms_fault") == 90.0);

    // Every injected VMM (per the labels file) carries at least one event.
    std::map<std::string, bool> truth;
    {
        std::ifstream in(labels);
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            const auto c1 = line.find(',');
            const auto c2 = line.find(',', c1 + 1);
            truth[line.substr(0, c1)] = line.substr(c1 + 1, c2 - c1 - 1) == "true";
        }
    }
    for (const json& vmm : j.at("vmms")) {
        if (truth.at(vmm.at("vmm_id").get<std::string>()))
            CHECK(vmm.at("events").size() >= 1);
    }
}

TEST_CASE("cli: warmup defaults to the window length") {
    TempDir dir;
    const std::string traces = dir.file("traces.csv");
    REQUIRE(run_cli("generate " + kSmallSpec + " --traces " + traces + " --labels " +
                    dir.file("l.csv"))
                .exit_code == 0);
    const std::string report = dir.file("d.json");
    auto r = run_cli("detect --traces " + traces + " --out " + report + " --window 30");
    CHECK(r.exit_code == 0);
    json j = json::parse(slurp(report));
    CHECK(j.at("config").at("w") == 30);
    CHECK(j.at("config").at("warmup_ticks") == 30);
}

TEST_CASE("cli: detect names the offending vmm and vm on bad input") {
    TempDir dir;
    const std::string traces = dir.file("bad.csv");
    std::ofstream out(traces);
    out << "tick,vmm_id,vm_id,value\n";
    for (int t = 1; t <= 10; ++t) out << t << ",vmm-x,vm-a," << 50 << "\n";
    for (int t = 1; t <= 9; ++t) out << t << ",vmm-x,vm-b," << 50 << "\n";
    out.close();

    auto r = run_cli("detect --traces " + traces + " --out " + dir.file("d.json"));
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("vmm-x") != std::string::npos);
    CHECK(r.output.find("vm-b") != std::string::npos);
    CHECK(r.output.find("length mismatch") != std::string::npos);
    CHECK_FALSE(fs::exists(dir.file("d.json")));  // no partial artifact
}

TEST_CASE("cli: detect on a missing file exits 3") {
    auto r = run_cli("detect --traces /nonexistent/t.csv --out /tmp/unused-iad.json");
    CHECK(r.exit_code == 3);
}

TEST_CASE("cli: out-of-range values warn but do not fail") {
    TempDir dir;
    const std::string traces = dir.file("hot.csv");
    std::ofstream out(traces);
    out << "tick,vmm_id,vm_id,value\n";
    for (int t = 1; t <= 80; ++t) out << t << ",v,a," << (t == 5 ? 120.0 : 50.0) << "\n";
    out.close();
    auto r = run_cli("detect --traces " + traces + " --out " + dir.file("d.json") +
                     " --window 10 --warmup-ticks 10");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("outside [0,100]") != std::string::npos);
}

TEST_CASE("cli: evaluate scores a report and enforces label coverage") {
    TempDir dir;
    const std::string traces = dir.file("traces.csv");
    const std::string labels = dir.file("labels.csv");
    const std::string report = dir.file("detection.json");
    REQUIRE(run_cli("generate " + kSmallSpec + " --traces " + traces + " --labels " + labels)
                .exit_code == 0);
    REQUIRE(run_cli("detect --traces " + traces + " --out " + report + " " + kSmallDetector)
                .exit_code == 0);

    const std::string eval_path = dir.file("eval.json");
    auto r = run_cli("evaluate --report " + report + " --labels " + labels + " --out " +
                     eval_path);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("f1") != std::string::npos);
    json j = json::parse(slurp(eval_path));
    CHECK(j.at("schema") == "iad.eval/1");
    CHECK(j.at("true_positives").get<int>() + j.at("false_positives").get<int>() +
              j.at("false_negatives").get<int>() + j.at("true_negatives").get<int>() ==
          4);

    // Drop one VMM from the labels file: coverage check trips, exit 2.
    std::ifstream in(labels);
    std::string content, line;
    std::getline(in, line);
    content = line + "\n";
    bool dropped = false;
    while (std::getline(in, line)) {
        if (!dropped) {
            dropped = true;
            continue;
        }
        content += line + "\n";
    }
    in.close();
    const std::string short_labels = dir.file("short.csv");
    std::ofstream(short_labels) << content;
    auto bad = run_cli("evaluate --report " + report + " --labels " + short_labels + " --out " +
                       dir.file("e2.json"));
    CHECK(bad.exit_code == 2);
}

TEST_CASE("cli: pipeline prints the bare F1 as its final line") {
    TempDir dir;
    auto r = run_cli("pipeline " + kSmallSpec + " " + kSmallDetector + " --detection-out " +
                     dir.file("d.json") + " --eval-out " + dir.file("e.json"));
    CHECK(r.exit_code == 0);
    const std::string tail = last_line(r.output);
    REQUIRE_FALSE(tail.empty());
    const double f1 = std::stod(tail);
    CHECK(f1 >= 0.0);
    CHECK(f1 <= 1.0);
    CHECK(tail.find('.') != std::string::npos);  // fixed-point, 6 decimals
    CHECK(tail.substr(tail.find('.') + 1).size() == 6);
    CHECK(fs::exists(dir.file("d.json")));
    CHECK(fs::exists(dir.file("e.json")));

    // The strong injected shift on every VM should be caught perfectly here.
    CHECK(f1 == doctest::Approx(1.0));

    auto mean = run_cli("pipeline " + kSmallSpec + " " + kSmallDetector + " --detector mean");
    CHECK(mean.exit_code == 0);
}

TEST_CASE("cli: bench emits one CSV row per grid point") {
    TempDir dir;
    const std::string out_json = dir.file("bench.json");
    const std::string out_csv = dir.file("bench.csv");
    auto r = run_cli("bench --vms 1,2,3 --ticks 400 --base-ticks 400 --repetitions 1 "
                     "--window 20 --warmup-ticks 20 --out " +
                     out_json + " --csv " + out_csv);
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(out_csv);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "num_vms,num_ticks,seconds");
    int rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 3);
    json j = json::parse(slurp(out_json));
    CHECK(j.at("schema") == "iad.bench/1");
    CHECK(j.at("grid").size() == 3);
}

TEST_CASE("cli: gzip traces work end to end") {
    TempDir dir;
    const std::string traces = dir.file("traces.csv.gz");
    REQUIRE(run_cli("generate --num-vmms 2 --vms-per-vmm 2 --ticks 120 --seed 3 --traces " +
                    traces + " --labels " + dir.file("l.csv.gz"))
                .exit_code == 0);
    auto r = run_cli("detect --traces " + traces + " --out " + dir.file("d.json") + " " +
                     kSmallDetector);
    CHECK(r.exit_code == 0);
}

TEST_CASE("cli: options can come from a config file, flags win") {
    TempDir dir;
    const std::string traces = dir.file("traces.csv");
    REQUIRE(run_cli("generate " + kSmallSpec + " --traces " + traces + " --labels " +
                    dir.file("l.csv"))
                .exit_code == 0);
    const std::string conf = dir.file("iad.conf");
    std::ofstream(conf) << "[detect]\nwindow=25\nwarmup-ticks=25\n";
    const std::string report = dir.file("d.json");
    auto r = run_cli("detect --config " + conf + " --traces " + traces + " --out " + report);
    CHECK(r.exit_code == 0);
    CHECK(json::parse(slurp(report)).at("config").at("w") == 25);

    auto r2 = run_cli("detect --config " + conf + " --traces " + traces + " --out " + report +
                      " --window 40");
    CHECK(r2.exit_code == 0);
    CHECK(json::parse(slurp(report)).at("config").at("w") == 40);
}
