#include "iad/csv_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_map>
#include <utility>

namespace iad {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kTracesHeader = "tick,vmm_id,vm_id,value";
constexpr std::string_view kLabelsHeader = "vmm_id,anomalous,start_tick,end_tick";

bool is_gz(const fs::path& path) { return path.extension() == ".gz"; }

fs::path temp_sibling(const fs::path& path) {
    static std::atomic<unsigned> counter{0};
    fs::path tmp = path;
    tmp += ".tmp" + std::to_string(counter++);
    return tmp;
}

/// Streaming writer over a plain or gzip file; writes to a temp sibling and
/// renames on commit so a failed run never leaves a partial artifact.
class Sink {
public:
    explicit Sink(const fs::path& path) : final_path_(path), tmp_path_(temp_sibling(path)) {
        if (is_gz(path)) {
            gz_ = gzopen(tmp_path_.string().c_str(), "wb");
            if (!gz_) throw IoError("cannot open '" + tmp_path_.string() + "' for writing");
        } else {
            out_.open(tmp_path_, std::ios::binary);
            if (!out_) throw IoError("cannot open '" + tmp_path_.string() + "' for writing");
        }
    }

    ~Sink() {
        if (committed_) return;
        if (gz_) gzclose(gz_);
        if (out_.is_open()) out_.close();
        std::error_code ec;
        fs::remove(tmp_path_, ec);
    }

    Sink(const Sink&) = delete;
    Sink& operator=(const Sink&) = delete;

    void write(std::string_view data) {
        if (gz_) {
            if (gzwrite(gz_, data.data(), static_cast<unsigned>(data.size())) !=
                static_cast<int>(data.size()))
                throw IoError("gzip write failed for '" + tmp_path_.string() + "'");
        } else {
            out_.write(data.data(), static_cast<std::streamsize>(data.size()));
            if (!out_) throw IoError("write failed for '" + tmp_path_.string() + "'");
        }
    }

    void commit() {
        if (gz_) {
            if (gzclose(std::exchange(gz_, nullptr)) != Z_OK)
                throw IoError("gzip close failed for '" + tmp_path_.string() + "'");
        } else {
            out_.close();
            if (out_.fail()) throw IoError("close failed for '" + tmp_path_.string() + "'");
        }
        std::error_code ec;
        fs::rename(tmp_path_, final_path_, ec);
        if (ec)
            throw IoError("rename '" + tmp_path_.string() + "' -> '" + final_path_.string() +
                          "' failed: " + ec.message());
        committed_ = true;
    }

private:
    fs::path final_path_;
    fs::path tmp_path_;
    std::ofstream out_;
    gzFile gz_ = nullptr;
    bool committed_ = false;
};

/// Line reader over a plain or gzip file; strips LF and a trailing CR.
class Source {
public:
    explicit Source(const fs::path& path) {
        if (!fs::exists(path)) throw IoError("no such file: '" + path.string() + "'");
        if (is_gz(path)) {
            gz_ = gzopen(path.string().c_str(), "rb");
            if (!gz_) throw IoError("cannot open '" + path.string() + "'");
        } else {
            in_.open(path, std::ios::binary);
            if (!in_) throw IoError("cannot open '" + path.string() + "'");
        }
    }

    ~Source() {
        if (gz_) gzclose(gz_);
    }

    Source(const Source&) = delete;
    Source& operator=(const Source&) = delete;

    bool next_line(std::string& line) {
        bool got = false;
        if (gz_) {
            line.clear();
            char buf[4096];
            while (gzgets(gz_, buf, sizeof(buf))) {
                got = true;
                line += buf;
                if (!line.empty() && line.back() == '\n') {
                    line.pop_back();
                    break;
                }
            }
        } else {
            got = static_cast<bool>(std::getline(in_, line));
        }
        if (got && !line.empty() && line.back() == '\r') line.pop_back();
        return got;
    }

private:
    std::ifstream in_;
    gzFile gz_ = nullptr;
};

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return fields;
}

std::uint64_t parse_tick(std::string_view field, std::size_t line_no) {
    std::uint64_t tick = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), tick);
    if (ec != std::errc{} || ptr != field.data() + field.size() || tick < 1)
        throw MalformedRowError(line_no, "bad tick '" + std::string(field) + "'");
    return tick;
}

double parse_value(std::string_view field, std::size_t line_no) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(value))
        throw MalformedRowError(line_no, "bad value '" + std::string(field) + "'");
    return value;
}

void check_id(std::string_view id, std::string_view what) {
    if (id.empty()) throw Error(std::string(what) + " is empty");
    if (id.find_first_of(",\n\r") != std::string_view::npos)
        throw Error(std::string(what) + " '" + std::string(id) + "' contains CSV separators");
}

void append_double(std::string& buf, double v) {
    char tmp[32];
    const auto r = std::to_chars(tmp, tmp + sizeof(tmp), v);
    buf.append(tmp, r.ptr);
}

}  // namespace

void write_file_atomic(const fs::path& path, const std::string& content) {
    Sink sink(path);
    sink.write(content);
    sink.commit();
}

void write_traces_csv(const std::vector<VmmGroup>& groups, const fs::path& path) {
    for (const VmmGroup& g : groups) {
        check_id(g.vmm_id, "vmm_id");
        for (const VmSeries& s : g.series) check_id(s.vm_id, "vm_id");
    }
    Sink sink(path);
    std::string buf;
    buf.reserve(1 << 20);
    buf.append(kTracesHeader).push_back('\n');
    for (const VmmGroup& g : groups) {
        for (const VmSeries& s : g.series) {
            for (std::size_t t = 0; t < s.values.size(); ++t) {
                buf.append(std::to_string(t + 1));
                buf.push_back(',');
                buf.append(g.vmm_id);
                buf.push_back(',');
                buf.append(s.vm_id);
                buf.push_back(',');
                append_double(buf, s.values[t]);
                buf.push_back('\n');
                if (buf.size() > (1 << 20) - 256) {
                    sink.write(buf);
                    buf.clear();
                }
            }
        }
    }
    sink.write(buf);
    sink.commit();
}

std::vector<VmmGroup> read_traces_csv(const fs::path& path) {
    Source source(path);
    std::string line;
    if (!source.next_line(line) || line != kTracesHeader)
        throw MissingHeaderError("expected header '" + std::string(kTracesHeader) + "' in '" +
                                 path.string() + "'");

    struct PendingSeries {
        std::string vm_id;
        std::vector<std::pair<std::uint64_t, double>> rows;
    };
    struct PendingGroup {
        std::string vmm_id;
        std::vector<PendingSeries> series;
        std::unordered_map<std::string, std::size_t> vm_index;
    };
    std::vector<PendingGroup> pending;
    std::unordered_map<std::string, std::size_t> group_index;

    std::size_t line_no = 1;
    while (source.next_line(line)) {
        ++line_no;
        const auto fields = split_fields(line);
        if (fields.size() != 4)
            throw MalformedRowError(line_no, "expected 4 fields, got " +
                                                 std::to_string(fields.size()));
        const std::uint64_t tick = parse_tick(fields[0], line_no);
        if (fields[1].empty()) throw MalformedRowError(line_no, "empty vmm_id");
        if (fields[2].empty()) throw MalformedRowError(line_no, "empty vm_id");
        const double value = parse_value(fields[3], line_no);

        const std::string vmm_id(fields[1]);
        auto [git, ginserted] = group_index.try_emplace(vmm_id, pending.size());
        if (ginserted) pending.push_back(PendingGroup{vmm_id, {}, {}});
        PendingGroup& group = pending[git->second];

        const std::string vm_id(fields[2]);
        auto [vit, vinserted] = group.vm_index.try_emplace(vm_id, group.series.size());
        if (vinserted) group.series.push_back(PendingSeries{vm_id, {}});
        group.series[vit->second].rows.emplace_back(tick, value);
    }

    std::vector<VmmGroup> groups;
    groups.reserve(pending.size());
    for (PendingGroup& pg : pending) {
        VmmGroup group;
        group.vmm_id = std::move(pg.vmm_id);
        group.series.reserve(pg.series.size());
        for (PendingSeries& ps : pg.series) {
            std::sort(ps.rows.begin(), ps.rows.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            VmSeries series;
            series.vm_id = std::move(ps.vm_id);
            series.values.reserve(ps.rows.size());
            for (std::size_t i = 0; i < ps.rows.size(); ++i) {
                const std::uint64_t tick = ps.rows[i].first;
                if (tick != i + 1) {
                    if (i > 0 && tick == ps.rows[i - 1].first)
                        throw NonRectangularError(series.vm_id,
                                                  "duplicate tick " + std::to_string(tick));
                    throw NonRectangularError(
                        series.vm_id, "missing tick " + std::to_string(i + 1) + " (has " +
                                          std::to_string(ps.rows.size()) + " ticks up to " +
                                          std::to_string(ps.rows.back().first) + ")");
                }
                series.values.push_back(ps.rows[i].second);
            }
            group.series.push_back(std::move(series));
        }
        groups.push_back(std::move(group));
    }
    return groups;
}

void write_labels_csv(const std::vector<GroundTruth>& labels, const fs::path& path) {
    for (const GroundTruth& l : labels) check_id(l.vmm_id, "vmm_id");
    Sink sink(path);
    std::string buf;
    buf.append(kLabelsHeader).push_back('\n');
    for (const GroundTruth& l : labels) {
        buf.append(l.vmm_id);
        buf.append(l.anomalous ? ",true," : ",false,");
        if (l.fault_interval) {
            buf.append(std::to_string(l.fault_interval->start_tick));
            buf.push_back(',');
            buf.append(std::to_string(l.fault_interval->end_tick));
        } else {
            buf.push_back(',');
        }
        buf.push_back('\n');
    }
    sink.write(buf);
    sink.commit();
}

std::vector<GroundTruth> read_labels_csv(const fs::path& path) {
    Source source(path);
    std::string line;
    if (!source.next_line(line) || line != kLabelsHeader)
        throw MissingHeaderError("expected header '" + std::string(kLabelsHeader) + "' in '" +
                                 path.string() + "'");

    std::vector<GroundTruth> labels;
    std::size_t line_no = 1;
    while (source.next_line(line)) {
        ++line_no;
        const auto fields = split_fields(line);
        if (fields.size() != 4)
            throw MalformedRowError(line_no, "expected 4 fields, got " +
                                                 std::to_string(fields.size()));
        if (fields[0].empty()) throw MalformedRowError(line_no, "empty vmm_id");

        GroundTruth label;
        label.vmm_id = std::string(fields[0]);
        if (fields[1] == "true" || fields[1] == "1")
            label.anomalous = true;
        else if (fields[1] == "false" || fields[1] == "0")
            label.anomalous = false;
        else
            throw MalformedRowError(line_no, "bad anomalous flag '" + std::string(fields[1]) + "'");

        const bool has_start = !fields[2].empty();
        const bool has_end = !fields[3].empty();
        if (has_start != has_end)
            throw MalformedRowError(line_no, "start_tick and end_tick must both be set or empty");
        if (has_start) {
            TickInterval interval{parse_tick(fields[2], line_no), parse_tick(fields[3], line_no)};
            if (interval.end_tick < interval.start_tick)
                throw MalformedRowError(line_no, "end_tick before start_tick");
            label.fault_interval = interval;
        }
        labels.push_back(std::move(label));
    }
    return labels;
}

}  // namespace iad
