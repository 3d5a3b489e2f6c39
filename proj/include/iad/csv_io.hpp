#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "iad/model.hpp"

namespace iad {

/// Long-format trace file, header `tick,vmm_id,vm_id,value`, one row per
/// (vm, tick). Values are printed at full precision (shortest round-trip
/// form), so write/read is lossless. A `.gz` suffix selects gzip framing on
/// both sides. Rows may appear in any order; each VM must cover ticks
/// 1..n_vm with no gaps or duplicates (NonRectangularError otherwise).
/// Groups keep the order of first appearance.
std::vector<VmmGroup> read_traces_csv(const std::filesystem::path& path);

/// Writes atomically (temp file + rename); ids must not contain the CSV
/// separator or newlines.
void write_traces_csv(const std::vector<VmmGroup>& groups, const std::filesystem::path& path);

/// Labels file, header `vmm_id,anomalous,start_tick,end_tick`; the interval
/// columns are either both present or both empty.
std::vector<GroundTruth> read_labels_csv(const std::filesystem::path& path);
void write_labels_csv(const std::vector<GroundTruth>& labels, const std::filesystem::path& path);

/// Atomic full-file write used for every artifact the tools produce: the
/// content lands under the final name only when complete.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace iad
