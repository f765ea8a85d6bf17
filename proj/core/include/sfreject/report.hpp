#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sfreject/experiment.hpp"

namespace sfreject {

/// Deterministic JSON document (no timings): config echo, per-fold values
/// and the aggregate mean/variance/std of every metric.
std::string report_to_json(const ExperimentReport& report, const ExperimentConfig& config);

/// Header plus one row; metric cells are "mean ± variance", followed by the
/// standard deviations in separate columns.
std::string report_to_csv(const ExperimentReport& report);

/// One-line summary in the layout of the results table.
std::string report_table_row(const ExperimentReport& report);

/// One JSON object (single line) per explained sample.
std::string explanation_to_json_line(const ExplainedSample& sample,
                                     const std::vector<std::string>& feature_names,
                                     bool verbose = false);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace sfreject
