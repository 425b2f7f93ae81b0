#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "varprod/case_study.hpp"

namespace varprod {

/// Name of the run-timestamp key in report.json; the only field that varies
/// between otherwise identical runs.
inline constexpr const char* kGeneratedAtKey = "generated_at";

/// report.json content. Trajectory and residuals are written to CSV instead.
std::string report_to_json(const CaseStudyReport& report, bool include_timestamp = true);

/// Inverse of report_to_json for every field it writes.
CaseStudyReport report_from_json(const std::string& text);

/// Writes report.json, acvf_product.csv, residual_acvf.csv and trajectory.csv
/// into out_dir (created if missing) and returns the paths written.
std::vector<std::filesystem::path> emit_outputs(const CaseStudyReport& report,
                                                const std::filesystem::path& out_dir,
                                                bool include_timestamp = true);

/// Shortest round-trip decimal representation.
std::string format_double(double value);

}  // namespace varprod
