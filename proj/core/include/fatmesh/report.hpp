#pragma once

#include "fatmesh/pipeline.hpp"

#include <filesystem>
#include <string>

namespace fatmesh {

// Machine-readable report with a fixed key order. Timing is left out so that
// equal runs give equal bytes.
std::string report_json(const PipelineResult& result);

// bucket_lo,bucket_hi,count
std::string histogram_csv(const ThicknessReport& report);

std::string summary_text(const PipelineResult& result);

// Writes report.json, histogram.csv and summary.txt into dir.
void emit_report(const PipelineResult& result, const std::filesystem::path& dir);

}  // namespace fatmesh
