#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "raisac/experiments.hpp"
#include "raisac/oracle.hpp"

namespace raisac {

/// Header row plus one row per point: gamma_th_db, gamma_th_linear,
/// rate_bps_hz and the scheme's extra columns, 12 significant digits.
std::string scheme_csv(const SchemeResult& scheme);

/// Reads the points back from scheme_csv output. Throws Error(IoError) on malformed text.
std::vector<RegionPoint> parse_scheme_csv(const std::string& text);

/// 800x600 SVG 1.1 line plot of rate versus threshold in dB.
std::string render_svg(const std::vector<SchemeResult>& schemes, const std::string& title);

std::string report_csv(const std::vector<OracleReport>& reports);
std::string report_table(const std::vector<OracleReport>& reports);

/// Writes <dir>/<name>.csv for each scheme and <dir>/<figure>.svg, creating
/// the directory if needed. Returns the written paths. Throws Error(IoError).
std::vector<std::filesystem::path> emit_outputs(const std::vector<SchemeResult>& schemes,
                                                const std::filesystem::path& dir,
                                                const std::string& figure,
                                                const std::string& title);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace raisac
