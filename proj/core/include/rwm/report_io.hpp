#pragma once

#include <filesystem>
#include <string>

#include "rwm/backtest.hpp"

namespace rwm {

struct EmittedFiles {
  std::filesystem::path report_json;
  std::filesystem::path regret_curve_csv;
  std::filesystem::path trades_csv;
};

/// Writes report.json, regret_curve.csv and trades.csv into `directory`,
/// creating it if needed. Failures throw IoError naming the path.
EmittedFiles emit_report(const BacktestReport& report, const std::filesystem::path& directory);

/// Inverse of emit_report: parses report.json and the curve file it names.
BacktestReport read_report(const std::filesystem::path& directory);

/// report.json contents exactly as emit_report writes them.
std::string report_json_text(const BacktestReport& report);

}  // namespace rwm
