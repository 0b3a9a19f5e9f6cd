#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gwin/evaluation.hpp"

namespace gwin {

/// One ThresholdRow per line, machine readable.
void write_rows_jsonl(const std::vector<ThresholdRow>& rows,
                      const std::string& dataset,
                      const std::filesystem::path& path);

/// CSV with the table column order: tau, % reject, baseline rejected
/// accuracy, GWIN rejected accuracy, rejected delta, overall delta,
/// % error delta (each +- std).
void write_table_csv(const std::vector<ThresholdRow>& rows,
                     const std::filesystem::path& path);

/// Fixed-width text rendering of the same table.
std::string format_table_text(const std::vector<ThresholdRow>& rows);

/// Accuracy-vs-tau curves (baseline and GWIN arms), simple SVG.
void write_accuracy_svg(const std::vector<ThresholdRow>& rows,
                        const std::filesystem::path& path);

/// Box plots of certainty deltas per tau, simple SVG.
void write_boxplot_svg(const std::vector<CertaintyDeltaStats>& stats,
                       const std::filesystem::path& path);

}  // namespace gwin
