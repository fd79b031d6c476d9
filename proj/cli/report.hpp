#pragma once

#include <string>
#include <vector>

namespace fpl::cli {

/// Shortest round-trip decimal form (what the CSV files carry).
std::string format_full(double v);

/// Fixed six decimals (what the Markdown views show).
std::string format_fixed6(double v);

/// RFC-4180 CSV with LF line endings. Values never contain commas or
/// quotes here, so no quoting pass is needed.
std::string csv_document(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows);

/// A pipe table for the Markdown views.
std::string md_table(const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows);

void write_file(const std::string& path, const std::string& content);

}  // namespace fpl::cli
