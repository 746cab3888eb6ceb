#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace needle {

/// Quotes a field when it holds a comma, quote or newline (RFC-4180 style,
/// embedded quotes doubled); returns it untouched otherwise.
std::string csv_escape(const std::string& field);

/// Joins pre-escaped-on-demand fields into one CSV line (no newline).
std::string csv_join(const std::vector<std::string>& fields);

/// Splits CSV text into rows of unescaped fields. Quoted fields may contain
/// commas, doubled quotes and newlines. A trailing newline does not produce
/// an empty row.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

}  // namespace needle
