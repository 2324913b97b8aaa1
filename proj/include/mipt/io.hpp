#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace mipt {

enum class OutputFormat { Csv, Json };

/// Tabular dataset: comment lines (config provenance), column names, string
/// cells. Numeric cells are written with round-trip precision.
struct Table {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

/// Round-trip decimal form of a double ("%.17g").
std::string format_double(double v);

/// Write via a temp file in the same directory plus rename, so a crash never
/// leaves a half-written dataset.
void write_table(const std::filesystem::path& path, const Table& table, OutputFormat format);
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace mipt
