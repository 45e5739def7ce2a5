#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace mcprc {

/// Minimal CSV support for the artifact files: a header row followed by
/// numeric columns. Values are written with enough digits to round-trip
/// doubles exactly.
void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
};

CsvTable read_csv(const std::filesystem::path& path);

} // namespace mcprc
