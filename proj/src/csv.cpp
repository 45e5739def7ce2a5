#include "mcprc/csv.hpp"

#include "mcprc/common.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace mcprc {

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size()) {
        throw std::invalid_argument("write_csv: header/column count mismatch");
    }
    std::size_t rows = 0;
    for (const auto& col : columns) rows = std::max(rows, col.size());
    for (const auto& col : columns) {
        if (col.size() != rows) {
            throw std::invalid_argument("write_csv: ragged columns");
        }
    }

    std::ofstream out(path);
    if (!out) {
        throw ConfigError("write_csv: cannot open " + path.string());
    }
    for (std::size_t c = 0; c < header.size(); ++c) {
        out << (c ? "," : "") << header[c];
    }
    out << '\n';
    char buf[64];
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            const auto res = std::to_chars(buf, buf + sizeof(buf), columns[c][r],
                                           std::chars_format::general, 17);
            if (c) out << ',';
            out.write(buf, res.ptr - buf);
        }
        out << '\n';
    }
    if (!out) {
        throw ConfigError("write_csv: write failed for " + path.string());
    }
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("read_csv: cannot open " + path.string());
    }
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError("read_csv: empty file " + path.string());
    }
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) table.header.push_back(cell);
    }
    table.columns.resize(table.header.size());
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::size_t c = 0;
        while (std::getline(ss, cell, ',')) {
            if (c >= table.columns.size()) {
                throw ConfigError("read_csv: too many cells at line " +
                                  std::to_string(line_no));
            }
            table.columns[c].push_back(std::stod(cell));
            ++c;
        }
        if (c != table.columns.size()) {
            throw ConfigError("read_csv: missing cells at line " +
                              std::to_string(line_no));
        }
    }
    return table;
}

} // namespace mcprc
