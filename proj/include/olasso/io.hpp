#pragma once

#include "olasso/common.hpp"

#include <string>
#include <vector>

namespace olasso {

/// Numeric table with a header row.
struct Table {
    std::vector<std::string> header;
    Matrix values;

    std::size_t column(const std::string& spec) const;
    Vector column_values(const std::string& spec) const;
    // Every column except those at the given indices.
    Matrix columns_except(const std::vector<std::size_t>& skip) const;
    std::vector<std::string> names_except(const std::vector<std::size_t>& skip) const;
};

/// Comma-separated, one header row, every other cell numeric. Errors:
/// kIo when the file cannot be opened, kParse with the 1-based line number
/// for a non-numeric cell or a ragged row.
Table read_csv(const std::string& path);
Table parse_csv(const std::string& text, const std::string& source = "<memory>");

/// Writes with round-trip precision.
void write_csv(const std::string& path, const Table& table);
std::string format_csv(const Table& table);

}  // namespace olasso
