#include "olasso/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace olasso {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

bool parse_double(const std::string& cell, double& out) {
    if (cell.empty()) return false;
    const char* first = cell.data();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, cell.data() + cell.size(), out);
    return ec == std::errc() && ptr == cell.data() + cell.size();
}

}  // namespace

std::size_t Table::column(const std::string& spec) const {
    for (std::size_t j = 0; j < header.size(); ++j)
        if (header[j] == spec) return j;
    std::size_t index = 0;
    const auto [ptr, ec] = std::from_chars(spec.data(), spec.data() + spec.size(), index);
    if (ec == std::errc() && ptr == spec.data() + spec.size() && index < header.size()) return index;
    throw Error(ErrorCode::kInvalidArgument, "column '" + spec + "' not found in header");
}

Vector Table::column_values(const std::string& spec) const { return values.col(static_cast<Eigen::Index>(column(spec))); }

Matrix Table::columns_except(const std::vector<std::size_t>& skip) const {
    std::vector<Eigen::Index> keep;
    for (std::size_t j = 0; j < header.size(); ++j)
        if (std::find(skip.begin(), skip.end(), j) == skip.end()) keep.push_back(static_cast<Eigen::Index>(j));
    return values(Eigen::all, keep);
}

std::vector<std::string> Table::names_except(const std::vector<std::size_t>& skip) const {
    std::vector<std::string> out;
    for (std::size_t j = 0; j < header.size(); ++j)
        if (std::find(skip.begin(), skip.end(), j) == skip.end()) out.push_back(header[j]);
    return out;
}

Table parse_csv(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    Table t;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) break;
    }
    require(line_no > 0 && !trim(line).empty(), ErrorCode::kParse, source + ": no header row");
    t.header = split_line(line);

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_line(line);
        require(cells.size() == t.header.size(), ErrorCode::kParse,
                source + ": line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                    " cells, header has " + std::to_string(t.header.size()));
        std::vector<double> row(cells.size());
        for (std::size_t j = 0; j < cells.size(); ++j)
            require(parse_double(cells[j], row[j]), ErrorCode::kParse,
                    source + ": line " + std::to_string(line_no) + ", column '" + t.header[j] +
                        "': not a number: '" + cells[j] + "'");
        rows.push_back(std::move(row));
    }
    t.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(t.header.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            t.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return t;
}

Table read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorCode::kIo, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), path);
}

std::string format_csv(const Table& table) {
    std::string out;
    for (std::size_t j = 0; j < table.header.size(); ++j) out += (j ? "," : "") + table.header[j];
    out += '\n';
    char buf[32];
    for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < table.values.cols(); ++j) {
            const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, table.values(i, j));
            if (j) out += ',';
            out.append(buf, ptr);
        }
        out += '\n';
    }
    return out;
}

void write_csv(const std::string& path, const Table& table) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), ErrorCode::kIo, "cannot write '" + path + "'");
    out << format_csv(table);
    require(out.good(), ErrorCode::kIo, "write failed for '" + path + "'");
}

}  // namespace olasso
