#include "report.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fpl::cli {

std::string format_full(double v) {
    std::array<char, 32> buf;
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string format_fixed6(double v) {
    std::array<char, 48> buf;
    const int n = std::snprintf(buf.data(), buf.size(), "%.6f", v);
    return std::string(buf.data(), n);
}

std::string csv_document(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    const auto append_row = [&out](const std::vector<std::string>& row) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += row[i];
        }
        out += '\n';
    };
    append_row(header);
    for (const auto& row : rows) append_row(row);
    return out;
}

std::string md_table(const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    out += '|';
    for (const auto& h : header) { out += ' '; out += h; out += " |"; }
    out += "\n|";
    for (size_t i = 0; i < header.size(); ++i) out += " --- |";
    out += '\n';
    for (const auto& row : rows) {
        out += '|';
        for (const auto& cell : row) { out += ' '; out += cell; out += " |"; }
        out += '\n';
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("failed writing output file '" + path + "'");
}

}  // namespace fpl::cli
