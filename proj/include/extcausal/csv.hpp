#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "extcausal/panel.hpp"

namespace extcausal {

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace detail

/// Parses "header row, then one numeric row per time step". Ragged rows and
/// non-numeric or non-finite cells are rejected with the 1-based line number.
inline TimeSeriesPanel parse_panel_csv(std::string_view text) {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line =
            eol == std::string_view::npos ? text.substr(pos) : text.substr(pos, eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) {
            if (pos > text.size()) break;  // trailing newline
            throw std::invalid_argument("line " + std::to_string(line_no) + ": empty line");
        }
        const auto fields = detail::split_fields(line);
        if (names.empty()) {
            for (const auto& f : fields) names.emplace_back(detail::trim(f));
            columns.resize(names.size());
            continue;
        }
        if (fields.size() != names.size())
            throw std::invalid_argument("line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(names.size()) + " fields, got " +
                                        std::to_string(fields.size()));
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const std::string_view field = detail::trim(fields[c]);
            double value = 0.0;
            const auto res =
                std::from_chars(field.data(), field.data() + field.size(), value);
            if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
                throw std::invalid_argument("line " + std::to_string(line_no) + ", field " +
                                            std::to_string(c + 1) + ": not a number: '" +
                                            std::string(field) + "'");
            if (!std::isfinite(value))
                throw std::invalid_argument("line " + std::to_string(line_no) + ", field " +
                                            std::to_string(c + 1) + ": non-finite value");
            columns[c].push_back(value);
        }
    }
    if (names.empty()) throw std::invalid_argument("line 1: missing header row");
    return TimeSeriesPanel(std::move(columns), std::move(names));
}

inline TimeSeriesPanel read_panel_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_panel_csv(buffer.str());
}

/// Shortest round-trip formatting, so written panels re-ingest bit-exactly.
inline std::string panel_to_csv(const TimeSeriesPanel& panel) {
    std::string out;
    for (std::size_t c = 0; c < panel.cols(); ++c) {
        const std::string& name = panel.names()[c];
        if (name.find(',') != std::string::npos || name.find('\n') != std::string::npos)
            throw std::invalid_argument("column name not CSV-safe: '" + name + "'");
        if (c) out += ',';
        out += name;
    }
    out += '\n';
    for (std::size_t r = 0; r < panel.rows(); ++r) {
        for (std::size_t c = 0; c < panel.cols(); ++c) {
            if (c) out += ',';
            out += detail::format_double(panel.at(r, c));
        }
        out += '\n';
    }
    return out;
}

inline void write_panel_csv(const TimeSeriesPanel& panel, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open file for writing: " + path);
    out << panel_to_csv(panel);
}

}  // namespace extcausal
