#include "helm/csv.hpp"

#include "helm/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace helm {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

bool blank(std::string_view s) { return trim(s).empty(); }

}  // namespace

bool parse_double(std::string_view text, double& value) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return false;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    return ec == std::errc() && ptr == last;
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) {
        throw IoError("format_double: conversion failed");
    }
    return std::string(buf, ptr);
}

std::vector<std::string> default_column_names(Eigen::Index count) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(count));
    for (Eigen::Index j = 0; j < count; ++j) {
        names.push_back("s" + std::to_string(j + 1));
    }
    return names;
}

SensorTable read_sensor_csv(std::istream& in) {
    std::string line;
    std::size_t row = 0;
    SensorTable table;

    while (std::getline(in, line)) {
        ++row;
        if (!blank(line)) break;
    }
    if (row == 0 || blank(line)) {
        throw ParseError("csv: empty input", 0, 0);
    }
    for (auto field : split_fields(line)) {
        table.columns.emplace_back(trim(field));
    }
    const std::size_t width = table.columns.size();

    std::vector<double> values;
    std::size_t samples = 0;
    while (std::getline(in, line)) {
        ++row;
        if (blank(line)) continue;
        const auto fields = split_fields(line);
        if (fields.size() != width) {
            throw ParseError("csv: row " + std::to_string(row) + " has " +
                                 std::to_string(fields.size()) + " fields, expected " +
                                 std::to_string(width),
                             row, std::min(fields.size(), width) + 1);
        }
        for (std::size_t j = 0; j < width; ++j) {
            double v = 0.0;
            if (!parse_double(fields[j], v) || !std::isfinite(v)) {
                throw ParseError("csv: row " + std::to_string(row) + ", column " +
                                     std::to_string(j + 1) + " (" + table.columns[j] +
                                     "): not a finite number: '" + std::string(trim(fields[j])) +
                                     "'",
                                 row, j + 1);
            }
            values.push_back(v);
        }
        ++samples;
    }
    if (samples == 0) {
        throw ParseError("csv: no data rows", row, 0);
    }

    table.data.resize(static_cast<Eigen::Index>(samples), static_cast<Eigen::Index>(width));
    for (std::size_t i = 0; i < samples; ++i) {
        for (std::size_t j = 0; j < width; ++j) {
            table.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                values[i * width + j];
        }
    }
    return table;
}

SensorTable read_sensor_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    return read_sensor_csv(in);
}

void write_sensor_csv(std::ostream& out, const SensorTable& table) {
    if (static_cast<Eigen::Index>(table.columns.size()) != table.data.cols()) {
        throw DimensionError("write_sensor_csv: " + std::to_string(table.columns.size()) +
                             " names for " + std::to_string(table.data.cols()) + " columns");
    }
    std::string buffer;
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
        if (j) buffer += ',';
        buffer += table.columns[j];
    }
    buffer += '\n';
    out << buffer;
    for (Eigen::Index i = 0; i < table.data.rows(); ++i) {
        buffer.clear();
        for (Eigen::Index j = 0; j < table.data.cols(); ++j) {
            if (j) buffer += ',';
            buffer += format_double(table.data(i, j));
        }
        buffer += '\n';
        out << buffer;
    }
}

void write_sensor_csv(const std::filesystem::path& path, const SensorTable& table) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    write_sensor_csv(out, table);
    if (!out) {
        throw IoError("write failed: '" + path.string() + "'");
    }
}

}  // namespace helm
