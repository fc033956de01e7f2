#pragma once

#include "helm/core_types.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace helm {

/// A sensor matrix together with its column names.
struct SensorTable {
    std::vector<std::string> columns;
    SensorMatrix data;
};

/// Reads a CSV with one header row and one sample per subsequent row.
///
/// Values are decimal-point reals. Blank lines are skipped. Any malformed
/// cell raises ParseError carrying the 1-based row and column; row 1 is the
/// header.
SensorTable read_sensor_csv(std::istream& in);
SensorTable read_sensor_csv(const std::filesystem::path& path);

/// Writes the table with shortest round-trip formatting, so reading the
/// file back reproduces every value bit for bit.
void write_sensor_csv(std::ostream& out, const SensorTable& table);
void write_sensor_csv(const std::filesystem::path& path, const SensorTable& table);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Strict parse of a whole string as a double; returns false on any junk.
bool parse_double(std::string_view text, double& value);

/// Default column names s1..sD.
std::vector<std::string> default_column_names(Eigen::Index count);

}  // namespace helm
