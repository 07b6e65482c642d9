#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cfmimo::harness {

/// Plot-ready data table: named columns, string cells. Numeric cells are
/// formatted with twelve significant digits so a CSV round trip is lossless
/// at that precision.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string format_number(double v);
std::string version_string();

void write_csv(const Table& table, const std::string& path);
Table read_csv(const std::string& path);

void write_json(const std::vector<std::pair<std::string, Table>>& tables,
                const std::string& config_echo, const std::string& path);

/// Emits every table under the given path prefix. format is "csv" (one file
/// per table, <prefix><name>.csv) or "json" (single <prefix>results.json).
void emit_results(const std::vector<std::pair<std::string, Table>>& tables,
                  const std::string& format, const std::string& path_prefix,
                  const std::string& config_echo = "");

}  // namespace cfmimo::harness
