#include "cfmimo/results.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "cfmimo/config.hpp"

namespace cfmimo::harness {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string version_string() { return "cfmimo-0.1.0"; }

namespace {

bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\n\r") != std::string::npos;
}

std::string quote(const std::string& s) {
    if (!needs_quoting(s)) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_row(std::ostream& os, const std::vector<std::string>& row) {
    for (size_t i = 0; i < row.size(); ++i) {
        if (i) os << ',';
        os << quote(row[i]);
    }
    os << "\r\n";
}

std::vector<std::string> parse_csv_line(std::istream& in, bool& ok) {
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool any = false;
    int c;
    while ((c = in.get()) != EOF) {
        any = true;
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    field += '"';
                    in.get();
                } else {
                    in_quotes = false;
                }
            } else {
                field += static_cast<char>(c);
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c == '\r') {
            if (in.peek() == '\n') in.get();
            break;
        } else if (c == '\n') {
            break;
        } else {
            field += static_cast<char>(c);
        }
    }
    ok = any;
    if (any) fields.push_back(field);
    return fields;
}

}  // namespace

void write_csv(const Table& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_row(out, table.header);
    for (const auto& row : table.rows) write_row(out, row);
    if (!out) throw std::runtime_error("write failed: " + path);
}

Table read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    Table table;
    bool ok = false;
    table.header = parse_csv_line(in, ok);
    if (!ok) throw std::runtime_error("empty CSV file: " + path);
    while (true) {
        auto row = parse_csv_line(in, ok);
        if (!ok) break;
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_json(const std::vector<std::pair<std::string, Table>>& tables,
                const std::string& config_echo, const std::string& path) {
    nlohmann::json doc;
    doc["schema_version"] = 1;
    doc["version"] = version_string();
    doc["config"] = config_echo;
    nlohmann::json jt = nlohmann::json::object();
    for (const auto& [name, table] : tables) {
        nlohmann::json t;
        t["header"] = table.header;
        t["rows"] = table.rows;
        jt[name] = std::move(t);
    }
    doc["tables"] = std::move(jt);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << doc.dump(2) << '\n';
}

void emit_results(const std::vector<std::pair<std::string, Table>>& tables,
                  const std::string& format, const std::string& path_prefix,
                  const std::string& config_echo) {
    if (format == "csv") {
        for (const auto& [name, table] : tables)
            write_csv(table, path_prefix + name + ".csv");
    } else if (format == "json") {
        write_json(tables, config_echo, path_prefix + "results.json");
    } else {
        throw ConfigError("unknown output format: " + format);
    }
}

}  // namespace cfmimo::harness
