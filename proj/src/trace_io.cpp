#include "satloss/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <system_error>

namespace satloss {

namespace {

constexpr const char* kTraceHeaderPrefix = "time_s,v_gs_V,v_ds_V,i_ds_A,p_W";

std::string node_column(const std::string& node) { return "t_" + node + "_C"; }

// Extracts <node> from a t_<node>_C column name; empty when malformed.
std::string column_node(const std::string& column) {
    if (column.size() < 5 || column.rfind("t_", 0) != 0 ||
        column.compare(column.size() - 2, 2, "_C") != 0) {
        return {};
    }
    return column.substr(2, column.size() - 4);
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot open '" + path + "' for writing");
    return out;
}

std::string read_stripped_line(std::istream& in, bool& ok) {
    std::string line;
    ok = static_cast<bool>(std::getline(in, line));
    if (ok && !line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& field, const std::string& context) {
    double v = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end || field.empty()) {
        throw SchemaError(context + ": cannot parse number '" + field + "'");
    }
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

void write_trace(std::ostream& out, const SimTrace& trace) {
    out << kTraceHeaderPrefix;
    for (const auto& node : trace.nodes) out << ',' << node_column(node);
    out << '\n';
    for (const auto& s : trace.samples) {
        if (s.temps_c.size() != trace.nodes.size()) {
            throw DimensionMismatchError("trace sample node count differs from header");
        }
        out << format_double(s.time) << ',' << format_double(s.v_gs) << ','
            << format_double(s.v_ds) << ',' << format_double(s.i_ds) << ','
            << format_double(s.p);
        for (double t : s.temps_c) out << ',' << format_double(t);
        out << '\n';
    }
}

void write_trace(const std::string& path, const SimTrace& trace) {
    auto out = open_output(path);
    write_trace(out, trace);
}

SimTrace read_trace(std::istream& in) {
    bool ok = false;
    const std::string header = read_stripped_line(in, ok);
    if (!ok) throw SchemaError("empty trace file");
    const auto columns = split_csv_line(header);
    const auto fixed = split_csv_line(kTraceHeaderPrefix);
    if (columns.size() < fixed.size()) throw SchemaError("trace header too short");
    for (std::size_t i = 0; i < fixed.size(); ++i) {
        if (columns[i] != fixed[i]) {
            throw SchemaError("trace header column " + std::to_string(i + 1) +
                              " must be '" + fixed[i] + "', got '" + columns[i] + "'");
        }
    }
    SimTrace trace;
    for (std::size_t i = fixed.size(); i < columns.size(); ++i) {
        const std::string node = column_node(columns[i]);
        if (node.empty()) {
            throw SchemaError("trace header column '" + columns[i] +
                              "' does not match t_<node>_C");
        }
        trace.nodes.push_back(node);
    }

    std::size_t row = 1;
    while (true) {
        const std::string line = read_stripped_line(in, ok);
        if (!ok) break;
        if (line.empty()) continue;
        ++row;
        const auto fields = split_csv_line(line);
        const std::string ctx = "trace row " + std::to_string(row);
        if (fields.size() != columns.size()) {
            throw SchemaError(ctx + ": expected " + std::to_string(columns.size()) +
                              " fields, got " + std::to_string(fields.size()));
        }
        TraceSample s;
        s.time = parse_double(fields[0], ctx);
        s.v_gs = parse_double(fields[1], ctx);
        s.v_ds = parse_double(fields[2], ctx);
        s.i_ds = parse_double(fields[3], ctx);
        s.p = parse_double(fields[4], ctx);
        for (std::size_t i = fixed.size(); i < fields.size(); ++i) {
            s.temps_c.push_back(parse_double(fields[i], ctx));
        }
        if (!trace.samples.empty() && s.time <= trace.samples.back().time) {
            throw NonMonotonicTimeError(ctx + ": time_s must strictly increase");
        }
        trace.samples.push_back(std::move(s));
    }
    return trace;
}

SimTrace read_trace(const std::string& path) {
    auto in = open_input(path);
    return read_trace(in);
}

void write_calibration_map(std::ostream& out, const CalibrationMap& map) {
    out << "p_W";
    for (const auto& node : map.nodes) out << ',' << node_column(node);
    out << '\n';
    for (const auto& s : map.samples) {
        if (s.temps.size() != map.nodes.size()) {
            throw DimensionMismatchError("map sample node count differs from header");
        }
        out << format_double(s.p);
        for (double t : s.temps) out << ',' << format_double(kelvin_to_celsius(t));
        out << '\n';
    }
}

void write_calibration_map(const std::string& path, const CalibrationMap& map) {
    auto out = open_output(path);
    write_calibration_map(out, map);
}

CalibrationMap read_calibration_map(std::istream& in) {
    bool ok = false;
    const std::string header = read_stripped_line(in, ok);
    if (!ok) throw SchemaError("empty calibration map file");
    const auto columns = split_csv_line(header);
    if (columns.empty() || columns[0] != "p_W") {
        throw SchemaError("calibration map header must start with p_W");
    }
    CalibrationMap map;
    map.ambient = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 1; i < columns.size(); ++i) {
        const std::string node = column_node(columns[i]);
        if (node.empty()) {
            throw SchemaError("calibration map column '" + columns[i] +
                              "' does not match t_<node>_C");
        }
        map.nodes.push_back(node);
    }
    if (map.nodes.empty()) throw SchemaError("calibration map has no node columns");

    std::size_t row = 1;
    while (true) {
        const std::string line = read_stripped_line(in, ok);
        if (!ok) break;
        if (line.empty()) continue;
        ++row;
        const auto fields = split_csv_line(line);
        const std::string ctx = "calibration map row " + std::to_string(row);
        if (fields.size() != columns.size()) {
            throw SchemaError(ctx + ": expected " + std::to_string(columns.size()) +
                              " fields, got " + std::to_string(fields.size()));
        }
        CalibrationSample s;
        s.p = parse_double(fields[0], ctx);
        for (std::size_t i = 1; i < fields.size(); ++i) {
            s.temps.push_back(celsius_to_kelvin(parse_double(fields[i], ctx)));
        }
        map.samples.push_back(std::move(s));
    }
    return map;
}

CalibrationMap read_calibration_map(const std::string& path) {
    auto in = open_input(path);
    return read_calibration_map(in);
}

}  // namespace satloss
