#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "satloss/sim.hpp"

namespace satloss {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// Strict double parse of a whole field; throws SchemaError on junk.
double parse_double(const std::string& field, const std::string& context);

/// Writes the trace as CSV: header time_s,v_gs_V,v_ds_V,i_ds_A,p_W followed
/// by one t_<node>_C column per node; every row newline-terminated.
void write_trace(std::ostream& out, const SimTrace& trace);
void write_trace(const std::string& path, const SimTrace& trace);

/// Reads a trace CSV back. Throws SchemaError on a malformed header or row,
/// NonMonotonicTimeError when time does not strictly increase. Numeric
/// fields survive a write/read round trip exactly.
SimTrace read_trace(std::istream& in);
SimTrace read_trace(const std::string& path);

/// Calibration map CSV: header p_W plus one t_<node>_C column per node.
void write_calibration_map(std::ostream& out, const CalibrationMap& map);
void write_calibration_map(const std::string& path, const CalibrationMap& map);

/// Reads a calibration map CSV. The file does not carry the ambient
/// temperature; the returned map has ambient = NaN (fit_static never uses
/// it). Temperatures are converted from Celsius to kelvin.
CalibrationMap read_calibration_map(std::istream& in);
CalibrationMap read_calibration_map(const std::string& path);

/// Splits one CSV line on commas (no quoting; fields never contain commas).
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace satloss
