#pragma once

#include <optional>
#include <string>

#include "satloss/device.hpp"
#include "satloss/gate_loop.hpp"
#include "satloss/sim.hpp"
#include "satloss/thermal.hpp"

namespace satloss {

/// Fully validated run configuration. Temperatures are Celsius in the file
/// (keys carry a _c suffix) and kelvin here; omitted optional fields hold
/// their documented defaults after parsing.
struct RunConfig {
    DeviceParams device;
    ThermalModel thermal;
    std::optional<DriveMode> drive;
    SimConfig sim;
    std::optional<GateLoopCircuit> gate_loop;
    std::optional<GanReverseParams> gan;
};

/// Parses the JSON configuration text. Unknown keys, missing required keys
/// and type mismatches raise ParseError with the offending field; invariant
/// violations raise ValidationError naming the field.
RunConfig parse_config(const std::string& text);

/// Reads and parses a configuration file.
RunConfig load_config(const std::string& path);

/// Effective configuration (defaults materialized) as JSON text.
std::string dump_config(const RunConfig& config);

}  // namespace satloss
