#pragma once

#include <string>
#include <variant>
#include <vector>

#include "satloss/device.hpp"
#include "satloss/thermal.hpp"

namespace satloss {

/// Fixed gate and drain voltage (no current limit).
struct VoltageMode {
    double v_gs = 0.0;
    double v_ds = 0.0;
};

/// Fixed gate voltage with a current-regulated drain supply. The supply
/// clamps at v_compliance when the setpoint is unreachable.
struct CurrentMode {
    double v_gs = 0.0;
    double i_set = 0.0;
    double v_compliance = 0.0;
};

using DriveMode = std::variant<VoltageMode, CurrentMode>;

struct SimConfig {
    double dt = 0.01;            ///< s
    double t_end = 120.0;        ///< s
    double t_ambient = 298.15;   ///< K, must match the thermal model
    double runaway_temp = 448.15;  ///< K, classification threshold
    std::string junction_node = "T_j";  ///< thermal node that drives the device

    void validate() const;
};

/// One row of a simulation trace. Node temperatures are Celsius, matching
/// the trace file format; everything else is SI.
struct TraceSample {
    double time = 0.0;
    double v_gs = 0.0;
    double v_ds = 0.0;
    double i_ds = 0.0;
    double p = 0.0;
    std::vector<double> temps_c;
    bool clamped = false;  ///< current-mode supply pinned at compliance
};

struct SimTrace {
    std::vector<std::string> nodes;
    std::vector<TraceSample> samples;
};

/// Mean electrical/thermal operating point. t_j is kelvin.
struct SteadyState {
    double p = 0.0;
    double t_j = 0.0;
    double v_ds = 0.0;
    double i_ds = 0.0;
};

struct Stable {
    double t_settle = 0.0;  ///< first time the junction stays inside the settle band
    SteadyState steady;
};

struct Runaway {
    double t_cross = 0.0;  ///< first crossing of the runaway threshold
};

struct ComplianceLimited {
    double t_hit = 0.0;  ///< start of the trailing clamped interval
};

using StabilityVerdict = std::variant<Stable, Runaway, ComplianceLimited>;

/// Closed-loop electro-thermal simulation. The electrical point is solved
/// quasi-statically from the junction temperature at each sample, then the
/// thermal state advances one exact exponential step under that power.
/// Below-threshold drives yield a zero-power trace, not an error.
/// Deterministic: identical inputs give bit-identical traces.
SimTrace simulate(const DeviceParams& device, const ThermalModel& thermal,
                  const DriveMode& drive, const SimConfig& cfg);

/// Classifies a trace: Runaway if the junction ever reaches runaway_temp,
/// ComplianceLimited if the supply was clamped at the final sample, Stable
/// if the last 10% of samples vary by less than settle_tol (relative) in
/// p, t_j, v_ds and i_ds. Throws UnsettledError otherwise.
StabilityVerdict classify(const SimTrace& trace, const SimConfig& cfg,
                          double settle_tol = 1e-4);

/// Regulated steady state of a current-mode drive: the fixed point of
/// T = t_ambient + R * p(T) on the junction node, found by damped iteration
/// to |dT| < 1e-9 K. Throws ComplianceExceededError when the converged point
/// is clamped, BelowThresholdError when the device never conducts, and
/// NoConvergenceError after the iteration budget.
SteadyState steady_state_operating_point(const DeviceParams& device,
                                         const ThermalModel& thermal,
                                         const CurrentMode& drive,
                                         const std::string& junction_node = "");

/// Voltage-mode small-signal thermal loop gain at a bias point:
/// g = v_ds * alpha * R_junction. g > 1 predicts runaway, g < 1 local
/// stability. Meaningful in the saturation region.
double local_stability(const DeviceParams& device, const ThermalModel& thermal,
                       double v_gs, double v_ds, double t_j,
                       const std::string& junction_node = "");

struct CalibrationSample {
    double p = 0.0;              ///< W
    std::vector<double> temps;   ///< per-node steady-state temperature (K)
};

struct CalibrationMap {
    double ambient = 0.0;        ///< K
    std::vector<std::string> nodes;
    std::vector<CalibrationSample> samples;
};

struct SweepResult {
    CalibrationMap map;
    std::vector<std::string> failures;  ///< one message per failed point
};

/// Steady-state (power, temperatures) sample for each current-mode point,
/// sorted by power. Per-point failures are collected, not fatal; throws
/// SweepError only when every point fails.
SweepResult sweep_calibration_points(const DeviceParams& device,
                                     const ThermalModel& thermal,
                                     const std::vector<CurrentMode>& points,
                                     const std::string& junction_node = "");

inline double kelvin_to_celsius(double k) { return k - 273.15; }
inline double celsius_to_kelvin(double c) { return c + 273.15; }

}  // namespace satloss
