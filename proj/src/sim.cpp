#include "satloss/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace satloss {

namespace {

// Electrical solution at one junction temperature.
struct ElectricalPoint {
    double v_ds = 0.0;
    double i_ds = 0.0;
    bool clamped = false;
};

ElectricalPoint solve_electrical(const DeviceParams& device, const DriveMode& drive,
                                 double t_j) {
    ElectricalPoint pt;
    if (const auto* vm = std::get_if<VoltageMode>(&drive)) {
        pt.v_ds = vm->v_ds;
        pt.i_ds = drain_current(device, {vm->v_gs, vm->v_ds, t_j});
        return pt;
    }
    const auto& cm = std::get<CurrentMode>(drive);
    const double i_max = drain_current(device, {cm.v_gs, cm.v_compliance, t_j});
    if (cm.i_set > i_max) {
        // Supply rails at its voltage limit; the device sets the current.
        pt.v_ds = cm.v_compliance;
        pt.i_ds = i_max;
        pt.clamped = true;
        return pt;
    }
    pt.v_ds = cm.i_set > 0.0
                  ? solve_vds_for_current(device, cm.i_set, cm.v_gs, t_j, cm.v_compliance)
                  : 0.0;
    pt.i_ds = cm.i_set;
    return pt;
}

double drive_v_gs(const DriveMode& drive) {
    if (const auto* vm = std::get_if<VoltageMode>(&drive)) return vm->v_gs;
    return std::get<CurrentMode>(drive).v_gs;
}

double junction_resistance(const ThermalModel& thermal, const std::string& junction_node) {
    const std::string name = junction_node.empty() ? thermal.nodes.front().name : junction_node;
    return thermal.static_resistance(thermal.node_index(name));
}

}  // namespace

void SimConfig::validate() const {
    if (!(dt > 0.0)) throw ValidationError("sim.dt must be > 0");
    if (!(t_end > dt)) throw ValidationError("sim.t_end must exceed sim.dt");
    if (!(t_ambient > 0.0)) throw ValidationError("sim.t_ambient must be > 0");
    if (!(runaway_temp > t_ambient)) {
        throw ValidationError("sim.runaway_temp must exceed sim.t_ambient");
    }
    if (junction_node.empty()) throw ValidationError("sim.junction_node must be set");
}

SimTrace simulate(const DeviceParams& device, const ThermalModel& thermal,
                  const DriveMode& drive, const SimConfig& cfg) {
    device.validate();
    thermal.validate();
    cfg.validate();
    if (std::abs(cfg.t_ambient - thermal.t_ambient) > 1e-9) {
        throw ValidationError("sim.t_ambient disagrees with thermal.t_ambient");
    }
    if (const auto* cm = std::get_if<CurrentMode>(&drive)) {
        if (!(cm->v_compliance > 0.0)) throw ValidationError("drive.v_compliance must be > 0");
        if (cm->i_set < 0.0) throw ValidationError("drive.i_set must be >= 0");
    }
    const std::size_t junction = thermal.node_index(cfg.junction_node);
    if (thermal.nodes[junction].stages.empty()) {
        throw ValidationError("junction node '" + cfg.junction_node + "' has no Foster stages");
    }

    const auto n_steps =
        static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.dt - 1e-12));

    SimTrace trace;
    trace.nodes.reserve(thermal.nodes.size());
    for (const auto& node : thermal.nodes) trace.nodes.push_back(node.name);
    trace.samples.reserve(n_steps + 1);

    ThermalState state = ThermalState::zero(thermal);
    const double v_gs = drive_v_gs(drive);
    for (std::size_t k = 0; k <= n_steps; ++k) {
        const double t_j = node_temperature(thermal, state, junction);
        const ElectricalPoint pt = solve_electrical(device, drive, t_j);

        TraceSample sample;
        sample.time = static_cast<double>(k) * cfg.dt;
        sample.v_gs = v_gs;
        sample.v_ds = pt.v_ds;
        sample.i_ds = pt.i_ds;
        sample.p = pt.v_ds * pt.i_ds;
        sample.clamped = pt.clamped;
        sample.temps_c.reserve(thermal.nodes.size());
        for (std::size_t n = 0; n < thermal.nodes.size(); ++n) {
            sample.temps_c.push_back(kelvin_to_celsius(node_temperature(thermal, state, n)));
        }
        trace.samples.push_back(std::move(sample));

        if (k < n_steps) state = step(thermal, state, pt.v_ds * pt.i_ds, cfg.dt);
    }
    return trace;
}

StabilityVerdict classify(const SimTrace& trace, const SimConfig& cfg, double settle_tol) {
    if (trace.samples.empty()) throw ValidationError("trace is empty");
    if (!(settle_tol > 0.0)) throw ValidationError("settle_tol must be > 0");
    std::size_t junction = trace.nodes.size();
    for (std::size_t i = 0; i < trace.nodes.size(); ++i) {
        if (trace.nodes[i] == cfg.junction_node) junction = i;
    }
    if (junction == trace.nodes.size()) {
        throw UnknownNodeError("trace has no node '" + cfg.junction_node + "'");
    }

    const auto junction_k = [&](const TraceSample& s) {
        return celsius_to_kelvin(s.temps_c[junction]);
    };

    for (const auto& s : trace.samples) {
        if (junction_k(s) >= cfg.runaway_temp) return Runaway{s.time};
    }

    if (trace.samples.back().clamped) {
        std::size_t first = trace.samples.size() - 1;
        while (first > 0 && trace.samples[first - 1].clamped) --first;
        return ComplianceLimited{trace.samples[first].time};
    }

    const std::size_t n = trace.samples.size();
    const std::size_t window = std::max<std::size_t>(n == 1 ? 1 : 2, n / 10);
    const std::size_t begin = n - window;

    const auto window_settled = [&](auto&& get) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        double sum = 0.0;
        for (std::size_t k = begin; k < n; ++k) {
            const double v = get(trace.samples[k]);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            sum += v;
        }
        const double mean = sum / static_cast<double>(window);
        const double scale = std::max(std::abs(mean), 1e-300);
        return std::pair{(hi - lo) / scale <= settle_tol, mean};
    };

    const auto [p_ok, p_mean] = window_settled([](const TraceSample& s) { return s.p; });
    const auto [t_ok, t_mean] = window_settled(junction_k);
    const auto [v_ok, v_mean] = window_settled([](const TraceSample& s) { return s.v_ds; });
    const auto [i_ok, i_mean] = window_settled([](const TraceSample& s) { return s.i_ds; });

    if (p_ok && t_ok && v_ok && i_ok) {
        // Settle time: start of the longest suffix whose junction temperature
        // stays inside the settle band around the window mean.
        const double band = settle_tol * std::max(std::abs(t_mean), 1e-300);
        std::size_t first = n - 1;
        while (first > 0 && std::abs(junction_k(trace.samples[first - 1]) - t_mean) <= band) {
            --first;
        }
        return Stable{trace.samples[first].time, SteadyState{p_mean, t_mean, v_mean, i_mean}};
    }
    throw UnsettledError("trace did not settle, run away, or hit compliance; extend t_end");
}

SteadyState steady_state_operating_point(const DeviceParams& device,
                                         const ThermalModel& thermal,
                                         const CurrentMode& drive,
                                         const std::string& junction_node) {
    device.validate();
    thermal.validate();
    if (!(drive.v_compliance > 0.0)) throw ValidationError("drive.v_compliance must be > 0");
    if (drive.i_set < 0.0) throw ValidationError("drive.i_set must be >= 0");
    if (drive.i_set == 0.0) return SteadyState{0.0, thermal.t_ambient, 0.0, 0.0};

    const double r_th = junction_resistance(thermal, junction_node);
    const DriveMode mode = drive;

    const auto target = [&](double t) {
        const ElectricalPoint pt = solve_electrical(device, mode, t);
        return thermal.t_ambient + r_th * pt.v_ds * pt.i_ds;
    };

    double t = thermal.t_ambient;
    double damping = 1.0;
    double prev_abs_dt = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (int iter = 0; iter < 20000; ++iter) {
        const double dt = target(t) - t;
        if (std::abs(dt) < 1e-9) {
            converged = true;
            break;
        }
        if (std::abs(dt) >= prev_abs_dt) damping = std::max(0.5 * damping, 1e-4);
        prev_abs_dt = std::abs(dt);
        t += damping * dt;
    }
    if (!converged) {
        throw NoConvergenceError("steady-state fixed point did not converge");
    }

    const ElectricalPoint pt = solve_electrical(device, mode, t);
    if (pt.clamped) {
        if (pt.i_ds == 0.0) {
            throw BelowThresholdError("device stays off at steady state, setpoint unreachable");
        }
        throw ComplianceExceededError("steady state sits at the compliance clamp");
    }
    return SteadyState{pt.v_ds * pt.i_ds, t, pt.v_ds, pt.i_ds};
}

double local_stability(const DeviceParams& device, const ThermalModel& thermal,
                       double v_gs, double v_ds, double t_j,
                       const std::string& junction_node) {
    const double r_th = junction_resistance(thermal, junction_node);
    return v_ds * alpha(device, {v_gs, v_ds, t_j}) * r_th;
}

SweepResult sweep_calibration_points(const DeviceParams& device,
                                     const ThermalModel& thermal,
                                     const std::vector<CurrentMode>& points,
                                     const std::string& junction_node) {
    if (points.empty()) throw ValidationError("calibration sweep needs at least one point");
    thermal.validate();

    SweepResult result;
    result.map.ambient = thermal.t_ambient;
    for (const auto& node : thermal.nodes) result.map.nodes.push_back(node.name);

    for (std::size_t i = 0; i < points.size(); ++i) {
        try {
            const SteadyState ss =
                steady_state_operating_point(device, thermal, points[i], junction_node);
            std::vector<double> p(thermal.source_count(), 0.0);
            p[0] = ss.p;
            result.map.samples.push_back({ss.p, steady_state_temp(thermal, p)});
        } catch (const Error& e) {
            result.failures.push_back("point " + std::to_string(i) +
                                      " (i_set=" + std::to_string(points[i].i_set) +
                                      " A): " + e.what());
        }
    }
    if (result.map.samples.empty()) {
        std::string msg = "all calibration points failed:";
        for (const auto& f : result.failures) msg += "\n  " + f;
        throw SweepError(msg);
    }
    std::sort(result.map.samples.begin(), result.map.samples.end(),
              [](const CalibrationSample& a, const CalibrationSample& b) { return a.p < b.p; });
    return result;
}

}  // namespace satloss
