#include "satloss/device.hpp"

#include <cmath>
#include <limits>

namespace satloss {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw ValidationError(what);
}

// Gain K at temperature t, i.e. mu(t) * c_ox * w_cell / (2 * l_ch).
double gain_at(const DeviceParams& p, double t) {
    return 0.5 * mobility(p, t) * p.c_ox * p.w_cell / p.l_ch;
}

}  // namespace

void DeviceParams::validate() const {
    require(c_ox > 0.0, "device.c_ox must be > 0");
    require(w_cell > 0.0, "device.w_cell must be > 0");
    require(l_ch > 0.0, "device.l_ch must be > 0");
    require(mu0 > 0.0, "device.mu0 must be > 0");
    require(t_ref > 0.0, "device.t_ref must be > 0");
    require(mobility_exp >= 0.0, "device.mobility_exp must be >= 0");
    require(vth_tempco >= 0.0, "device.vth_tempco must be >= 0");
    require(lambda >= 0.0, "device.lambda must be >= 0");
    require(std::isfinite(vth0), "device.vth0 must be finite");
}

DeviceParams DeviceParams::reference() {
    DeviceParams p;
    p.c_ox = 2e-3;      // F/m^2
    p.w_cell = 0.8888;  // m, total width of all cells
    p.l_ch = 1e-6;      // m
    p.mu0 = 0.05;       // m^2/(V*s)
    p.t_ref = 298.15;
    p.mobility_exp = 2.2;
    p.vth0 = 3.4;
    p.vth_tempco = 8e-3;
    p.lambda = 0.0;
    return p;
}

void OperatingPoint::validate() const {
    require(t_j > 0.0, "operating point t_j must be > 0");
    require(v_ds >= 0.0, "operating point v_ds must be >= 0");
}

void GanReverseParams::validate() const {
    require(v_offset0 > 0.0, "gan.v_offset0 must be > 0");
    require(r_rev0 > 0.0, "gan.r_rev0 must be > 0");
    require(offset_tempco >= 0.0, "gan.offset_tempco must be >= 0");
    require(r_rev_tempco >= 0.0, "gan.r_rev_tempco must be >= 0");
    require(t_ref > 0.0, "gan.t_ref must be > 0");
}

double vth(const DeviceParams& params, double t) {
    return params.vth0 - params.vth_tempco * (t - params.t_ref);
}

double mobility(const DeviceParams& params, double t) {
    return params.mu0 * std::pow(t / params.t_ref, -params.mobility_exp);
}

double drain_current(const DeviceParams& params, const OperatingPoint& op) {
    const double v_ov = op.v_gs - vth(params, op.t_j);
    if (v_ov <= 0.0) return 0.0;
    const double k = gain_at(params, op.t_j);
    const double clm = 1.0 + params.lambda * op.v_ds;
    if (op.v_ds < v_ov) {
        return 2.0 * k * (v_ov * op.v_ds - 0.5 * op.v_ds * op.v_ds) * clm;
    }
    return k * v_ov * v_ov * clm;
}

double alpha(const DeviceParams& params, const OperatingPoint& op) {
    const double t = op.t_j;
    const double v_ov = op.v_gs - vth(params, t);
    if (v_ov <= 0.0) return 0.0;
    const double k = gain_at(params, t);
    const double clm = 1.0 + params.lambda * op.v_ds;
    // d/dT acts on the gain through mobility (factor -a/T) and on the
    // overdrive through the threshold (dv_ov/dT = +vth_tempco).
    const double dlog_k = -params.mobility_exp / t;
    if (op.v_ds < v_ov) {
        const double shape = v_ov * op.v_ds - 0.5 * op.v_ds * op.v_ds;
        return 2.0 * k * clm * (dlog_k * shape + params.vth_tempco * op.v_ds);
    }
    return k * clm * v_ov * (dlog_k * v_ov + 2.0 * params.vth_tempco);
}

TcPoint tcp(const DeviceParams& params, double t) {
    if (params.vth_tempco <= 0.0) {
        throw DegenerateTcpError(
            "no finite compensation point: vth_tempco is zero, alpha < 0 everywhere above threshold");
    }
    if (params.mobility_exp <= 0.0) {
        throw DegenerateTcpError(
            "no finite compensation point: mobility_exp is zero, alpha > 0 everywhere above threshold");
    }
    const double v_ov = 2.0 * params.vth_tempco * t / params.mobility_exp;
    const double k = gain_at(params, t);
    return TcPoint{vth(params, t) + v_ov, k * v_ov * v_ov};
}

double solve_vds_for_current(const DeviceParams& params, double i_target,
                             double v_gs, double t, double v_compliance) {
    if (i_target < 0.0) throw ValidationError("i_target must be >= 0");
    if (v_compliance <= 0.0) throw ValidationError("v_compliance must be > 0");
    if (i_target == 0.0) return 0.0;
    if (v_gs <= vth(params, t)) {
        throw BelowThresholdError("v_gs at or below threshold, device carries no current");
    }
    if (drain_current(params, {v_gs, v_compliance, t}) < i_target) {
        throw ComplianceExceededError("i_target unreachable within the compliance voltage");
    }
    // I(v_ds) is non-decreasing, so the set {v : I(v) >= i_target} is an
    // interval; bisection on its left edge yields the smallest root.
    double lo = 0.0;
    double hi = v_compliance;
    for (int iter = 0; iter < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (drain_current(params, {v_gs, mid, t}) >= i_target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<TransferPoint> transfer_curve(const DeviceParams& params, double v_ds,
                                          double t, const std::vector<double>& v_gs_grid) {
    if (v_gs_grid.empty()) throw ValidationError("v_gs grid must be nonempty");
    for (std::size_t i = 1; i < v_gs_grid.size(); ++i) {
        if (v_gs_grid[i] <= v_gs_grid[i - 1]) throw ValidationError("v_gs grid must be ascending");
    }
    std::vector<TransferPoint> out;
    out.reserve(v_gs_grid.size());
    for (double v_gs : v_gs_grid) {
        out.push_back({v_gs, drain_current(params, {v_gs, v_ds, t})});
    }
    return out;
}

OutputCurve output_curve(const DeviceParams& params, double v_gs, double t,
                         const std::vector<double>& v_ds_grid,
                         std::optional<double> soa_power_limit) {
    if (v_ds_grid.size() < 2) throw ValidationError("v_ds grid needs at least 2 points");
    for (std::size_t i = 1; i < v_ds_grid.size(); ++i) {
        if (v_ds_grid[i] <= v_ds_grid[i - 1]) throw ValidationError("v_ds grid must be ascending");
    }
    OutputCurve curve;
    curve.points.reserve(v_ds_grid.size());
    for (double v_ds : v_ds_grid) {
        const double i_d = drain_current(params, {v_gs, v_ds, t});
        const bool clipped = soa_power_limit.has_value() && v_ds * i_d > *soa_power_limit;
        curve.points.push_back({v_ds, i_d, clipped});
    }
    if (soa_power_limit.has_value()) {
        curve.soa.reserve(v_ds_grid.size());
        for (double v_ds : v_ds_grid) {
            curve.soa.push_back(v_ds > 0.0 ? *soa_power_limit / v_ds
                                           : std::numeric_limits<double>::infinity());
        }
    }
    return curve;
}

double gan_reverse_vsd(const GanReverseParams& params, double i_sd,
                       double v_gs_off, double t) {
    if (i_sd < 0.0) throw ValidationError("i_sd must be >= 0");
    if (v_gs_off > 0.0) throw ValidationError("v_gs_off must be <= 0");
    const double dt = t - params.t_ref;
    const double offset = params.v_offset0 + params.offset_tempco * dt;
    const double r_rev = params.r_rev0 * (1.0 + params.r_rev_tempco * dt);
    // Gate offset applied last: shifting the gate by dv moves V_SD by -dv.
    return (offset + i_sd * r_rev) - v_gs_off;
}

}  // namespace satloss
