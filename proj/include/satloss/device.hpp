#pragma once

#include <optional>
#include <vector>

#include "satloss/errors.hpp"

namespace satloss {

/// Level-1 MOSFET parameters with temperature-dependent mobility and
/// threshold voltage:
///
///   mu(T)   = mu0 * (T / t_ref)^(-mobility_exp)
///   V_th(T) = vth0 - vth_tempco * (T - t_ref)
///
/// The transconductance gain K = mu(T) * c_ox * w_cell / (2 * l_ch) is
/// derived, never stored. All temperatures are kelvin.
struct DeviceParams {
    double c_ox = 0.0;          ///< gate oxide capacitance per area (F/m^2)
    double w_cell = 0.0;        ///< total channel width (m)
    double l_ch = 0.0;          ///< channel length (m)
    double mu0 = 0.0;           ///< electron mobility at t_ref (m^2/(V*s))
    double t_ref = 298.15;      ///< reference temperature (K)
    double mobility_exp = 2.2;  ///< exponent a in mu(T) = mu0*(T/t_ref)^(-a)
    double vth0 = 0.0;          ///< threshold voltage at t_ref (V)
    double vth_tempco = 8e-3;   ///< threshold decrease rate k_vth >= 0 (V/K)
    double lambda = 0.0;        ///< channel-length modulation (1/V, >= 0)

    /// Gain K at t_ref (A/V^2).
    [[nodiscard]] double gain() const { return 0.5 * mu0 * c_ox * w_cell / l_ch; }

    /// Throws ValidationError naming the violated field.
    void validate() const;

    /// Default parameter set: K = 44.44 A/V^2 so that the saturation current
    /// at V_GS = 3.55 V and 25 C is 1 A.
    static DeviceParams reference();
};

/// Bias point of the device. t_j is the junction temperature in kelvin.
struct OperatingPoint {
    double v_gs = 0.0;  ///< gate-source voltage (V)
    double v_ds = 0.0;  ///< drain-source voltage (V, >= 0)
    double t_j = 298.15;  ///< junction temperature (K, > 0)

    void validate() const;
};

/// Reverse-conduction model for an enhancement-mode GaN transistor held off:
///
///   V_SD = v_offset(T) - v_gs_off + i_sd * r_rev(T)
///
/// with v_offset(T) = v_offset0 + offset_tempco * (T - t_ref) and
/// r_rev(T) = r_rev0 * (1 + r_rev_tempco * (T - t_ref)).
struct GanReverseParams {
    double v_offset0 = 1.7;      ///< reverse-conduction offset at t_ref (V)
    double offset_tempco = 2e-3; ///< dV_offset/dT (V/K, >= 0)
    double r_rev0 = 0.5;         ///< reverse channel resistance at t_ref (Ohm)
    double r_rev_tempco = 4e-3;  ///< fractional resistance increase per K (1/K, >= 0)
    double t_ref = 298.15;       ///< reference temperature (K)

    void validate() const;
};

/// Threshold voltage at temperature t: vth0 - vth_tempco * (t - t_ref).
double vth(const DeviceParams& params, double t);

/// Electron mobility at temperature t: mu0 * (t / t_ref)^(-mobility_exp).
double mobility(const DeviceParams& params, double t);

/// Piecewise level-1 drain current at the given bias.
///
/// Cutoff (v_gs <= V_th): 0.
/// Ohmic (v_ds < v_gs - V_th): 2K*[(v_gs-V_th)*v_ds - v_ds^2/2]*(1+lambda*v_ds).
/// Saturation: K*(v_gs-V_th)^2*(1+lambda*v_ds).
/// Continuous across the ohmic/saturation boundary.
double drain_current(const DeviceParams& params, const OperatingPoint& op);

/// Temperature coefficient of the drain current, dI_D/dT at fixed bias.
/// Positive below the compensation point, negative above it.
double alpha(const DeviceParams& params, const OperatingPoint& op);

/// Temperature compensation point: the (V_GS, I_D) pair where dI_D/dT = 0.
struct TcPoint {
    double v_tcp;  ///< gate voltage at which alpha vanishes (V)
    double i_tcp;  ///< saturation current there, taken at lambda = 0 (A)
};

/// Computes the compensation point at temperature t:
/// V_TCP = V_th(t) + 2 * vth_tempco * t / mobility_exp. Independent of v_ds
/// and lambda because the (1 + lambda*v_ds) factor cancels in dI/dT = 0.
/// Throws DegenerateTcpError when vth_tempco or mobility_exp is zero.
TcPoint tcp(const DeviceParams& params, double t);

/// Smallest v_ds in [0, v_compliance] carrying i_target at the given gate
/// voltage and temperature, by bisection on the monotone I(v_ds) curve.
/// Throws BelowThresholdError if the device is off and i_target > 0,
/// ComplianceExceededError if the current is unreachable within compliance.
double solve_vds_for_current(const DeviceParams& params, double i_target,
                             double v_gs, double t, double v_compliance);

struct TransferPoint {
    double v_gs;
    double i_d;
};

/// Drain current over an ascending v_gs grid at fixed v_ds and temperature.
std::vector<TransferPoint> transfer_curve(const DeviceParams& params, double v_ds,
                                          double t, const std::vector<double>& v_gs_grid);

struct OutputPoint {
    double v_ds;
    double i_d;
    bool clipped;  ///< true when v_ds * i_d exceeds the power limit (strict)
};

struct OutputCurve {
    std::vector<OutputPoint> points;
    /// Constant-power hyperbola i = p_limit / v_ds over the same grid;
    /// empty when no limit was given.
    std::vector<double> soa;
};

/// Drain current over an ascending v_ds grid (>= 2 points) at fixed v_gs and
/// temperature, with points above the optional power limit flagged.
OutputCurve output_curve(const DeviceParams& params, double v_gs, double t,
                         const std::vector<double>& v_ds_grid,
                         std::optional<double> soa_power_limit);

/// Source-drain voltage of a GaN device held off at gate voltage
/// v_gs_off <= 0 while conducting i_sd in reverse. Lowering the gate by
/// dv raises V_SD by exactly dv.
double gan_reverse_vsd(const GanReverseParams& params, double i_sd,
                       double v_gs_off, double t);

}  // namespace satloss
