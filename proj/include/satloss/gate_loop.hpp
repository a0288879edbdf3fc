#pragma once

#include <complex>
#include <optional>
#include <utility>

#include "satloss/errors.hpp"

namespace satloss {

/// Series RLC reduction of the external gate drive loop: cable inductance,
/// external damping resistor, residual loop resistance, and the effective
/// gate input capacitance C_gs + C_gd.
struct GateLoopCircuit {
    double l_cable = 0.0;  ///< H, > 0
    double r_ext = 0.0;    ///< Ohm, >= 0
    double r_loop = 0.0;   ///< Ohm, >= 0
    double c_eff = 0.0;    ///< F, > 0

    [[nodiscard]] double r_total() const { return r_ext + r_loop; }

    void validate() const;
};

/// Roots of L*s^2 + R_total*s + 1/C = 0 (rad/s). A complex-conjugate pair
/// when R_total < 2*sqrt(L/C); the first element carries the nonnegative
/// imaginary part.
std::pair<std::complex<double>, std::complex<double>> poles(const GateLoopCircuit& circuit);

/// Damped ringing frequency Im(pole)/(2*pi) in Hz; nullopt at or beyond
/// critical damping.
std::optional<double> resonant_frequency(const GateLoopCircuit& circuit);

/// zeta = R_total / (2*sqrt(L/C)).
double damping_ratio(const GateLoopCircuit& circuit);

/// Smallest external resistor reaching the target damping ratio:
/// max(0, 2*zeta_target*sqrt(L/C) - r_loop).
double min_damping_resistor(const GateLoopCircuit& circuit, double zeta_target);

}  // namespace satloss
