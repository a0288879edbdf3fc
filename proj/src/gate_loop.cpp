#include "satloss/gate_loop.hpp"

#include <cmath>
#include <numbers>

namespace satloss {

void GateLoopCircuit::validate() const {
    if (!(l_cable > 0.0)) throw ValidationError("gate_loop.l_cable must be > 0");
    if (!(c_eff > 0.0)) throw ValidationError("gate_loop.c_eff must be > 0");
    if (r_ext < 0.0) throw ValidationError("gate_loop.r_ext must be >= 0");
    if (r_loop < 0.0) throw ValidationError("gate_loop.r_loop must be >= 0");
}

std::pair<std::complex<double>, std::complex<double>> poles(const GateLoopCircuit& circuit) {
    circuit.validate();
    const double l = circuit.l_cable;
    const double r = circuit.r_total();
    const double inv_c = 1.0 / circuit.c_eff;
    const double disc = r * r - 4.0 * l * inv_c;
    if (disc < 0.0) {
        const double re = -r / (2.0 * l);
        const double im = std::sqrt(-disc) / (2.0 * l);
        return {{re, im}, {re, -im}};
    }
    // stable quadratic: avoids cancellation in the small-magnitude root
    const double q = -0.5 * (r + std::sqrt(disc));
    if (q == 0.0) return {{0.0, 0.0}, {0.0, 0.0}};  // lossless, disc == 0 only if 1/C == 0
    return {{inv_c / q, 0.0}, {q / l, 0.0}};
}

std::optional<double> resonant_frequency(const GateLoopCircuit& circuit) {
    if (damping_ratio(circuit) >= 1.0) return std::nullopt;
    return poles(circuit).first.imag() / (2.0 * std::numbers::pi);
}

double damping_ratio(const GateLoopCircuit& circuit) {
    circuit.validate();
    return circuit.r_total() / (2.0 * std::sqrt(circuit.l_cable / circuit.c_eff));
}

double min_damping_resistor(const GateLoopCircuit& circuit, double zeta_target) {
    circuit.validate();
    if (!(zeta_target >= 0.0)) throw ValidationError("zeta_target must be >= 0");
    const double needed = 2.0 * zeta_target * std::sqrt(circuit.l_cable / circuit.c_eff);
    return std::max(0.0, needed - circuit.r_loop);
}

}  // namespace satloss
