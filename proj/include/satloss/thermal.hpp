#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "satloss/errors.hpp"

namespace satloss {

/// One parallel RC pair of a Foster network.
struct FosterStage {
    double r = 0.0;  ///< thermal resistance (K/W)
    double c = 0.0;  ///< thermal capacitance (J/K)

    [[nodiscard]] double tau() const { return r * c; }
};

/// Linear thermal model of the monitored nodes.
///
/// Each node carries a Foster ladder driven by the device power (the dynamic
/// model) and optionally a row of the static resistance matrix
/// static_r[node][source] (K/W). Cross-coupling between heat sources exists
/// only in the static matrix; the dynamic model is single-source. When both
/// are given, the stage resistances of a node must sum to its static entry
/// for source 0.
struct ThermalModel {
    struct Node {
        std::string name;
        std::vector<FosterStage> stages;
    };

    std::vector<Node> nodes;
    std::optional<std::vector<std::vector<double>>> static_r;
    double t_ambient = 298.15;  ///< K

    void validate() const;

    /// Index of a named node; throws UnknownNodeError.
    [[nodiscard]] std::size_t node_index(const std::string& name) const;

    /// Number of heat sources of the static model (1 when derived from stages).
    [[nodiscard]] std::size_t source_count() const;

    /// Steady-state resistance of a node towards one source (K/W). Taken from
    /// static_r when present, otherwise the node's stage sum (source 0 only).
    [[nodiscard]] double static_resistance(std::size_t node, std::size_t source = 0) const;

    /// Largest stage time constant over all nodes (s); 0 if no stages.
    [[nodiscard]] double max_tau() const;

    /// Single node "T_j" with one RC stage: resistance r, time constant tau.
    static ThermalModel single_node(double r, double tau, double t_ambient,
                                    std::string name = "T_j");
};

/// Per-node, per-stage temperature rises above ambient (K). An explicit
/// value: callers own it, pass it in and get updated copies back.
struct ThermalState {
    std::vector<std::vector<double>> rise;

    /// All-zero state (everything at ambient).
    static ThermalState zero(const ThermalModel& model);
};

/// Steady-state node temperatures (K) for source powers p (W):
/// T_i = t_ambient + sum_j static_r[i][j] * p_j.
std::vector<double> steady_state_temp(const ThermalModel& model, std::span<const double> p);

/// Advances every stage by dt seconds under constant device power p:
/// x <- x * exp(-dt/tau) + p * r * (1 - exp(-dt/tau)).
/// Exact for power constant over the interval, unconditionally stable.
ThermalState step(const ThermalModel& model, const ThermalState& state, double p, double dt);

/// Step-response thermal impedance of a node at time t:
/// sum_i r_i * (1 - exp(-t/tau_i)).
double zth(const ThermalModel& model, const std::string& node, double t);

/// Current temperature of a node (K): ambient plus its stage rises.
double node_temperature(const ThermalModel& model, const ThermalState& state,
                        const std::string& node);

/// Same, by node index.
double node_temperature(const ThermalModel& model, const ThermalState& state,
                        std::size_t node);

}  // namespace satloss
