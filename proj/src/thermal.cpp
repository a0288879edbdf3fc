#include "satloss/thermal.hpp"

#include <algorithm>
#include <cmath>

namespace satloss {

void ThermalModel::validate() const {
    if (nodes.empty()) throw ValidationError("thermal.nodes must be nonempty");
    if (!(t_ambient > 0.0)) throw ValidationError("thermal.t_ambient must be > 0");
    for (const auto& node : nodes) {
        if (node.name.empty()) throw ValidationError("thermal node name must be nonempty");
        for (const auto& s : node.stages) {
            if (!(s.r > 0.0)) throw ValidationError("thermal stage r must be > 0");
            if (!(s.c > 0.0)) throw ValidationError("thermal stage c must be > 0");
        }
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            if (nodes[i].name == nodes[j].name) {
                throw ValidationError("duplicate thermal node name '" + nodes[i].name + "'");
            }
        }
    }
    if (static_r.has_value()) {
        if (static_r->size() != nodes.size()) {
            throw ValidationError("thermal.static_r must have one row per node");
        }
        const std::size_t cols = static_r->front().size();
        if (cols == 0) throw ValidationError("thermal.static_r rows must be nonempty");
        for (std::size_t i = 0; i < static_r->size(); ++i) {
            const auto& row = (*static_r)[i];
            if (row.size() != cols) throw ValidationError("thermal.static_r must be rectangular");
            for (double r : row) {
                if (!(r >= 0.0) || !std::isfinite(r)) {
                    throw ValidationError("thermal.static_r entries must be finite and >= 0");
                }
            }
            // Dynamic and static descriptions of the device-driven column
            // must agree where both exist.
            if (!nodes[i].stages.empty()) {
                double sum = 0.0;
                for (const auto& s : nodes[i].stages) sum += s.r;
                const double ref = row[0];
                if (std::abs(sum - ref) > 1e-9 * std::max(1.0, std::abs(ref))) {
                    throw ValidationError("thermal node '" + nodes[i].name +
                                          "': stage resistances do not sum to static_r[...][0]");
                }
            }
        }
    }
}

std::size_t ThermalModel::node_index(const std::string& name) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].name == name) return i;
    }
    throw UnknownNodeError("unknown thermal node '" + name + "'");
}

std::size_t ThermalModel::source_count() const {
    if (static_r.has_value() && !static_r->empty()) return static_r->front().size();
    return 1;
}

double ThermalModel::static_resistance(std::size_t node, std::size_t source) const {
    if (node >= nodes.size()) throw UnknownNodeError("node index out of range");
    if (static_r.has_value()) {
        if (source >= static_r->front().size()) {
            throw DimensionMismatchError("source index out of range");
        }
        return (*static_r)[node][source];
    }
    if (source != 0) throw DimensionMismatchError("model has a single heat source");
    double sum = 0.0;
    for (const auto& s : nodes[node].stages) sum += s.r;
    return sum;
}

double ThermalModel::max_tau() const {
    double m = 0.0;
    for (const auto& node : nodes) {
        for (const auto& s : node.stages) m = std::max(m, s.tau());
    }
    return m;
}

ThermalModel ThermalModel::single_node(double r, double tau, double t_ambient,
                                       std::string name) {
    ThermalModel model;
    model.nodes.push_back({std::move(name), {FosterStage{r, tau / r}}});
    model.t_ambient = t_ambient;
    return model;
}

ThermalState ThermalState::zero(const ThermalModel& model) {
    ThermalState state;
    state.rise.reserve(model.nodes.size());
    for (const auto& node : model.nodes) {
        state.rise.emplace_back(node.stages.size(), 0.0);
    }
    return state;
}

std::vector<double> steady_state_temp(const ThermalModel& model, std::span<const double> p) {
    if (p.size() != model.source_count()) {
        throw DimensionMismatchError("power vector length does not match source count");
    }
    for (double pw : p) {
        if (!(pw >= 0.0)) throw ValidationError("powers must be >= 0");
    }
    std::vector<double> temps(model.nodes.size(), model.t_ambient);
    for (std::size_t i = 0; i < model.nodes.size(); ++i) {
        for (std::size_t j = 0; j < p.size(); ++j) {
            temps[i] += model.static_resistance(i, j) * p[j];
        }
    }
    return temps;
}

ThermalState step(const ThermalModel& model, const ThermalState& state, double p, double dt) {
    if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
    if (!(p >= 0.0)) throw ValidationError("power must be >= 0");
    if (state.rise.size() != model.nodes.size()) {
        throw DimensionMismatchError("state does not match model node count");
    }
    ThermalState next = state;
    for (std::size_t i = 0; i < model.nodes.size(); ++i) {
        const auto& stages = model.nodes[i].stages;
        if (next.rise[i].size() != stages.size()) {
            throw DimensionMismatchError("state does not match stage count of node " +
                                         model.nodes[i].name);
        }
        for (std::size_t s = 0; s < stages.size(); ++s) {
            const double decay = std::exp(-dt / stages[s].tau());
            next.rise[i][s] = next.rise[i][s] * decay + p * stages[s].r * (1.0 - decay);
        }
    }
    return next;
}

double zth(const ThermalModel& model, const std::string& node, double t) {
    if (!(t >= 0.0)) throw ValidationError("t must be >= 0");
    const std::size_t i = model.node_index(node);
    double z = 0.0;
    for (const auto& s : model.nodes[i].stages) {
        z += s.r * (1.0 - std::exp(-t / s.tau()));
    }
    return z;
}

double node_temperature(const ThermalModel& model, const ThermalState& state,
                        std::size_t node) {
    if (node >= model.nodes.size()) throw UnknownNodeError("node index out of range");
    double t = model.t_ambient;
    for (double x : state.rise[node]) t += x;
    return t;
}

double node_temperature(const ThermalModel& model, const ThermalState& state,
                        const std::string& node) {
    return node_temperature(model, state, model.node_index(node));
}

}  // namespace satloss
