#include "satloss/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace satloss {

namespace {

using nlohmann::json;

std::size_t line_of_byte(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

const json& require_object(const json& j, const std::string& name) {
    if (!j.is_object()) throw ParseError("section '" + name + "' must be an object");
    return j;
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& section) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) {
            throw ParseError("unknown key '" + key + "' in section '" + section + "'");
        }
    }
}

double get_number(const json& obj, const std::string& section, const std::string& key) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw ParseError("missing required key '" + key + "' in section '" + section + "'");
    if (!it->is_number()) throw ParseError("key '" + section + "." + key + "' must be a number");
    return it->get<double>();
}

double get_number_or(const json& obj, const std::string& section, const std::string& key,
                     double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw ParseError("key '" + section + "." + key + "' must be a number");
    return obj[key].get<double>();
}

std::string get_string(const json& obj, const std::string& section, const std::string& key) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw ParseError("missing required key '" + key + "' in section '" + section + "'");
    if (!it->is_string()) throw ParseError("key '" + section + "." + key + "' must be a string");
    return it->get<std::string>();
}

DeviceParams parse_device(const json& j) {
    require_object(j, "device");
    reject_unknown_keys(j, {"c_ox", "w_cell", "l_ch", "mu0", "t_ref_c", "mobility_exp",
                            "vth0", "vth_tempco", "lambda"},
                        "device");
    DeviceParams p;
    p.c_ox = get_number(j, "device", "c_ox");
    p.w_cell = get_number(j, "device", "w_cell");
    p.l_ch = get_number(j, "device", "l_ch");
    p.mu0 = get_number(j, "device", "mu0");
    p.t_ref = celsius_to_kelvin(get_number_or(j, "device", "t_ref_c", 25.0));
    p.mobility_exp = get_number_or(j, "device", "mobility_exp", 2.2);
    p.vth0 = get_number(j, "device", "vth0");
    p.vth_tempco = get_number_or(j, "device", "vth_tempco", 8e-3);
    p.lambda = get_number_or(j, "device", "lambda", 0.0);
    p.validate();
    return p;
}

ThermalModel parse_thermal(const json& j) {
    require_object(j, "thermal");
    reject_unknown_keys(j, {"t_ambient_c", "nodes", "static_r"}, "thermal");
    ThermalModel model;
    model.t_ambient = celsius_to_kelvin(get_number_or(j, "thermal", "t_ambient_c", 25.0));
    const auto nodes_it = j.find("nodes");
    if (nodes_it == j.end() || !nodes_it->is_array() || nodes_it->empty()) {
        throw ParseError("'thermal.nodes' must be a nonempty array");
    }
    for (const auto& nj : *nodes_it) {
        require_object(nj, "thermal.nodes[]");
        reject_unknown_keys(nj, {"name", "stages"}, "thermal.nodes[]");
        ThermalModel::Node node;
        node.name = get_string(nj, "thermal.nodes[]", "name");
        if (nj.contains("stages")) {
            if (!nj["stages"].is_array()) throw ParseError("'stages' must be an array");
            for (const auto& sj : nj["stages"]) {
                require_object(sj, "thermal stage");
                reject_unknown_keys(sj, {"r", "c"}, "thermal stage");
                node.stages.push_back(
                    {get_number(sj, "stage", "r"), get_number(sj, "stage", "c")});
            }
        }
        model.nodes.push_back(std::move(node));
    }
    if (j.contains("static_r")) {
        if (!j["static_r"].is_array()) throw ParseError("'thermal.static_r' must be an array of rows");
        std::vector<std::vector<double>> matrix;
        for (const auto& row : j["static_r"]) {
            if (!row.is_array()) throw ParseError("'thermal.static_r' rows must be arrays");
            std::vector<double> r;
            for (const auto& v : row) {
                if (!v.is_number()) throw ParseError("'thermal.static_r' entries must be numbers");
                r.push_back(v.get<double>());
            }
            matrix.push_back(std::move(r));
        }
        model.static_r = std::move(matrix);
    }
    model.validate();
    return model;
}

DriveMode parse_drive(const json& j) {
    require_object(j, "drive");
    const std::string mode = get_string(j, "drive", "mode");
    if (mode == "voltage") {
        reject_unknown_keys(j, {"mode", "v_gs", "v_ds"}, "drive");
        VoltageMode vm;
        vm.v_gs = get_number(j, "drive", "v_gs");
        vm.v_ds = get_number(j, "drive", "v_ds");
        if (vm.v_ds < 0.0) throw ValidationError("drive.v_ds must be >= 0");
        return vm;
    }
    if (mode == "current") {
        reject_unknown_keys(j, {"mode", "v_gs", "i_set", "v_compliance"}, "drive");
        CurrentMode cm;
        cm.v_gs = get_number(j, "drive", "v_gs");
        cm.i_set = get_number(j, "drive", "i_set");
        cm.v_compliance = get_number(j, "drive", "v_compliance");
        if (cm.i_set < 0.0) throw ValidationError("drive.i_set must be >= 0");
        if (!(cm.v_compliance > 0.0)) throw ValidationError("drive.v_compliance must be > 0");
        return cm;
    }
    throw ParseError("drive.mode must be 'voltage' or 'current'");
}

SimConfig parse_sim(const json* j, const ThermalModel& thermal) {
    SimConfig cfg;
    cfg.t_ambient = thermal.t_ambient;
    cfg.junction_node = thermal.nodes.front().name;
    cfg.runaway_temp = celsius_to_kelvin(175.0);
    if (j != nullptr) {
        require_object(*j, "sim");
        reject_unknown_keys(*j, {"dt", "t_end", "runaway_temp_c", "junction_node"}, "sim");
        cfg.dt = get_number_or(*j, "sim", "dt", cfg.dt);
        cfg.t_end = get_number_or(*j, "sim", "t_end", cfg.t_end);
        cfg.runaway_temp =
            celsius_to_kelvin(get_number_or(*j, "sim", "runaway_temp_c", 175.0));
        if (j->contains("junction_node")) {
            cfg.junction_node = get_string(*j, "sim", "junction_node");
        }
    }
    cfg.validate();
    std::ignore = thermal.node_index(cfg.junction_node);  // must exist
    return cfg;
}

GateLoopCircuit parse_gate_loop(const json& j) {
    require_object(j, "gate_loop");
    reject_unknown_keys(j, {"l_cable", "r_ext", "r_loop", "c_eff"}, "gate_loop");
    GateLoopCircuit c;
    c.l_cable = get_number(j, "gate_loop", "l_cable");
    c.c_eff = get_number(j, "gate_loop", "c_eff");
    c.r_ext = get_number_or(j, "gate_loop", "r_ext", 0.0);
    c.r_loop = get_number_or(j, "gate_loop", "r_loop", 0.0);
    c.validate();
    return c;
}

GanReverseParams parse_gan(const json& j) {
    require_object(j, "gan");
    reject_unknown_keys(j, {"v_offset0", "offset_tempco", "r_rev0", "r_rev_tempco", "t_ref_c"},
                        "gan");
    GanReverseParams p;
    p.v_offset0 = get_number(j, "gan", "v_offset0");
    p.r_rev0 = get_number(j, "gan", "r_rev0");
    p.offset_tempco = get_number_or(j, "gan", "offset_tempco", 2e-3);
    p.r_rev_tempco = get_number_or(j, "gan", "r_rev_tempco", 4e-3);
    p.t_ref = celsius_to_kelvin(get_number_or(j, "gan", "t_ref_c", 25.0));
    p.validate();
    return p;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("config line " + std::to_string(line_of_byte(text, e.byte)) + ": " +
                         e.what());
    }
    if (!root.is_object()) throw ParseError("config root must be a JSON object");
    reject_unknown_keys(root, {"device", "thermal", "drive", "sim", "gate_loop", "gan"},
                        "(root)");
    if (!root.contains("device")) throw ParseError("missing required section 'device'");
    if (!root.contains("thermal")) throw ParseError("missing required section 'thermal'");

    RunConfig cfg;
    cfg.device = parse_device(root["device"]);
    cfg.thermal = parse_thermal(root["thermal"]);
    if (root.contains("drive")) cfg.drive = parse_drive(root["drive"]);
    cfg.sim = parse_sim(root.contains("sim") ? &root["sim"] : nullptr, cfg.thermal);
    if (root.contains("gate_loop")) cfg.gate_loop = parse_gate_loop(root["gate_loop"]);
    if (root.contains("gan")) cfg.gan = parse_gan(root["gan"]);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string dump_config(const RunConfig& config) {
    json root;
    json& dev = root["device"];
    dev["c_ox"] = config.device.c_ox;
    dev["w_cell"] = config.device.w_cell;
    dev["l_ch"] = config.device.l_ch;
    dev["mu0"] = config.device.mu0;
    dev["t_ref_c"] = kelvin_to_celsius(config.device.t_ref);
    dev["mobility_exp"] = config.device.mobility_exp;
    dev["vth0"] = config.device.vth0;
    dev["vth_tempco"] = config.device.vth_tempco;
    dev["lambda"] = config.device.lambda;

    json& th = root["thermal"];
    th["t_ambient_c"] = kelvin_to_celsius(config.thermal.t_ambient);
    th["nodes"] = json::array();
    for (const auto& node : config.thermal.nodes) {
        json nj;
        nj["name"] = node.name;
        nj["stages"] = json::array();
        for (const auto& s : node.stages) {
            nj["stages"].push_back({{"r", s.r}, {"c", s.c}});
        }
        th["nodes"].push_back(std::move(nj));
    }
    if (config.thermal.static_r.has_value()) th["static_r"] = *config.thermal.static_r;

    if (config.drive.has_value()) {
        json& dj = root["drive"];
        if (const auto* vm = std::get_if<VoltageMode>(&*config.drive)) {
            dj["mode"] = "voltage";
            dj["v_gs"] = vm->v_gs;
            dj["v_ds"] = vm->v_ds;
        } else {
            const auto& cm = std::get<CurrentMode>(*config.drive);
            dj["mode"] = "current";
            dj["v_gs"] = cm.v_gs;
            dj["i_set"] = cm.i_set;
            dj["v_compliance"] = cm.v_compliance;
        }
    }

    json& sj = root["sim"];
    sj["dt"] = config.sim.dt;
    sj["t_end"] = config.sim.t_end;
    sj["runaway_temp_c"] = kelvin_to_celsius(config.sim.runaway_temp);
    sj["junction_node"] = config.sim.junction_node;

    if (config.gate_loop.has_value()) {
        json& gj = root["gate_loop"];
        gj["l_cable"] = config.gate_loop->l_cable;
        gj["c_eff"] = config.gate_loop->c_eff;
        gj["r_ext"] = config.gate_loop->r_ext;
        gj["r_loop"] = config.gate_loop->r_loop;
    }
    if (config.gan.has_value()) {
        json& gj = root["gan"];
        gj["v_offset0"] = config.gan->v_offset0;
        gj["offset_tempco"] = config.gan->offset_tempco;
        gj["r_rev0"] = config.gan->r_rev0;
        gj["r_rev_tempco"] = config.gan->r_rev_tempco;
        gj["t_ref_c"] = kelvin_to_celsius(config.gan->t_ref);
    }
    return root.dump(2) + "\n";
}

}  // namespace satloss
