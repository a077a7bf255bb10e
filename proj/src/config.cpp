#include "risbeam/config.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace risbeam {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& key, const std::string& why) {
    throw ConfigError("config: " + key + ": " + why);
}

void check_known_keys(const ordered_json& obj, const std::string& prefix,
                      const std::set<std::string>& known) {
    for (const auto& [key, _] : obj.items())
        if (!known.count(key)) bad(prefix.empty() ? key : prefix + "." + key, "unknown key");
}

double get_number(const ordered_json& obj, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number()) bad(key, "expected a number");
    return v.get<double>();
}

int get_int(const ordered_json& obj, const std::string& key, int fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) bad(key, "expected an integer");
    return v.get<int>();
}

std::vector<double> get_number_or_list(const ordered_json& obj, const std::string& key,
                                       std::vector<double> fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (v.is_number()) return {v.get<double>()};
    if (v.is_array()) {
        if (v.empty()) bad(key, "list must not be empty");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) bad(key, "list entries must be numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }
    bad(key, "expected a number or a list of numbers");
}

}  // namespace

ScenarioConfig parse_config(std::string_view json_text, const std::string& base_dir) {
    ScenarioConfig cfg;

    // empty or whitespace-only document keeps the defaults
    bool blank = true;
    for (char c : json_text)
        if (c != ' ' && c != '\t' && c != '\r' && c != '\n') {
            blank = false;
            break;
        }
    ordered_json doc = ordered_json::object();
    if (!blank) {
        try {
            doc = ordered_json::parse(json_text);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config: invalid JSON: ") + e.what());
        }
        if (!doc.is_object()) throw ConfigError("config: top level must be a JSON object");
    }

    check_known_keys(doc, "",
                     {"geometry", "cell_model", "tx_horn", "rx_horn", "frequency_ghz",
                      "target_theta_deg", "pattern_frequency_ghz", "sweep_frequency_ghz",
                      "sweep_target_theta_deg", "reference_phase_deg", "reference_samples",
                      "element_factor_exponent", "grid", "output_dir"});

    if (doc.contains("geometry")) {
        const auto& g = doc.at("geometry");
        if (!g.is_object()) bad("geometry", "expected an object");
        check_known_keys(g, "geometry", {"rows", "cols", "pitch_mm"});
        cfg.geometry.rows = get_int(g, "rows", cfg.geometry.rows);
        cfg.geometry.cols = get_int(g, "cols", cfg.geometry.cols);
        cfg.geometry.pitch_mm = get_number(g, "pitch_mm", cfg.geometry.pitch_mm);
    }
    if (cfg.geometry.rows < 1) bad("geometry.rows", "must be >= 1");
    if (cfg.geometry.cols < 1) bad("geometry.cols", "must be >= 1");
    if (cfg.geometry.pitch_mm <= 0.0) bad("geometry.pitch_mm", "must be > 0");

    if (doc.contains("cell_model")) {
        const auto& c = doc.at("cell_model");
        if (!c.is_object()) bad("cell_model", "expected an object");
        check_known_keys(c, "cell_model", {"kind", "path"});
        const std::string kind = c.contains("kind") ? c.at("kind").get<std::string>() : "ideal";
        if (kind == "ideal") {
            cfg.cell_model.kind = ScenarioConfig::CellModel::Kind::Ideal;
            if (c.contains("path")) bad("cell_model.path", "not allowed for the ideal model");
        } else if (kind == "table") {
            cfg.cell_model.kind = ScenarioConfig::CellModel::Kind::Table;
            if (!c.contains("path")) bad("cell_model.path", "required for a table model");
            std::filesystem::path p = c.at("path").get<std::string>();
            if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
            cfg.cell_model.path = p.lexically_normal().string();
        } else {
            bad("cell_model.kind", "expected 'ideal' or 'table'");
        }
    }

    if (doc.contains("tx_horn")) {
        const auto& h = doc.at("tx_horn");
        if (!h.is_object()) bad("tx_horn", "expected an object");
        check_known_keys(h, "tx_horn", {"distance_m", "incidence_theta_deg", "gain_dbi"});
        cfg.tx_horn.distance_m = get_number(h, "distance_m", cfg.tx_horn.distance_m);
        cfg.tx_horn.incidence_theta_deg =
            get_number(h, "incidence_theta_deg", cfg.tx_horn.incidence_theta_deg);
        cfg.tx_horn.gain_dbi = get_number(h, "gain_dbi", cfg.tx_horn.gain_dbi);
    }
    if (cfg.tx_horn.distance_m <= 0.0) bad("tx_horn.distance_m", "must be > 0");
    if (cfg.tx_horn.incidence_theta_deg < 0.0 || cfg.tx_horn.incidence_theta_deg >= 90.0)
        bad("tx_horn.incidence_theta_deg", "must be in [0, 90)");
    if (cfg.tx_horn.gain_dbi < 3.02) bad("tx_horn.gain_dbi", "must be >= 3.02 (cos^q model)");

    if (doc.contains("rx_horn")) {
        const auto& h = doc.at("rx_horn");
        if (!h.is_object()) bad("rx_horn", "expected an object");
        check_known_keys(h, "rx_horn", {"distance_m", "theta_deg", "gain_dbi"});
        cfg.rx_horn.distance_m = get_number(h, "distance_m", cfg.rx_horn.distance_m);
        cfg.rx_horn.theta_deg = get_number(h, "theta_deg", cfg.rx_horn.theta_deg);
        cfg.rx_horn.gain_dbi = get_number(h, "gain_dbi", cfg.rx_horn.gain_dbi);
    }
    if (cfg.rx_horn.distance_m <= 0.0) bad("rx_horn.distance_m", "must be > 0");
    if (cfg.rx_horn.theta_deg <= -90.0 || cfg.rx_horn.theta_deg >= 90.0)
        bad("rx_horn.theta_deg", "must be in (-90, 90)");
    if (cfg.rx_horn.gain_dbi < 3.02) bad("rx_horn.gain_dbi", "must be >= 3.02 (cos^q model)");

    cfg.frequency_ghz = get_number_or_list(doc, "frequency_ghz", cfg.frequency_ghz);
    for (double f : cfg.frequency_ghz)
        if (f <= 0.0) bad("frequency_ghz", "frequencies must be > 0");

    cfg.target_theta_deg = get_number_or_list(doc, "target_theta_deg", cfg.target_theta_deg);
    for (double t : cfg.target_theta_deg)
        if (t <= -90.0 || t >= 90.0) bad("target_theta_deg", "targets must be in (-90, 90)");

    cfg.pattern_frequency_ghz =
        get_number(doc, "pattern_frequency_ghz", cfg.pattern_frequency_ghz);
    if (cfg.pattern_frequency_ghz <= 0.0) bad("pattern_frequency_ghz", "must be > 0");

    cfg.sweep_frequency_ghz =
        get_number_or_list(doc, "sweep_frequency_ghz", cfg.sweep_frequency_ghz);
    for (double f : cfg.sweep_frequency_ghz)
        if (f <= 0.0) bad("sweep_frequency_ghz", "frequencies must be > 0");

    cfg.sweep_target_theta_deg =
        get_number_or_list(doc, "sweep_target_theta_deg", cfg.sweep_target_theta_deg);
    for (double t : cfg.sweep_target_theta_deg)
        if (t <= -90.0 || t >= 90.0) bad("sweep_target_theta_deg", "targets must be in (-90, 90)");

    if (doc.contains("reference_phase_deg")) {
        const auto& v = doc.at("reference_phase_deg");
        if (v.is_string()) {
            if (v.get<std::string>() != "optimize")
                bad("reference_phase_deg", "expected a number or \"optimize\"");
            cfg.optimize_reference = true;
            cfg.reference_phase_deg = 0.0;
        } else if (v.is_number()) {
            cfg.reference_phase_deg = v.get<double>();
        } else {
            bad("reference_phase_deg", "expected a number or \"optimize\"");
        }
    }

    cfg.reference_samples = get_int(doc, "reference_samples", cfg.reference_samples);
    if (cfg.reference_samples < 2) bad("reference_samples", "must be >= 2");

    cfg.element_factor_exponent =
        get_number(doc, "element_factor_exponent", cfg.element_factor_exponent);
    if (cfg.element_factor_exponent < 0.0) bad("element_factor_exponent", "must be >= 0");

    if (doc.contains("grid")) {
        const auto& g = doc.at("grid");
        if (!g.is_object()) bad("grid", "expected an object");
        check_known_keys(g, "grid", {"theta_step_deg", "phi_step_deg"});
        cfg.grid.theta_step_deg = get_number(g, "theta_step_deg", cfg.grid.theta_step_deg);
        cfg.grid.phi_step_deg = get_number(g, "phi_step_deg", cfg.grid.phi_step_deg);
    }
    if (cfg.grid.theta_step_deg <= 0.0) bad("grid.theta_step_deg", "must be > 0");
    if (cfg.grid.phi_step_deg <= 0.0) bad("grid.phi_step_deg", "must be > 0");
    {
        const double nt = 90.0 / cfg.grid.theta_step_deg;
        const double np = 360.0 / cfg.grid.phi_step_deg;
        if (std::abs(nt - std::lround(nt)) > 1e-9) bad("grid.theta_step_deg", "must divide 90");
        if (std::abs(np - std::lround(np)) > 1e-9) bad("grid.phi_step_deg", "must divide 360");
    }

    if (doc.contains("output_dir")) {
        if (!doc.at("output_dir").is_string()) bad("output_dir", "expected a string");
        cfg.output_dir = doc.at("output_dir").get<std::string>();
        if (cfg.output_dir.empty()) bad("output_dir", "must not be empty");
    }

    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string base =
        std::filesystem::path(path).has_parent_path()
            ? std::filesystem::path(path).parent_path().string()
            : std::string(".");
    ScenarioConfig cfg = parse_config(buf.str(), base);
    if (cfg.cell_model.kind == ScenarioConfig::CellModel::Kind::Table &&
        !std::filesystem::exists(cfg.cell_model.path))
        throw ConfigError("config: cell_model.path: file not found: " + cfg.cell_model.path);
    return cfg;
}

std::string serialize_config(const ScenarioConfig& cfg) {
    ordered_json doc;
    doc["geometry"] = {{"rows", cfg.geometry.rows},
                       {"cols", cfg.geometry.cols},
                       {"pitch_mm", cfg.geometry.pitch_mm}};
    if (cfg.cell_model.kind == ScenarioConfig::CellModel::Kind::Ideal) {
        doc["cell_model"] = {{"kind", "ideal"}};
    } else {
        doc["cell_model"] = {{"kind", "table"}, {"path", cfg.cell_model.path}};
    }
    doc["tx_horn"] = {{"distance_m", cfg.tx_horn.distance_m},
                      {"incidence_theta_deg", cfg.tx_horn.incidence_theta_deg},
                      {"gain_dbi", cfg.tx_horn.gain_dbi}};
    doc["rx_horn"] = {{"distance_m", cfg.rx_horn.distance_m},
                      {"theta_deg", cfg.rx_horn.theta_deg},
                      {"gain_dbi", cfg.rx_horn.gain_dbi}};
    doc["frequency_ghz"] = cfg.frequency_ghz;
    doc["target_theta_deg"] = cfg.target_theta_deg;
    doc["pattern_frequency_ghz"] = cfg.pattern_frequency_ghz;
    doc["sweep_frequency_ghz"] = cfg.sweep_frequency_ghz;
    doc["sweep_target_theta_deg"] = cfg.sweep_target_theta_deg;
    if (cfg.optimize_reference)
        doc["reference_phase_deg"] = "optimize";
    else
        doc["reference_phase_deg"] = cfg.reference_phase_deg;
    doc["reference_samples"] = cfg.reference_samples;
    doc["element_factor_exponent"] = cfg.element_factor_exponent;
    doc["grid"] = {{"theta_step_deg", cfg.grid.theta_step_deg},
                   {"phi_step_deg", cfg.grid.phi_step_deg}};
    doc["output_dir"] = cfg.output_dir;
    return doc.dump(2) + "\n";
}

std::string config_hash(const ScenarioConfig& cfg) {
    const std::string canon = serialize_config(cfg);
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
    for (unsigned char c : canon) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace risbeam
