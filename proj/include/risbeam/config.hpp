#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace risbeam {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scenario description, strict-schema JSON. Every field has a default that
/// reproduces the reference measurement setup: 20x20 surface at 3.85 mm
/// pitch, Tx horn 0.2 m away at 30 deg incidence, Rx horn 0.3 m at 0 deg,
/// 27.5 GHz, broadside target. An empty document yields exactly that.
struct ScenarioConfig {
    struct Geometry {
        int rows = 20;
        int cols = 20;
        double pitch_mm = 3.85;
        bool operator==(const Geometry&) const = default;
    } geometry;

    struct CellModel {
        enum class Kind { Ideal, Table };
        Kind kind = Kind::Ideal;
        std::string path;  // table CSV, resolved relative to the config file
        bool operator==(const CellModel&) const = default;
    } cell_model;

    struct TxHorn {
        double distance_m = 0.2;
        double incidence_theta_deg = 30.0;  // tilt toward -x
        double gain_dbi = 20.0;
        bool operator==(const TxHorn&) const = default;
    } tx_horn;

    struct RxHorn {
        double distance_m = 0.3;
        double theta_deg = 0.0;  // signed, +x side positive
        double gain_dbi = 20.0;
        bool operator==(const RxHorn&) const = default;
    } rx_horn;

    std::vector<double> frequency_ghz{27.5};
    std::vector<double> target_theta_deg{0.0};
    double pattern_frequency_ghz = 27.5;  // synthesis frequency for `contrast`

    // sweep subcommand inputs; defaults reproduce the reference sweeps
    std::vector<double> sweep_frequency_ghz{22.5, 23.5, 24.5, 25.5, 26.5, 27.5, 28.5, 29.5};
    std::vector<double> sweep_target_theta_deg{0.0, 10.0, 20.0, 30.0, 40.0, 50.0};

    double reference_phase_deg = 0.0;
    bool optimize_reference = false;  // reference_phase_deg = "optimize"
    int reference_samples = 64;

    double element_factor_exponent = 1.0;

    struct Grid {
        double theta_step_deg = 0.5;
        double phi_step_deg = 1.0;
        bool operator==(const Grid&) const = default;
    } grid;

    std::string output_dir = "out";

    bool operator==(const ScenarioConfig&) const = default;
};

/// Parses and validates a config document. Unknown keys are rejected with
/// their full key path; range violations name the offending key. Empty or
/// whitespace-only text yields the defaults. `base_dir` anchors relative
/// table paths.
ScenarioConfig parse_config(std::string_view json_text, const std::string& base_dir = ".");

/// Loads from a file; referenced table files must exist.
ScenarioConfig load_config(const std::string& path);

/// Canonical JSON serialization; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& cfg);

/// FNV-1a 64-bit hash of the canonical serialization, 16 hex chars.
std::string config_hash(const ScenarioConfig& cfg);

}  // namespace risbeam
