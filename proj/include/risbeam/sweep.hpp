#pragma once

#include <optional>
#include <string>
#include <vector>

#include "risbeam/pattern.hpp"

namespace risbeam {

/// Fixed measurement setup: surface, feed/probe horns and evaluation options.
/// The Tx horn doubles as the synthesis feed (near-field spherical wave).
struct BeamScenario {
    ArrayGeometry geom;
    HornSpec tx;
    HornSpec rx;
    UnitCellModel model;
    double element_exponent = 1.0;
    PatternGrid grid{};
    double reference_phase_deg = 0.0;
    bool optimize_reference = false;
    int reference_samples = 64;
};

struct BeamResult {
    double reference_phase_deg = 0.0;
    BitMap bits;
    PatternMetrics metrics;
    Complex s21{};
    double steering_error_deg = 0.0;  // great-circle angle peak vs target
    int clamped_cells = 0;
};

/// Synthesize, quantize and evaluate one configuration.
BeamResult evaluate_beam(const BeamScenario& sc, const FreqSpec& freq,
                         const SteeringTarget& target);

/// Reference-phase sweep: quantizes the ideal map at dphi = n*360/samples and
/// keeps the candidate with the highest realized gain toward the target
/// (single-direction evaluation; a global-peak objective can lock onto a
/// mis-steered lobe). Ties resolve to the smallest dphi.
struct ReferenceOptimum {
    double reference_phase_deg = 0.0;
    BitMap bits;
    double gain_dbi = 0.0;  // toward the target
};
ReferenceOptimum optimize_reference_phase(const ArrayGeometry& geom, const HornSpec& feed,
                                          const SteeringTarget& target, const FreqSpec& freq,
                                          const UnitCellModel& model, int samples = 64,
                                          double element_exponent = 1.0, bool quantize = true);

/// One sweep row; `error` is set (and `result` empty) when that entry failed.
struct SweepEntry {
    double key = 0.0;  // frequency in Hz or target theta in degrees
    std::optional<BeamResult> result;
    std::string error;
};

/// Per-frequency synthesis and evaluation at a fixed steering target.
/// Entries fail independently; remaining frequencies still run.
std::vector<SweepEntry> frequency_sweep(const BeamScenario& sc, const SteeringTarget& target,
                                        const std::vector<double>& frequencies_hz);

/// Per-target synthesis and evaluation at a fixed frequency. Targets are
/// signed angles in the xz plane; the Rx horn follows each target at its
/// configured distance (set move_rx false to keep it fixed).
std::vector<SweepEntry> steering_sweep(const BeamScenario& sc, const FreqSpec& freq,
                                       const std::vector<double>& target_theta_deg,
                                       bool move_rx = true);

/// Target/horn placement in the xz measurement plane: positive angles on the
/// +x side, negative on the -x side.
Vec3 plane_direction(double theta_signed_deg);

}  // namespace risbeam
