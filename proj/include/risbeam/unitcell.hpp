#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace risbeam {

/// Switch state of one element. On = PIN diode conducting.
enum class CellState { On, Off };

const char* to_token(CellState s);  // "ON" / "OFF"

/// One table row: reflection of one state at one (frequency, incidence angle).
struct CellSample {
    double freq_hz = 0.0;
    CellState state = CellState::On;
    double incidence_deg = 0.0;
    double mag_db = 0.0;    // <= 0
    double phase_deg = 0.0; // as stored, wrapped
};

/// Reflection coefficient query result. angle_clamped is set when the
/// requested incidence angle fell outside the tabulated span and the nearest
/// tabulated angle was used instead.
struct ReflectionValue {
    std::complex<double> gamma;
    bool angle_clamped = false;
};

struct PhasePair {
    double on_deg = 0.0;   // [0, 360)
    double off_deg = 0.0;  // [0, 360)
};

/// Result of the operating-band search. Not finding a band is a valid
/// outcome, not an error.
struct BandReport {
    bool found = false;
    double f_low_hz = 0.0;
    double f_high_hz = 0.0;
    double fractional = 0.0;  // 2*(fh-fl)/(fh+fl)
};

/// Raised by the CSV loader with a 1-based line number in the message.
class CellTableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Complex reflection coefficient of one unit cell per switch state, either
/// as an idealized two-state model (fixed 180 deg offset, angle independent)
/// or as a sampled table interpolated in frequency and incidence angle.
class UnitCellModel {
public:
    /// Ideal element: |gamma| = magnitude per state, phase_off = phase_on + 180.
    static UnitCellModel ideal(double phase_on_deg = 0.0, double magnitude_on = 1.0,
                               double magnitude_off = 1.0);

    static UnitCellModel from_samples(std::vector<CellSample> samples);

    /// Parses the CSV format: header exactly
    /// "freq_ghz,state,incidence_deg,mag_db,phase_deg", '#' comment lines,
    /// state tokens exactly ON/OFF, frequencies in GHz.
    static UnitCellModel from_csv(std::string_view text);
    static UnitCellModel from_csv_file(const std::string& path);

    /// Serializes the sample set back to CSV (table models only).
    std::string to_csv() const;

    bool is_ideal() const { return ideal_; }
    const std::vector<CellSample>& samples() const { return samples_; }

    /// In-band query span [f_min, f_max]; unbounded for ideal models.
    std::pair<double, double> frequency_span() const;

    /// Gamma for one state. Frequency outside the table span throws
    /// std::out_of_range; incidence angle outside the tabulated angles clamps.
    ReflectionValue reflection(CellState state, double frequency_hz,
                               double incidence_deg = 0.0) const;

    /// (phase_on, phase_off) in degrees at normal incidence, each in [0, 360).
    PhasePair phase_states(double frequency_hz) const;

    /// Widest contiguous frequency interval where the circular ON/OFF phase
    /// difference stays within 180 +/- phase_tolerance_deg and both state
    /// magnitudes stay at or above magnitude_floor_db (normal incidence).
    BandReport operating_band(double phase_tolerance_deg = 20.0,
                              double magnitude_floor_db = -2.8) const;

private:
    UnitCellModel() = default;

    struct Series {  // one (state, angle) curve
        double angle_deg = 0.0;
        std::vector<double> freq_hz;
        std::vector<double> mag_db;
        std::vector<double> phase_unwrapped_deg;
    };

    struct StateTable {
        std::vector<Series> by_angle;  // sorted by angle
    };

    const StateTable& table(CellState s) const { return s == CellState::On ? on_ : off_; }
    static void interpolate(const Series& s, double f_hz, double& mag_db, double& phase_deg);
    bool band_criteria_met(double f_hz, double tol_deg, double floor_db) const;

    bool ideal_ = true;
    double ideal_phase_on_deg_ = 0.0;
    double ideal_mag_on_ = 1.0;
    double ideal_mag_off_ = 1.0;
    std::vector<CellSample> samples_;  // validated, sorted (state, angle, freq)
    StateTable on_;
    StateTable off_;
};

}  // namespace risbeam
