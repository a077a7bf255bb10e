#pragma once

#include <vector>

#include "risbeam/vec3.hpp"

namespace risbeam {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s, exact
inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double deg2rad(double d) { return d * (kPi / 180.0); }
inline constexpr double rad2deg(double r) { return r * (180.0 / kPi); }

/// Free-space wavelength in meters. Rejects f <= 0.
double wavelength(double frequency_hz);

/// Free-space wavenumber 2*pi*f/c in rad/m. Rejects f <= 0.
double wavenumber(double frequency_hz);

/// Fraunhofer distance 2*D^2/lambda for an aperture of diagonal D.
double far_field_distance(double aperture_diagonal_m, double frequency_hz);

/// A single frequency with derived wavelength/wavenumber.
class FreqSpec {
public:
    explicit FreqSpec(double frequency_hz);

    double hz() const { return hz_; }
    double ghz() const { return hz_ * 1e-9; }
    double wavelength() const { return kSpeedOfLight / hz_; }
    double wavenumber() const { return 2.0 * kPi * hz_ / kSpeedOfLight; }

private:
    double hz_;
};

/// Regular rows x cols element lattice in the z = 0 plane, centered on the
/// origin, surface normal +z. Element (i, j) is 1-based with i the row index
/// along +x and j the column index along +y.
class ArrayGeometry {
public:
    ArrayGeometry(int rows, int cols, double pitch_m);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double pitch() const { return pitch_; }

    /// Position of element (i, j), 1-based indices.
    Vec3 position(int i, int j) const;

    /// All element positions in row-major order (i outer, j inner).
    std::vector<Vec3> element_positions() const;

    /// Physical aperture extent rows*pitch x cols*pitch.
    double extent_x() const { return rows_ * pitch_; }
    double extent_y() const { return cols_ * pitch_; }
    double aperture_diagonal() const;

private:
    int rows_;
    int cols_;
    double pitch_;
};

}  // namespace risbeam
