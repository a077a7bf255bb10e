#include "risbeam/geometry.hpp"

#include <stdexcept>

namespace risbeam {

double wavelength(double frequency_hz) {
    if (frequency_hz <= 0.0) throw std::invalid_argument("wavelength: frequency must be > 0");
    return kSpeedOfLight / frequency_hz;
}

double wavenumber(double frequency_hz) {
    if (frequency_hz <= 0.0) throw std::invalid_argument("wavenumber: frequency must be > 0");
    return 2.0 * kPi * frequency_hz / kSpeedOfLight;
}

double far_field_distance(double aperture_diagonal_m, double frequency_hz) {
    if (aperture_diagonal_m <= 0.0)
        throw std::invalid_argument("far_field_distance: aperture diagonal must be > 0");
    return 2.0 * aperture_diagonal_m * aperture_diagonal_m / wavelength(frequency_hz);
}

FreqSpec::FreqSpec(double frequency_hz) : hz_(frequency_hz) {
    if (frequency_hz <= 0.0) throw std::invalid_argument("FreqSpec: frequency must be > 0");
}

ArrayGeometry::ArrayGeometry(int rows, int cols, double pitch_m)
    : rows_(rows), cols_(cols), pitch_(pitch_m) {
    if (rows < 1) throw std::invalid_argument("ArrayGeometry: rows must be >= 1");
    if (cols < 1) throw std::invalid_argument("ArrayGeometry: cols must be >= 1");
    if (pitch_m <= 0.0) throw std::invalid_argument("ArrayGeometry: pitch must be > 0");
}

Vec3 ArrayGeometry::position(int i, int j) const {
    if (i < 1 || i > rows_ || j < 1 || j > cols_)
        throw std::out_of_range("ArrayGeometry::position: index outside grid");
    // Centered lattice: the centroid of all elements is the origin.
    const double x = (i - (rows_ + 1) * 0.5) * pitch_;
    const double y = (j - (cols_ + 1) * 0.5) * pitch_;
    return {x, y, 0.0};
}

std::vector<Vec3> ArrayGeometry::element_positions() const {
    std::vector<Vec3> out;
    out.reserve(static_cast<std::size_t>(rows_) * cols_);
    for (int i = 1; i <= rows_; ++i)
        for (int j = 1; j <= cols_; ++j) out.push_back(position(i, j));
    return out;
}

double ArrayGeometry::aperture_diagonal() const {
    return std::sqrt(extent_x() * extent_x() + extent_y() * extent_y());
}

}  // namespace risbeam
