#pragma once

#include <string>

#include "risbeam/geometry.hpp"
#include "risbeam/grid.hpp"
#include "risbeam/unitcell.hpp"
#include "risbeam/vec3.hpp"

namespace risbeam {

/// Wraps an angle in degrees into [0, 360).
double wrap_360(double deg);

/// Geodesic distance on the 360-degree circle, in [0, 180].
double circular_distance_deg(double a_deg, double b_deg);

/// Illuminating source as seen by the phase synthesis: either a point feed
/// above the surface or an incoming plane wave given by the unit vector from
/// the surface center toward the source.
class FeedSpec {
public:
    enum class Kind { NearField, FarField };

    static FeedSpec near_field(const Vec3& position_m);
    static FeedSpec far_field(const Vec3& toward_source);

    Kind kind() const { return kind_; }
    const Vec3& position() const { return position_; }        // NearField only
    const Vec3& source_direction() const { return direction_; }  // FarField only

private:
    FeedSpec(Kind k, Vec3 p, Vec3 d) : kind_(k), position_(p), direction_(d) {}
    Kind kind_;
    Vec3 position_;
    Vec3 direction_;
};

/// Desired reflected beam direction, unit vector with u_z >= 0.
class SteeringTarget {
public:
    explicit SteeringTarget(const Vec3& direction);
    static SteeringTarget from_angles(double theta_deg, double phi_deg = 0.0);

    const Vec3& direction() const { return u_; }
    double theta_deg() const;
    double phi_deg() const;

private:
    Vec3 u_;
};

/// Continuous ideal phase per element, wrapped to [0, 360).
struct PhaseMap {
    Grid2D<double> phase_deg;
    double frequency_hz = 0.0;
    double reference_phase_deg = 0.0;
};

/// One-bit surface configuration.
using BitMap = Grid2D<CellState>;

/// Text grid of '0'/'1' rows, row-major, '1' = ON, one row per line.
std::string bitmap_to_text(const BitMap& bits);
BitMap bitmap_from_text(std::string_view text);

/// Ideal per-element phase for the given feed and steering target:
///   near field:  wrap(deg(k*|r_ij - r_f| - k*(u0 . r_ij)) + dphi)
///   far field:   wrap(deg(-k*(s . r_ij) - k*(u0 . r_ij)) + dphi)
/// with s the unit vector toward the source (the constant k*R of the
/// receding-feed limit is absorbed into the reference phase).
PhaseMap ideal_phase_map(const ArrayGeometry& geom, const FeedSpec& feed,
                         const SteeringTarget& target, const FreqSpec& freq,
                         double reference_phase_deg = 0.0);

/// One-bit quantization: ON iff the circular distance to phase_on does not
/// exceed the distance to phase_off (ties select ON).
BitMap quantize_map(const PhaseMap& phases, double phase_on_deg, double phase_off_deg);

}  // namespace risbeam
