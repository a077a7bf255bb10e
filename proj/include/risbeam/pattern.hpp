#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "risbeam/geometry.hpp"
#include "risbeam/grid.hpp"
#include "risbeam/synthesis.hpp"
#include "risbeam/unitcell.hpp"
#include "risbeam/vec3.hpp"

namespace risbeam {

using Complex = std::complex<double>;

/// Horn antenna with a cos^q power pattern about its boresight. The peak
/// gain of a cos^q pattern radiated over a hemisphere is 2*(q+1):
/// q = 49 reproduces a 20 dBi standard-gain horn.
class HornSpec {
public:
    HornSpec(const Vec3& position_m, const Vec3& boresight, double exponent_q);

    /// Horn at `position` aimed at the surface center, q from the declared gain.
    static HornSpec from_gain(const Vec3& position_m, double gain_dbi);
    static HornSpec from_gain(const Vec3& position_m, const Vec3& boresight, double gain_dbi);

    const Vec3& position() const { return position_; }
    const Vec3& boresight() const { return boresight_; }
    double exponent() const { return q_; }
    double peak_gain_dbi() const;

    /// Linear power gain at angle alpha off boresight; zero beyond 90 deg.
    double gain(double alpha_rad) const;

private:
    Vec3 position_;
    Vec3 boresight_;
    double q_;
};

/// Uniform direction grid over the z > 0 hemisphere: theta in [0, 90] deg
/// inclusive, phi in [0, 360) deg. Steps must divide their ranges exactly.
struct PatternGrid {
    double theta_step_deg = 0.5;
    double phi_step_deg = 1.0;

    int n_theta() const;  // 90/step + 1
    int n_phi() const;    // 360/step
    void validate() const;
};

/// Sampled complex far field over a PatternGrid with its radiated power
/// (hemisphere integral of |field|^2) and the absolute-gain scale factor
/// (pitch^4/lambda^2, zero when the samples have no absolute reference).
class Pattern {
public:
    Pattern(PatternGrid grid, FreqSpec freq, Grid2D<Complex> field, double gain_scale = 0.0);

    const PatternGrid& grid() const { return grid_; }
    const FreqSpec& freq() const { return freq_; }
    const Grid2D<Complex>& field() const { return field_; }
    double radiated_power() const { return radiated_power_; }
    double gain_scale() const { return gain_scale_; }

    double theta_deg(int it) const { return it * grid_.theta_step_deg; }
    double phi_deg(int ip) const { return ip * grid_.phi_step_deg; }
    Vec3 direction(int it, int ip) const;

    /// 4*pi*|field|^2 / radiated_power, linear.
    double directivity(int it, int ip) const;
    double directivity_dbi(int it, int ip) const;

private:
    PatternGrid grid_;
    FreqSpec freq_;
    Grid2D<Complex> field_;
    double radiated_power_;
    double gain_scale_;
};

struct PatternMetrics {
    double peak_theta_deg = 0.0;
    double peak_phi_deg = 0.0;
    double peak_directivity_dbi = 0.0;
    std::optional<double> peak_gain_dbi;     // only for absolute-scaled patterns
    std::optional<double> sll_db;            // empty: no sample outside the mask
    std::optional<double> hpbw_theta_deg;    // meridian principal cut
    std::optional<double> hpbw_phi_deg;      // orthogonal principal cut
};

/// Per-element incident amplitude and incidence angle.
struct Illumination {
    Grid2D<Complex> amplitude;
    Grid2D<double> incidence_deg;
};

/// Spherical-wave illumination from a horn feed:
/// amplitude = sqrt(gain(alpha)) * exp(-j*k*r) / r.
Illumination illuminate(const HornSpec& horn, const ArrayGeometry& geom, const FreqSpec& freq);

/// Plane-wave illumination arriving from the direction `toward_source`
/// (propagation -toward_source): unit amplitude, phase +k*(s . r_ij),
/// matching the far-field limit of the spherical feed.
Illumination plane_wave_illumination(const Vec3& toward_source, const ArrayGeometry& geom,
                                     const FreqSpec& freq);

/// Per-element reflection coefficients for a bit map under the given
/// illumination angles. clamped_cells counts incidence-angle clamps.
struct ReflectionGrid {
    Grid2D<Complex> gamma;
    int clamped_cells = 0;
};
ReflectionGrid reflection_grid(const UnitCellModel& model, const BitMap& bits,
                               const Illumination& illum, const FreqSpec& freq);

/// Coherent element sum over the hemisphere grid:
///   field(u) = ef(theta_u) * sum_ij illum_ij * gamma_ij * ef(theta_inc,ij)
///              * exp(+j*k*(u . r_ij))
/// with element factor ef(theta) = cos^qe(theta). The sum is evaluated
/// row-major with the per-direction row/column phase factorization; results
/// match the direct double sum to rounding.
Pattern scattered_pattern(const ArrayGeometry& geom, const Grid2D<Complex>& gamma,
                          const Illumination& illum, const FreqSpec& freq,
                          const PatternGrid& grid = {}, double element_exponent = 1.0);

/// Same summation for a single direction.
Complex scattered_field_at(const ArrayGeometry& geom, const Grid2D<Complex>& gamma,
                           const Illumination& illum, const FreqSpec& freq,
                           const Vec3& direction, double element_exponent = 1.0);

/// Grid-based metrics: peak, -3 dB widths of the two principal cuts
/// (interpolated between samples), and the side-lobe level outside a
/// spherical cap of radius 2x the peak-to-half-power width around the peak.
PatternMetrics compute_metrics(const Pattern& pattern);

/// One great-circle cut through a given direction, sampled by direct
/// summation (default 0.1 deg), with its own half-power width and in-cut SLL.
struct PrincipalCut {
    std::vector<double> offset_deg;         // signed arc from the cut center
    std::vector<double> directivity_dbi;
    std::vector<Complex> field;
    std::optional<double> hpbw_deg;
    std::optional<double> sll_db;
};
PrincipalCut principal_cut(const ArrayGeometry& geom, const Grid2D<Complex>& gamma,
                           const Illumination& illum, const FreqSpec& freq,
                           const Pattern& pattern, const Vec3& center,
                           const Vec3& tangent, double step_deg = 0.1,
                           double element_exponent = 1.0);

/// Two-horn transmission through the surface, per-element cascaded
/// free-space legs scaled by the element effective-area factor:
///   S21 = sum_ij pitch^2/(4*pi) * sqrt(g_tx*g_rx) * ef_t*ef_r * gamma_ij
///         * exp(-j*k*(r_t+r_r)) / (r_t*r_r)
/// Symmetric in tx/rx by construction (bit-exact under swap).
Complex link_s21(const HornSpec& tx, const HornSpec& rx, const ArrayGeometry& geom,
                 const Grid2D<Complex>& gamma, const FreqSpec& freq,
                 double element_exponent = 1.0);

}  // namespace risbeam
