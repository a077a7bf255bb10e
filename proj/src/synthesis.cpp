#include "risbeam/synthesis.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace risbeam {

double wrap_360(double deg) {
    double r = std::fmod(deg, 360.0);
    if (r < 0.0) r += 360.0;
    if (r >= 360.0) r = 0.0;  // fmod rounding at the seam
    return r;
}

double circular_distance_deg(double a_deg, double b_deg) {
    const double d = wrap_360(a_deg - b_deg);
    return std::min(d, 360.0 - d);
}

FeedSpec FeedSpec::near_field(const Vec3& position_m) {
    if (position_m.z <= 0.0)
        throw std::invalid_argument("FeedSpec::near_field: feed must be above the surface (z > 0)");
    return FeedSpec(Kind::NearField, position_m, {});
}

FeedSpec FeedSpec::far_field(const Vec3& toward_source) {
    const double n = toward_source.norm();
    if (n <= 0.0) throw std::invalid_argument("FeedSpec::far_field: zero direction");
    const Vec3 u = toward_source * (1.0 / n);
    if (u.z <= 0.0)
        throw std::invalid_argument("FeedSpec::far_field: source direction must have z > 0");
    return FeedSpec(Kind::FarField, {}, u);
}

SteeringTarget::SteeringTarget(const Vec3& direction) {
    const double n = direction.norm();
    if (n <= 0.0) throw std::invalid_argument("SteeringTarget: zero direction");
    u_ = direction * (1.0 / n);
    if (u_.z < 0.0)
        throw std::invalid_argument("SteeringTarget: direction must lie in the z >= 0 half-space");
}

SteeringTarget SteeringTarget::from_angles(double theta_deg, double phi_deg) {
    if (theta_deg < 0.0 || theta_deg > 90.0)
        throw std::invalid_argument("SteeringTarget: theta must be in [0, 90]");
    const double th = deg2rad(theta_deg);
    const double ph = deg2rad(phi_deg);
    return SteeringTarget({std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)});
}

double SteeringTarget::theta_deg() const { return rad2deg(std::acos(std::min(1.0, u_.z))); }

double SteeringTarget::phi_deg() const {
    if (std::abs(u_.x) < 1e-15 && std::abs(u_.y) < 1e-15) return 0.0;
    return wrap_360(rad2deg(std::atan2(u_.y, u_.x)));
}

std::string bitmap_to_text(const BitMap& bits) {
    std::string out;
    out.reserve(static_cast<std::size_t>(bits.rows()) * (bits.cols() + 1));
    for (int r = 0; r < bits.rows(); ++r) {
        for (int c = 0; c < bits.cols(); ++c)
            out += bits.at(r, c) == CellState::On ? '1' : '0';
        out += '\n';
    }
    return out;
}

BitMap bitmap_from_text(std::string_view text) {
    std::vector<std::string> rows;
    std::string cur;
    for (char ch : text) {
        if (ch == '\n') {
            if (!cur.empty() && cur[0] != '#') rows.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    if (!cur.empty() && cur[0] != '#') rows.push_back(cur);
    if (rows.empty()) throw std::invalid_argument("bitmap_from_text: empty input");
    const std::size_t cols = rows.front().size();
    BitMap bits(static_cast<int>(rows.size()), static_cast<int>(cols));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols)
            throw std::invalid_argument("bitmap_from_text: ragged rows");
        for (std::size_t c = 0; c < cols; ++c) {
            const char ch = rows[r][c];
            if (ch != '0' && ch != '1')
                throw std::invalid_argument("bitmap_from_text: expected '0' or '1'");
            bits.at(static_cast<int>(r), static_cast<int>(c)) =
                ch == '1' ? CellState::On : CellState::Off;
        }
    }
    return bits;
}

PhaseMap ideal_phase_map(const ArrayGeometry& geom, const FeedSpec& feed,
                         const SteeringTarget& target, const FreqSpec& freq,
                         double reference_phase_deg) {
    const double k = freq.wavenumber();
    const Vec3 u0 = target.direction();
    PhaseMap map{Grid2D<double>(geom.rows(), geom.cols()), freq.hz(), reference_phase_deg};

    for (int i = 1; i <= geom.rows(); ++i) {
        for (int j = 1; j <= geom.cols(); ++j) {
            const Vec3 r = geom.position(i, j);
            double phase_rad;
            if (feed.kind() == FeedSpec::Kind::NearField) {
                phase_rad = k * distance(r, feed.position()) - k * u0.dot(r);
            } else {
                phase_rad = -k * feed.source_direction().dot(r) - k * u0.dot(r);
            }
            map.phase_deg.at(i - 1, j - 1) = wrap_360(rad2deg(phase_rad) + reference_phase_deg);
        }
    }
    return map;
}

BitMap quantize_map(const PhaseMap& phases, double phase_on_deg, double phase_off_deg) {
    if (circular_distance_deg(phase_on_deg, phase_off_deg) < 1e-9)
        throw std::invalid_argument("quantize_map: phase_on and phase_off coincide");
    BitMap bits(phases.phase_deg.rows(), phases.phase_deg.cols());
    for (std::size_t n = 0; n < bits.size(); ++n) {
        const double ph = phases.phase_deg[n];
        bits[n] = circular_distance_deg(ph, phase_on_deg) <= circular_distance_deg(ph, phase_off_deg)
                      ? CellState::On
                      : CellState::Off;
    }
    return bits;
}

}  // namespace risbeam
