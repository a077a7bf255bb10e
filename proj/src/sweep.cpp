#include "risbeam/sweep.hpp"

#include <cmath>

namespace risbeam {

Vec3 plane_direction(double theta_signed_deg) {
    const double th = deg2rad(theta_signed_deg);
    return {std::sin(th), 0.0, std::cos(th)};
}

ReferenceOptimum optimize_reference_phase(const ArrayGeometry& geom, const HornSpec& feed,
                                          const SteeringTarget& target, const FreqSpec& freq,
                                          const UnitCellModel& model, int samples,
                                          double element_exponent, bool quantize) {
    if (samples < 2) throw std::invalid_argument("optimize_reference_phase: samples must be >= 2");

    const Illumination illum = illuminate(feed, geom, freq);
    const FeedSpec synth_feed = FeedSpec::near_field(feed.position());
    const PhasePair states = model.phase_states(freq.hz());
    const double lambda = freq.wavelength();
    const double p = geom.pitch();
    const double gain_scale = p * p * p * p / (lambda * lambda);

    ReferenceOptimum best;
    double best_power = -1.0;
    for (int n = 0; n < samples; ++n) {
        const double dphi = n * 360.0 / samples;
        const PhaseMap map = ideal_phase_map(geom, synth_feed, target, freq, dphi);
        Grid2D<Complex> g(geom.rows(), geom.cols());
        BitMap bits = quantize_map(map, states.on_deg, states.off_deg);
        if (quantize) {
            g = reflection_grid(model, bits, illum, freq).gamma;
        } else {
            for (std::size_t m = 0; m < g.size(); ++m)
                g[m] = std::polar(1.0, deg2rad(map.phase_deg[m]));
        }
        const Complex f =
            scattered_field_at(geom, g, illum, freq, target.direction(), element_exponent);
        const double power = std::norm(f);
        if (power > best_power) {  // strict: ties keep the smallest dphi
            best_power = power;
            best.reference_phase_deg = dphi;
            best.bits = std::move(bits);
        }
    }
    best.gain_dbi = 10.0 * std::log10(gain_scale * best_power);
    return best;
}

BeamResult evaluate_beam(const BeamScenario& sc, const FreqSpec& freq,
                         const SteeringTarget& target) {
    BeamResult out;
    const Illumination illum = illuminate(sc.tx, sc.geom, freq);
    const FeedSpec feed = FeedSpec::near_field(sc.tx.position());
    const PhasePair states = sc.model.phase_states(freq.hz());

    if (sc.optimize_reference) {
        const ReferenceOptimum opt =
            optimize_reference_phase(sc.geom, sc.tx, target, freq, sc.model,
                                     sc.reference_samples, sc.element_exponent);
        out.reference_phase_deg = opt.reference_phase_deg;
        out.bits = opt.bits;
    } else {
        out.reference_phase_deg = sc.reference_phase_deg;
        const PhaseMap map = ideal_phase_map(sc.geom, feed, target, freq, out.reference_phase_deg);
        out.bits = quantize_map(map, states.on_deg, states.off_deg);
    }

    const ReflectionGrid refl = reflection_grid(sc.model, out.bits, illum, freq);
    out.clamped_cells = refl.clamped_cells;
    const Pattern pattern =
        scattered_pattern(sc.geom, refl.gamma, illum, freq, sc.grid, sc.element_exponent);
    out.metrics = compute_metrics(pattern);
    out.s21 = link_s21(sc.tx, sc.rx, sc.geom, refl.gamma, freq, sc.element_exponent);

    const double tp = deg2rad(out.metrics.peak_theta_deg);
    const double pp = deg2rad(out.metrics.peak_phi_deg);
    const Vec3 peak{std::sin(tp) * std::cos(pp), std::sin(tp) * std::sin(pp), std::cos(tp)};
    out.steering_error_deg = rad2deg(angle_between(peak, target.direction()));
    return out;
}

std::vector<SweepEntry> frequency_sweep(const BeamScenario& sc, const SteeringTarget& target,
                                        const std::vector<double>& frequencies_hz) {
    std::vector<SweepEntry> rows;
    rows.reserve(frequencies_hz.size());
    for (double f : frequencies_hz) {
        SweepEntry row;
        row.key = f;
        try {
            row.result = evaluate_beam(sc, FreqSpec(f), target);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SweepEntry> steering_sweep(const BeamScenario& sc, const FreqSpec& freq,
                                       const std::vector<double>& target_theta_deg,
                                       bool move_rx) {
    std::vector<SweepEntry> rows;
    rows.reserve(target_theta_deg.size());
    const double rx_dist = sc.rx.position().norm();
    const double rx_gain = sc.rx.peak_gain_dbi();
    for (double theta : target_theta_deg) {
        SweepEntry row;
        row.key = theta;
        try {
            BeamScenario run = sc;
            if (move_rx)
                run.rx = HornSpec::from_gain(plane_direction(theta) * rx_dist, rx_gain);
            row.result = evaluate_beam(run, freq, SteeringTarget(plane_direction(theta)));
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace risbeam
