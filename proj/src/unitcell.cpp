#include "risbeam/unitcell.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "risbeam/geometry.hpp"
#include "risbeam/synthesis.hpp"

namespace risbeam {

namespace {

constexpr double kBandScanPoints = 2000;

std::complex<double> polar_db_deg(double mag_db, double phase_deg) {
    const double mag = std::pow(10.0, mag_db / 20.0);
    return std::polar(mag, deg2rad(phase_deg));
}

/// Reduces b to the representative within 180 degrees of a.
double align_phase(double a, double b) {
    return b - 360.0 * std::round((b - a) / 360.0);
}

double lerp(double a, double b, double t) { return a + (b - a) * t; }

}  // namespace

const char* to_token(CellState s) { return s == CellState::On ? "ON" : "OFF"; }

UnitCellModel UnitCellModel::ideal(double phase_on_deg, double magnitude_on,
                                   double magnitude_off) {
    if (magnitude_on <= 0.0 || magnitude_on > 1.0 || magnitude_off <= 0.0 || magnitude_off > 1.0)
        throw std::invalid_argument("UnitCellModel::ideal: magnitudes must be in (0, 1]");
    UnitCellModel m;
    m.ideal_ = true;
    m.ideal_phase_on_deg_ = phase_on_deg;
    m.ideal_mag_on_ = magnitude_on;
    m.ideal_mag_off_ = magnitude_off;
    return m;
}

UnitCellModel UnitCellModel::from_samples(std::vector<CellSample> samples) {
    if (samples.empty()) throw CellTableError("cell table: no samples");

    std::sort(samples.begin(), samples.end(), [](const CellSample& a, const CellSample& b) {
        if (a.state != b.state) return a.state == CellState::On;
        if (a.incidence_deg != b.incidence_deg) return a.incidence_deg < b.incidence_deg;
        return a.freq_hz < b.freq_hz;
    });

    UnitCellModel m;
    m.ideal_ = false;
    for (const auto& s : samples) {
        if (s.mag_db > 0.0)
            throw CellTableError("cell table: magnitude above 0 dB (|gamma| must be <= 1)");
        if (s.incidence_deg < 0.0 || s.incidence_deg > 90.0)
            throw CellTableError("cell table: incidence angle outside [0, 90]");
        if (s.freq_hz <= 0.0) throw CellTableError("cell table: frequency must be > 0");
    }

    for (CellState state : {CellState::On, CellState::Off}) {
        StateTable& table = state == CellState::On ? m.on_ : m.off_;
        std::map<double, std::vector<const CellSample*>> by_angle;
        for (const auto& s : samples)
            if (s.state == state) by_angle[s.incidence_deg].push_back(&s);
        if (by_angle.empty())
            throw CellTableError(std::string("cell table: state ") + to_token(state) +
                                 " has no samples");
        for (auto& [angle, rows] : by_angle) {
            Series series;
            series.angle_deg = angle;
            double prev_f = -1.0;
            for (const CellSample* s : rows) {
                if (s->freq_hz == prev_f)
                    throw CellTableError("cell table: duplicate (frequency, state, angle) sample");
                prev_f = s->freq_hz;
                series.freq_hz.push_back(s->freq_hz);
                series.mag_db.push_back(s->mag_db);
                // unwrap against the previous sample
                double ph = s->phase_deg;
                if (!series.phase_unwrapped_deg.empty())
                    ph = align_phase(series.phase_unwrapped_deg.back(), ph);
                series.phase_unwrapped_deg.push_back(ph);
            }
            table.by_angle.push_back(std::move(series));
        }
    }

    m.samples_ = std::move(samples);
    // span must be non-empty across all series
    auto [lo, hi] = m.frequency_span();
    if (lo > hi) throw CellTableError("cell table: series frequency spans do not overlap");
    return m;
}

std::pair<double, double> UnitCellModel::frequency_span() const {
    if (ideal_) return {0.0, std::numeric_limits<double>::infinity()};
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    for (const StateTable* t : {&on_, &off_})
        for (const Series& s : t->by_angle) {
            lo = std::max(lo, s.freq_hz.front());
            hi = std::min(hi, s.freq_hz.back());
        }
    return {lo, hi};
}

void UnitCellModel::interpolate(const Series& s, double f_hz, double& mag_db, double& phase_deg) {
    const auto& f = s.freq_hz;
    if (f.size() == 1) {
        mag_db = s.mag_db[0];
        phase_deg = s.phase_unwrapped_deg[0];
        return;
    }
    auto it = std::lower_bound(f.begin(), f.end(), f_hz);
    std::size_t hi = it == f.end() ? f.size() - 1 : static_cast<std::size_t>(it - f.begin());
    if (hi == 0) hi = 1;
    const std::size_t lo = hi - 1;
    const double t = (f_hz - f[lo]) / (f[hi] - f[lo]);
    mag_db = lerp(s.mag_db[lo], s.mag_db[hi], t);
    phase_deg = lerp(s.phase_unwrapped_deg[lo], s.phase_unwrapped_deg[hi], t);
}

ReflectionValue UnitCellModel::reflection(CellState state, double frequency_hz,
                                          double incidence_deg) const {
    if (frequency_hz <= 0.0) throw std::out_of_range("reflection: frequency must be > 0");
    if (ideal_) {
        const double phase = state == CellState::On ? ideal_phase_on_deg_
                                                    : ideal_phase_on_deg_ + 180.0;
        const double mag = state == CellState::On ? ideal_mag_on_ : ideal_mag_off_;
        return {std::polar(mag, deg2rad(phase)), false};
    }

    const auto [lo, hi] = frequency_span();
    // tolerate rounding at the span edges, then clamp for interpolation
    const double edge_tol = hi * 1e-12;
    if (frequency_hz < lo - edge_tol || frequency_hz > hi + edge_tol) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "reflection: %.6g GHz outside the table span [%.6g, %.6g] GHz",
                      frequency_hz * 1e-9, lo * 1e-9, hi * 1e-9);
        throw std::out_of_range(buf);
    }
    frequency_hz = std::clamp(frequency_hz, lo, hi);

    const StateTable& t = table(state);
    const auto& series = t.by_angle;
    bool clamped = false;
    double angle = incidence_deg;
    if (angle <= series.front().angle_deg) {
        clamped = angle < series.front().angle_deg;
        angle = series.front().angle_deg;
    } else if (angle >= series.back().angle_deg) {
        clamped = angle > series.back().angle_deg;
        angle = series.back().angle_deg;
    }

    std::size_t ihi = 0;
    while (ihi < series.size() && series[ihi].angle_deg < angle) ++ihi;
    if (ihi == series.size()) ihi = series.size() - 1;

    double mag_db, phase_deg;
    if (series[ihi].angle_deg == angle || ihi == 0) {
        interpolate(series[ihi], frequency_hz, mag_db, phase_deg);
    } else {
        const Series& a = series[ihi - 1];
        const Series& b = series[ihi];
        double ma, pa, mb, pb;
        interpolate(a, frequency_hz, ma, pa);
        interpolate(b, frequency_hz, mb, pb);
        pb = align_phase(pa, pb);
        const double t2 = (angle - a.angle_deg) / (b.angle_deg - a.angle_deg);
        mag_db = lerp(ma, mb, t2);
        phase_deg = lerp(pa, pb, t2);
    }
    return {polar_db_deg(mag_db, phase_deg), clamped};
}

PhasePair UnitCellModel::phase_states(double frequency_hz) const {
    const auto on = reflection(CellState::On, frequency_hz, 0.0);
    const auto off = reflection(CellState::Off, frequency_hz, 0.0);
    return {wrap_360(rad2deg(std::arg(on.gamma))), wrap_360(rad2deg(std::arg(off.gamma)))};
}

bool UnitCellModel::band_criteria_met(double f_hz, double tol_deg, double floor_db) const {
    const PhasePair p = phase_states(f_hz);
    const double diff = circular_distance_deg(p.on_deg, p.off_deg);
    if (diff < 180.0 - tol_deg || diff > 180.0 + tol_deg) return false;
    // circular_distance_deg never exceeds 180, so the upper branch triggers
    // only for tol < 0; keep it for symmetry with the written criterion.
    const double mag_on = 20.0 * std::log10(std::abs(reflection(CellState::On, f_hz, 0.0).gamma));
    const double mag_off = 20.0 * std::log10(std::abs(reflection(CellState::Off, f_hz, 0.0).gamma));
    return mag_on >= floor_db && mag_off >= floor_db;
}

BandReport UnitCellModel::operating_band(double phase_tolerance_deg,
                                         double magnitude_floor_db) const {
    if (ideal_) throw std::invalid_argument("operating_band: requires a table model");
    for (const StateTable* t : {&on_, &off_}) {
        std::size_t n = 0;
        for (const Series& s : t->by_angle) n += s.freq_hz.size();
        if (n < 2) throw std::invalid_argument("operating_band: needs >= 2 samples per state");
    }

    const auto [lo, hi] = frequency_span();
    const int n = static_cast<int>(kBandScanPoints);
    const double step = (hi - lo) / n;

    auto met = [&](double f) { return band_criteria_met(f, phase_tolerance_deg, magnitude_floor_db); };

    // widest contiguous run on the scan grid
    int best_start = -1, best_len = 0, run_start = -1;
    std::vector<bool> ok(n + 1);
    for (int i = 0; i <= n; ++i) ok[i] = met(lo + i * step);
    for (int i = 0; i <= n + 1; ++i) {
        const bool v = i <= n && ok[i];
        if (v && run_start < 0) run_start = i;
        if (!v && run_start >= 0) {
            if (i - run_start > best_len) {
                best_len = i - run_start;
                best_start = run_start;
            }
            run_start = -1;
        }
    }
    if (best_start < 0) return {};

    // refine both edges by bisection into the neighboring failing interval
    auto bisect = [&](double f_bad, double f_good) {
        for (int k = 0; k < 50; ++k) {
            const double mid = 0.5 * (f_bad + f_good);
            (met(mid) ? f_good : f_bad) = mid;
        }
        return f_good;
    };
    double f_low = lo + best_start * step;
    double f_high = lo + (best_start + best_len - 1) * step;
    if (best_start > 0) f_low = bisect(f_low - step, f_low);
    if (best_start + best_len - 1 < n) f_high = bisect(f_high + step, f_high);

    BandReport r;
    r.found = true;
    r.f_low_hz = f_low;
    r.f_high_hz = f_high;
    r.fractional = 2.0 * (f_high - f_low) / (f_high + f_low);
    return r;
}

// ---- CSV ------------------------------------------------------------------

namespace {

constexpr const char* kHeader = "freq_ghz,state,incidence_deg,mag_db,phase_deg";

std::string trim(std::string_view v) {
    std::size_t b = v.find_first_not_of(" \t\r");
    std::size_t e = v.find_last_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    return std::string(v.substr(b, e - b + 1));
}

double parse_number(const std::string& field, int line_no, const char* what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(field, &used);
    } catch (const std::exception&) {
        throw CellTableError("line " + std::to_string(line_no) + ": malformed " + what + " '" +
                             field + "'");
    }
    if (used != field.size())
        throw CellTableError("line " + std::to_string(line_no) + ": malformed " + what + " '" +
                             field + "'");
    return v;
}

}  // namespace

UnitCellModel UnitCellModel::from_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    std::vector<CellSample> samples;
    std::set<std::tuple<double, int, double>> keys;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!header_seen) {
            if (t != kHeader)
                throw CellTableError("line " + std::to_string(line_no) +
                                     ": expected header '" + kHeader + "', got '" + t + "'");
            header_seen = true;
            continue;
        }
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (true) {
            const std::size_t comma = t.find(',', pos);
            fields.push_back(trim(t.substr(pos, comma - pos)));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (fields.size() != 5)
            throw CellTableError("line " + std::to_string(line_no) + ": expected 5 fields, got " +
                                 std::to_string(fields.size()));

        CellSample s;
        s.freq_hz = parse_number(fields[0], line_no, "freq_ghz") * 1e9;
        if (fields[1] == "ON")
            s.state = CellState::On;
        else if (fields[1] == "OFF")
            s.state = CellState::Off;
        else
            throw CellTableError("line " + std::to_string(line_no) + ": unknown state token '" +
                                 fields[1] + "'");
        s.incidence_deg = fields[2].empty() ? 0.0 : parse_number(fields[2], line_no, "incidence_deg");
        s.mag_db = parse_number(fields[3], line_no, "mag_db");
        s.phase_deg = parse_number(fields[4], line_no, "phase_deg");

        const auto key = std::make_tuple(s.freq_hz, static_cast<int>(s.state), s.incidence_deg);
        if (!keys.insert(key).second)
            throw CellTableError("line " + std::to_string(line_no) +
                                 ": duplicate (freq, state, angle) row");
        samples.push_back(s);
    }
    if (!header_seen) throw CellTableError("cell table: missing header line");
    if (samples.empty()) throw CellTableError("cell table: no data rows");
    return from_samples(std::move(samples));
}

UnitCellModel UnitCellModel::from_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CellTableError("cell table: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_csv(buf.str());
}

std::string UnitCellModel::to_csv() const {
    if (ideal_) throw std::invalid_argument("to_csv: requires a table model");
    std::string out;
    out += kHeader;
    out += '\n';
    char buf[128];
    for (const auto& s : samples_) {
        std::snprintf(buf, sizeof buf, "%.10g,%s,%.10g,%.10g,%.10g\n", s.freq_hz * 1e-9,
                      to_token(s.state), s.incidence_deg, s.mag_db, s.phase_deg);
        out += buf;
    }
    return out;
}

}  // namespace risbeam
