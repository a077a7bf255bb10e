#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "risbeam/pattern.hpp"

using namespace risbeam;

namespace {

constexpr double kC = 299792458.0;
constexpr double kTwoPi = 6.283185307179586476925286766559;

// test-local direct double sum, written independently of the engine
Complex naive_field(const ArrayGeometry& geom, const Grid2D<Complex>& gamma,
                    const Illumination& illum, double f_hz, double theta_deg, double phi_deg,
                    double qe) {
    const double k = kTwoPi * f_hz / kC;
    const double th = theta_deg * 3.14159265358979323846 / 180.0;
    const double ph = phi_deg * 3.14159265358979323846 / 180.0;
    const double ux = std::sin(th) * std::cos(ph);
    const double uy = std::sin(th) * std::sin(ph);
    Complex acc{};
    for (int i = 1; i <= geom.rows(); ++i)
        for (int j = 1; j <= geom.cols(); ++j) {
            const Vec3 r = geom.position(i, j);
            const double ef_inc =
                std::pow(std::cos(illum.incidence_deg.at(i - 1, j - 1) *
                                  3.14159265358979323846 / 180.0),
                         qe);
            acc += illum.amplitude.at(i - 1, j - 1) * gamma.at(i - 1, j - 1) * ef_inc *
                   std::exp(Complex(0.0, k * (ux * r.x + uy * r.y)));
        }
    const double efo = qe == 0.0 ? 1.0 : std::pow(std::cos(th), qe);
    return acc * efo;
}

Illumination unit_illumination(int rows, int cols) {
    return {Grid2D<Complex>(rows, cols, Complex(1.0, 0.0)), Grid2D<double>(rows, cols, 0.0)};
}

}  // namespace

TEST_CASE("horn gain model: q = 49 is a 20 dBi horn") {
    const HornSpec h = HornSpec::from_gain({0.0, 0.0, 0.2}, 20.0);
    CHECK(h.exponent() == doctest::Approx(49.0).epsilon(1e-9));
    CHECK(h.peak_gain_dbi() == doctest::Approx(20.0).epsilon(0.1 / 20.0));
    CHECK(h.gain(0.0) == doctest::Approx(100.0).epsilon(1e-9));
    CHECK(h.gain(deg2rad(95.0)) == 0.0);
    CHECK(h.boresight().z == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK_THROWS_AS(HornSpec::from_gain({0.0, 0.0, 0.2}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(HornSpec({0, 0, 1}, {0, 0, -1}, -1.0), std::invalid_argument);
}

TEST_CASE("illumination: boresight element phase matches the path-length oracle") {
    // oracle: wrap(-deg(k * 0.2))
    const double k = kTwoPi * 27.5e9 / kC;
    double oracle = std::fmod(-(k * 0.2) * 180.0 / 3.14159265358979323846, 360.0);
    if (oracle < 0.0) oracle += 360.0;
    CHECK(oracle == doctest::Approx(235.431).epsilon(1e-5));

    ArrayGeometry g(1, 1, 3.85e-3);
    const HornSpec horn = HornSpec::from_gain({0.0, 0.0, 0.2}, 20.0);
    const Illumination il = illuminate(horn, g, FreqSpec(27.5e9));
    double got = std::arg(il.amplitude.at(0, 0)) * 180.0 / 3.14159265358979323846;
    if (got < 0.0) got += 360.0;
    CHECK(got == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(il.incidence_deg.at(0, 0) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("illumination: equidistant elements, 1/r law, rejects coincident horn") {
    ArrayGeometry g(2, 1, 3.85e-3);
    const FreqSpec f(27.5e9);
    const HornSpec horn = HornSpec::from_gain({0.0, 0.0, 0.2}, 20.0);
    const Illumination il = illuminate(horn, g, f);
    CHECK(std::abs(il.amplitude.at(0, 0)) ==
          doctest::Approx(std::abs(il.amplitude.at(1, 0))).epsilon(1e-12));

    ArrayGeometry g1(1, 1, 3.85e-3);
    const double a1 = std::abs(illuminate(HornSpec::from_gain({0, 0, 0.2}, 20.0), g1, f)
                                   .amplitude.at(0, 0));
    const double a2 = std::abs(illuminate(HornSpec::from_gain({0, 0, 0.4}, 20.0), g1, f)
                                   .amplitude.at(0, 0));
    CHECK(a2 == doctest::Approx(a1 / 2.0).epsilon(1e-12));

    CHECK_THROWS_AS(illuminate(HornSpec({0, 0, 1e-12}, {0, 0, -1}, 0.0), g1, f),
                    std::invalid_argument);
    CHECK_THROWS_AS(illuminate(HornSpec({0, 0, -0.2}, {0, 0, 1}, 0.0), g1, f),
                    std::invalid_argument);
}

TEST_CASE("plane-wave illumination matches the receding-horn limit") {
    ArrayGeometry g(5, 5, 3.85e-3);
    const FreqSpec f(27.5e9);
    const Vec3 s = Vec3{std::sin(deg2rad(30.0)), 0.0, std::cos(deg2rad(30.0))};
    const Illumination pw = plane_wave_illumination(s, g, f);
    const Illumination far = illuminate(HornSpec::from_gain(s * 1000.0, 20.0), g, f);
    // compare per-element phase differences relative to the center element
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            const double dpw = std::arg(pw.amplitude.at(i, j) / pw.amplitude.at(2, 2));
            const double dfar = std::arg(far.amplitude.at(i, j) / far.amplitude.at(2, 2));
            CHECK(dpw == doctest::Approx(dfar).epsilon(1e-4));
            CHECK(pw.incidence_deg.at(i, j) == doctest::Approx(30.0).epsilon(1e-9));
        }
}

TEST_CASE("single isotropic element radiates uniformly over the hemisphere") {
    ArrayGeometry g(1, 1, 3.85e-3);
    const Pattern p = scattered_pattern(g, Grid2D<Complex>(1, 1, Complex(1.0, 0.0)),
                                        unit_illumination(1, 1), FreqSpec(27.5e9),
                                        PatternGrid{5.0, 10.0}, 0.0);
    double lo = 1e300, hi = 0.0;
    for (int it = 0; it < p.field().rows(); ++it)
        for (int ip = 0; ip < p.field().cols(); ++ip) {
            lo = std::min(lo, std::norm(p.field().at(it, ip)));
            hi = std::max(hi, std::norm(p.field().at(it, ip)));
        }
    CHECK(hi - lo < 1e-12 * hi);
}

TEST_CASE("two in-phase elements half a wavelength apart") {
    const FreqSpec f(27.5e9);
    ArrayGeometry g(2, 1, f.wavelength() / 2.0);
    const Pattern p = scattered_pattern(g, Grid2D<Complex>(2, 1, Complex(1.0, 0.0)),
                                        unit_illumination(2, 1), f, PatternGrid{0.5, 1.0}, 0.0);
    // maximum at broadside, null at the horizon in the plane of the elements
    const double peak = std::norm(p.field().at(0, 0));
    CHECK(peak == doctest::Approx(4.0).epsilon(1e-9));  // coherent |1+1|^2
    CHECK(std::norm(p.field().at(p.field().rows() - 1, 0)) < 1e-18 * peak);
    const PatternMetrics m = compute_metrics(p);
    CHECK(m.peak_theta_deg == 0.0);
}

TEST_CASE("uniform in-phase 20x20 aperture hits the 4*pi*A/lambda^2 directivity") {
    const FreqSpec f(27.5e9);
    ArrayGeometry g(20, 20, 3.85e-3);
    // oracle: 4*pi*A/lambda^2 for the 77 mm x 77 mm aperture
    const double area = 0.077 * 0.077;
    const double oracle_dbi =
        10.0 * std::log10(4.0 * 3.14159265358979323846 * area / (f.wavelength() * f.wavelength()));
    CHECK(oracle_dbi == doctest::Approx(27.97).epsilon(1e-3));

    const Pattern p = scattered_pattern(g, Grid2D<Complex>(20, 20, Complex(1.0, 0.0)),
                                        unit_illumination(20, 20), f, PatternGrid{0.5, 1.0}, 1.0);
    const PatternMetrics m = compute_metrics(p);
    CHECK(m.peak_theta_deg == 0.0);
    CHECK(m.peak_directivity_dbi == doctest::Approx(oracle_dbi).epsilon(0.5 / 27.97));
}

TEST_CASE("hemisphere-uniform pattern has 3.01 dBi everywhere") {
    const PatternGrid grid{0.5, 1.0};
    Grid2D<Complex> field(grid.n_theta(), grid.n_phi(), Complex(1.0, 0.0));
    const Pattern p(grid, FreqSpec(27.5e9), std::move(field));
    for (auto [it, ip] : {std::pair{0, 0}, {90, 100}, {180, 359}, {45, 7}})
        CHECK(p.directivity_dbi(it, ip) == doctest::Approx(3.0103).epsilon(0.01 / 3.0103));
    const PatternMetrics m = compute_metrics(p);
    CHECK(m.peak_directivity_dbi == doctest::Approx(3.0103).epsilon(0.01 / 3.0103));
    CHECK_FALSE(m.sll_db.has_value());
    CHECK_FALSE(m.hpbw_theta_deg.has_value());
}

TEST_CASE("cos^49 power pattern integrates to 20 dBi") {
    const PatternGrid grid{0.5, 1.0};
    Grid2D<Complex> field(grid.n_theta(), grid.n_phi());
    for (int it = 0; it < grid.n_theta(); ++it) {
        const double amp = std::pow(std::cos(deg2rad(it * grid.theta_step_deg)), 24.5);
        for (int ip = 0; ip < grid.n_phi(); ++ip) field.at(it, ip) = amp;
    }
    const Pattern p(grid, FreqSpec(27.5e9), std::move(field));
    const PatternMetrics m = compute_metrics(p);
    CHECK(m.peak_directivity_dbi == doctest::Approx(20.0).epsilon(0.1 / 20.0));
    CHECK(m.hpbw_theta_deg.has_value());
}

TEST_CASE("all-zero pattern is rejected") {
    const PatternGrid grid{5.0, 10.0};
    Grid2D<Complex> field(grid.n_theta(), grid.n_phi(), Complex(0.0, 0.0));
    const Pattern p(grid, FreqSpec(27.5e9), std::move(field));
    CHECK_THROWS_AS(compute_metrics(p), std::invalid_argument);
}

TEST_CASE("uniform 20-element line: first side lobe on the axis cut") {
    const FreqSpec f(27.5e9);
    ArrayGeometry g(20, 1, f.wavelength() / 2.0);
    const Grid2D<Complex> gamma(20, 1, Complex(1.0, 0.0));
    const Illumination il = unit_illumination(20, 1);
    const Pattern p = scattered_pattern(g, gamma, il, f, PatternGrid{0.5, 1.0}, 0.0);
    const PrincipalCut cut =
        principal_cut(g, gamma, il, f, p, {0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}, 0.1, 0.0);
    REQUIRE(cut.sll_db.has_value());
    CHECK(*cut.sll_db == doctest::Approx(13.26).epsilon(0.2 / 13.26));
    REQUIRE(cut.hpbw_deg.has_value());
    CHECK(*cut.hpbw_deg == doctest::Approx(5.1).epsilon(0.1));
}

TEST_CASE("factored engine equals the direct double sum on random instances") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        const double pitch = 2e-3 + 3e-3 * u01(rng);
        const double f_hz = (20.0 + 10.0 * u01(rng)) * 1e9;
        ArrayGeometry g(8, 8, pitch);
        Grid2D<Complex> gamma(8, 8);
        Illumination il{Grid2D<Complex>(8, 8), Grid2D<double>(8, 8)};
        for (std::size_t n = 0; n < gamma.size(); ++n) {
            gamma[n] = std::polar(u01(rng), kTwoPi * u01(rng));
            il.amplitude[n] = std::polar(0.5 + u01(rng), kTwoPi * u01(rng));
            il.incidence_deg[n] = 60.0 * u01(rng);
        }
        const Pattern p =
            scattered_pattern(g, gamma, il, FreqSpec(f_hz), PatternGrid{5.0, 10.0}, 1.0);
        double max_field = 0.0, max_err = 0.0;
        for (int it = 0; it < p.field().rows(); ++it)
            for (int ip = 0; ip < p.field().cols(); ++ip) {
                const Complex ref = naive_field(g, gamma, il, f_hz, p.theta_deg(it),
                                                p.phi_deg(ip), 1.0);
                max_field = std::max(max_field, std::abs(ref));
                max_err = std::max(max_err, std::abs(ref - p.field().at(it, ip)));
            }
        CHECK(max_err <= 1e-9 * max_field);

        // single-direction evaluator agrees too
        const Complex at = scattered_field_at(g, gamma, il, FreqSpec(f_hz),
                                              {0.3, 0.2, std::sqrt(1 - 0.09 - 0.04)}, 1.0);
        const double th = rad2deg(std::acos(std::sqrt(1 - 0.09 - 0.04)));
        const double ph = rad2deg(std::atan2(0.2, 0.3));
        const Complex ref = naive_field(g, gamma, il, f_hz, th, ph, 1.0);
        CHECK(std::abs(at - ref) <= 1e-9 * std::abs(ref));
    }
}

TEST_CASE("directivity integrates back to 4*pi") {
    const FreqSpec f(27.5e9);
    ArrayGeometry g(12, 12, 3.85e-3);
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    Grid2D<Complex> gamma(12, 12);
    for (std::size_t n = 0; n < gamma.size(); ++n)
        gamma[n] = std::polar(1.0, kTwoPi * u01(rng));
    const Pattern p =
        scattered_pattern(g, gamma, unit_illumination(12, 12), f, PatternGrid{0.5, 1.0}, 1.0);

    // independent integration of the directivity samples
    const double dth = deg2rad(0.5), dph = deg2rad(1.0);
    double integral = 0.0;
    for (int it = 0; it < p.field().rows(); ++it) {
        const double w = (it == 0 || it == p.field().rows() - 1) ? 0.5 : 1.0;
        for (int ip = 0; ip < p.field().cols(); ++ip)
            integral += p.directivity(it, ip) * std::sin(deg2rad(p.theta_deg(it))) * w * dth * dph;
    }
    CHECK(integral == doctest::Approx(4.0 * 3.14159265358979323846).epsilon(1e-3));
}

TEST_CASE("metrics are invariant under global scaling of gamma; |S21| scales") {
    const FreqSpec f(27.5e9);
    ArrayGeometry g(10, 10, 3.85e-3);
    const HornSpec tx = HornSpec::from_gain({-0.1, 0.0, 0.1732}, 20.0);
    const HornSpec rx = HornSpec::from_gain({0.0, 0.0, 0.3}, 20.0);
    const Illumination il = illuminate(tx, g, f);
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    Grid2D<Complex> gamma(10, 10);
    for (std::size_t n = 0; n < gamma.size(); ++n) gamma[n] = u01(rng) > 0.5 ? 1.0 : -1.0;

    const Complex scale = std::polar(0.35, 1.1);
    Grid2D<Complex> scaled = gamma;
    for (std::size_t n = 0; n < scaled.size(); ++n) scaled[n] *= scale;

    const PatternMetrics a = compute_metrics(scattered_pattern(g, gamma, il, f));
    const PatternMetrics b = compute_metrics(scattered_pattern(g, scaled, il, f));
    CHECK(a.peak_theta_deg == b.peak_theta_deg);
    CHECK(a.peak_phi_deg == b.peak_phi_deg);
    CHECK(a.peak_directivity_dbi == doctest::Approx(b.peak_directivity_dbi).epsilon(1e-9));
    REQUIRE(a.sll_db.has_value());
    REQUIRE(b.sll_db.has_value());
    CHECK(*a.sll_db == doctest::Approx(*b.sll_db).epsilon(1e-9));

    const Complex s_a = link_s21(tx, rx, g, gamma, f);
    const Complex s_b = link_s21(tx, rx, g, scaled, f);
    CHECK(std::abs(s_b) == doctest::Approx(std::abs(s_a) * std::abs(scale)).epsilon(1e-12));
}

TEST_CASE("link: swapping the horns is bit-exact") {
    const FreqSpec f(26.0e9);
    ArrayGeometry g(7, 9, 3.85e-3);
    const HornSpec tx = HornSpec::from_gain({-0.08, 0.02, 0.19}, 20.0);
    const HornSpec rx = HornSpec::from_gain({0.15, -0.01, 0.26}, 15.0);
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    Grid2D<Complex> gamma(7, 9);
    for (std::size_t n = 0; n < gamma.size(); ++n)
        gamma[n] = std::polar(u01(rng), kTwoPi * u01(rng));
    const Complex ab = link_s21(tx, rx, g, gamma, f);
    const Complex ba = link_s21(rx, tx, g, gamma, f);
    CHECK(ab.real() == ba.real());
    CHECK(ab.imag() == ba.imag());
}

TEST_CASE("link: single element reduces to the two-leg budget") {
    const FreqSpec f(27.5e9);
    ArrayGeometry g(1, 1, 3.85e-3);
    const HornSpec tx = HornSpec::from_gain({-0.1, 0.0, std::sqrt(0.03)}, 20.0);
    const HornSpec rx = HornSpec::from_gain({0.0, 0.0, 0.3}, 20.0);
    const Grid2D<Complex> gamma(1, 1, Complex(1.0, 0.0));
    const double s21 = std::norm(link_s21(tx, rx, g, gamma, f));

    // independent two-leg evaluation: effective-area element gain with a
    // cos^2 projection per side
    const double lambda = kC / f.hz();
    const double pitch = 3.85e-3;
    const double g_el = 4.0 * 3.14159265358979323846 * pitch * pitch / (lambda * lambda);
    auto leg = [&](const HornSpec& h) {
        const double r = h.position().norm();
        const double cos_t = h.position().z / r;
        // horn aimed exactly at the element, so its own gain is the peak
        const double spread = lambda / (4.0 * 3.14159265358979323846 * r);
        return h.gain(0.0) * (g_el * cos_t * cos_t) * spread * spread;
    };
    const double oracle = leg(tx) * leg(rx);
    CHECK(s21 == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("link rejects bad setups") {
    const FreqSpec f(27.5e9);
    ArrayGeometry g(2, 2, 3.85e-3);
    const Grid2D<Complex> gamma(2, 2, Complex(1.0, 0.0));
    const HornSpec below({0.0, 0.0, -0.3}, {0, 0, 1}, 0.0);
    const HornSpec ok = HornSpec::from_gain({0.0, 0.0, 0.3}, 20.0);
    CHECK_THROWS_AS(link_s21(below, ok, g, gamma, f), std::invalid_argument);
    CHECK_THROWS_AS(link_s21(ok, ok, g, Grid2D<Complex>(3, 2, Complex(1.0, 0.0)), f),
                    std::invalid_argument);
}

TEST_CASE("pattern grid validation") {
    const PatternGrid bad1{0.7, 1.0}, bad2{0.5, 7.0}, bad3{-0.5, 1.0}, ok{0.5, 1.0};
    CHECK_THROWS_AS(bad1.validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad2.validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad3.validate(), std::invalid_argument);
    ok.validate();
    PatternGrid{2.0, 4.0}.validate();
    CHECK(ok.n_theta() == 181);
    CHECK(ok.n_phi() == 360);
}
