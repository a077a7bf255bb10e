#include "risbeam/artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "risbeam/control.hpp"
#include "risbeam/sweep.hpp"
#include "risbeam/version.hpp"

namespace risbeam {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Context {
    ScenarioConfig cfg;
    DispatchOptions opts;
    std::string hash;
    fs::path out_dir;
    UnitCellModel model = UnitCellModel::ideal();
    BeamScenario scenario{ArrayGeometry(1, 1, 1e-3),
                          HornSpec({0, 0, 1}, {0, 0, -1}, 0.0),
                          HornSpec({0, 0, 1}, {0, 0, -1}, 0.0),
                          UnitCellModel::ideal()};
};

std::string fmt(double v, const char* spec = "%.6f") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v, const char* spec = "%.4f") {
    return v ? fmt(*v, spec) : std::string();
}

void atomic_write(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

std::string csv_header(const Context& ctx, const std::string& subcommand) {
    std::string h;
    h += std::string("# risbeam ") + kVersion + "\n";
    h += "# config " + ctx.hash + "\n";
    h += "# subcommand " + subcommand + "\n";
    return h;
}

ordered_json json_meta(const Context& ctx, const std::string& subcommand) {
    ordered_json meta;
    meta["tool"] = "risbeam";
    meta["version"] = kVersion;
    meta["config"] = ctx.hash;
    meta["subcommand"] = subcommand;
    return meta;
}

void write_json(const Context& ctx, const std::string& name, ordered_json doc) {
    atomic_write(ctx.out_dir / name, doc.dump(2) + "\n");
}

void note(const Context& ctx, const std::string& line) {
    if (!ctx.opts.quiet) std::cout << line << "\n";
}

Context make_context(const ScenarioConfig& cfg, const DispatchOptions& opts) {
    Context ctx{cfg, opts, config_hash(cfg), {}, UnitCellModel::ideal(),
                BeamScenario{ArrayGeometry(cfg.geometry.rows, cfg.geometry.cols,
                                           cfg.geometry.pitch_mm * 1e-3),
                             HornSpec::from_gain(plane_direction(-cfg.tx_horn.incidence_theta_deg) *
                                                     cfg.tx_horn.distance_m,
                                                 cfg.tx_horn.gain_dbi),
                             HornSpec::from_gain(plane_direction(cfg.rx_horn.theta_deg) *
                                                     cfg.rx_horn.distance_m,
                                                 cfg.rx_horn.gain_dbi),
                             UnitCellModel::ideal()}};
    if (cfg.cell_model.kind == ScenarioConfig::CellModel::Kind::Table)
        ctx.model = UnitCellModel::from_csv_file(cfg.cell_model.path);
    ctx.scenario.model = ctx.model;
    ctx.scenario.element_exponent = cfg.element_factor_exponent;
    ctx.scenario.grid = PatternGrid{cfg.grid.theta_step_deg, cfg.grid.phi_step_deg};
    ctx.scenario.reference_phase_deg = cfg.reference_phase_deg;
    ctx.scenario.optimize_reference = cfg.optimize_reference;
    ctx.scenario.reference_samples = cfg.reference_samples;
    ctx.out_dir = opts.out_dir.empty() ? fs::path(cfg.output_dir) : fs::path(opts.out_dir);
    fs::create_directories(ctx.out_dir);
    return ctx;
}

ordered_json metrics_json(const PatternMetrics& m) {
    ordered_json j;
    j["peak_theta_deg"] = m.peak_theta_deg;
    j["peak_phi_deg"] = m.peak_phi_deg;
    j["peak_dbi"] = m.peak_directivity_dbi;
    j["sll_db"] = m.sll_db ? ordered_json(*m.sll_db) : ordered_json(nullptr);
    j["hpbw_theta_deg"] = m.hpbw_theta_deg ? ordered_json(*m.hpbw_theta_deg) : ordered_json(nullptr);
    j["hpbw_phi_deg"] = m.hpbw_phi_deg ? ordered_json(*m.hpbw_phi_deg) : ordered_json(nullptr);
    j["peak_gain_dbi"] = m.peak_gain_dbi ? ordered_json(*m.peak_gain_dbi) : ordered_json(nullptr);
    return j;
}

double db20(const Complex& v) { return 20.0 * std::log10(std::abs(v)); }

// ---- subcommands ------------------------------------------------------------

int run_pattern(Context& ctx) {
    const FreqSpec freq(ctx.cfg.frequency_ghz.front() * 1e9);
    const SteeringTarget target(plane_direction(ctx.cfg.target_theta_deg.front()));
    const BeamScenario& sc = ctx.scenario;

    const Illumination illum = illuminate(sc.tx, sc.geom, freq);
    double dphi = sc.reference_phase_deg;
    BitMap bits(sc.geom.rows(), sc.geom.cols());
    if (sc.optimize_reference) {
        const ReferenceOptimum opt = optimize_reference_phase(
            sc.geom, sc.tx, target, freq, sc.model, sc.reference_samples, sc.element_exponent);
        dphi = opt.reference_phase_deg;
        bits = opt.bits;
    } else {
        const PhasePair states = sc.model.phase_states(freq.hz());
        const PhaseMap map = ideal_phase_map(sc.geom, FeedSpec::near_field(sc.tx.position()),
                                             target, freq, dphi);
        bits = quantize_map(map, states.on_deg, states.off_deg);
    }
    const ReflectionGrid refl = reflection_grid(sc.model, bits, illum, freq);
    const Pattern pattern =
        scattered_pattern(sc.geom, refl.gamma, illum, freq, sc.grid, sc.element_exponent);
    const PatternMetrics m = compute_metrics(pattern);
    const Complex s21 = link_s21(sc.tx, sc.rx, sc.geom, refl.gamma, freq, sc.element_exponent);

    // full hemisphere grid
    std::string csv = csv_header(ctx, "pattern");
    csv += "theta_deg,phi_deg,directivity_dbi,field_re,field_im\n";
    for (int it = 0; it < pattern.field().rows(); ++it)
        for (int ip = 0; ip < pattern.field().cols(); ++ip) {
            const Complex f = pattern.field().at(it, ip);
            csv += fmt(pattern.theta_deg(it), "%.2f") + "," + fmt(pattern.phi_deg(ip), "%.2f") +
                   "," + fmt(pattern.directivity_dbi(it, ip), "%.4f") + "," +
                   fmt(f.real(), "%.8e") + "," + fmt(f.imag(), "%.8e") + "\n";
        }
    atomic_write(ctx.out_dir / "pattern.csv", csv);

    // principal cuts at 0.1 deg through the peak
    const double tp = deg2rad(m.peak_theta_deg);
    const double pp = deg2rad(m.peak_phi_deg);
    const Vec3 peak{std::sin(tp) * std::cos(pp), std::sin(tp) * std::sin(pp), std::cos(tp)};
    const Vec3 tan_theta = m.peak_theta_deg < 1e-9
                               ? Vec3{std::cos(pp), std::sin(pp), 0.0}
                               : Vec3{std::cos(tp) * std::cos(pp), std::cos(tp) * std::sin(pp),
                                      -std::sin(tp)};
    const Vec3 tan_phi{-std::sin(pp), std::cos(pp), 0.0};
    const char* names[2] = {"cut_theta.csv", "cut_phi.csv"};
    const Vec3 tangents[2] = {tan_theta, tan_phi};
    for (int c = 0; c < 2; ++c) {
        const PrincipalCut cut = principal_cut(sc.geom, refl.gamma, illum, freq, pattern, peak,
                                               tangents[c], 0.1, sc.element_exponent);
        std::string cc = csv_header(ctx, "pattern");
        cc += "offset_deg,directivity_dbi\n";
        for (std::size_t i = 0; i < cut.offset_deg.size(); ++i)
            cc += fmt(cut.offset_deg[i], "%.2f") + "," + fmt(cut.directivity_dbi[i], "%.4f") + "\n";
        atomic_write(ctx.out_dir / names[c], cc);
    }

    atomic_write(ctx.out_dir / "bitmap.txt", csv_header(ctx, "pattern") + bitmap_to_text(bits));

    ordered_json j;
    j["meta"] = json_meta(ctx, "pattern");
    j["frequency_ghz"] = freq.ghz();
    j["target_theta_deg"] = ctx.cfg.target_theta_deg.front();
    j["reference_phase_deg"] = dphi;
    ordered_json mj = metrics_json(m);
    for (auto& [k, v] : mj.items()) j[k] = v;
    j["s21_db"] = db20(s21);
    j["clamped_cells"] = refl.clamped_cells;
    write_json(ctx, "metrics.json", j);

    note(ctx, "pattern: peak " + fmt(m.peak_directivity_dbi, "%.2f") + " dBi at theta=" +
                  fmt(m.peak_theta_deg, "%.1f") + " phi=" + fmt(m.peak_phi_deg, "%.1f"));
    return 0;
}

std::string sweep_row(const SweepEntry& e, const std::string& key, const std::string& bitmap_file) {
    std::string row = key + ",";
    if (e.result) {
        const BeamResult& r = *e.result;
        row += "ok," + fmt(r.reference_phase_deg, "%.4f") + "," +
               fmt(r.metrics.peak_theta_deg, "%.2f") + "," + fmt(r.metrics.peak_phi_deg, "%.2f") +
               "," + fmt(r.metrics.peak_directivity_dbi, "%.4f") + "," +
               fmt_opt(r.metrics.peak_gain_dbi) + "," + fmt_opt(r.metrics.sll_db) + "," +
               fmt_opt(r.metrics.hpbw_theta_deg) + "," + fmt_opt(r.metrics.hpbw_phi_deg) + "," +
               fmt(db20(r.s21), "%.4f") + "," + fmt(r.steering_error_deg, "%.4f") + "," +
               std::to_string(r.clamped_cells) + "," + bitmap_file + ",";
    } else {
        std::string msg = e.error;
        for (char& c : msg)
            if (c == ',' || c == '\n') c = ';';
        row += "error,,,,,,,,,,,,," + msg;
    }
    return row + "\n";
}

constexpr const char* kSweepColumns =
    "status,reference_phase_deg,peak_theta_deg,peak_phi_deg,peak_directivity_dbi,"
    "peak_gain_dbi,sll_db,hpbw_theta_deg,hpbw_phi_deg,s21_db,steering_error_deg,"
    "clamped_cells,bitmap_file,error";

int run_sweep_freq(Context& ctx) {
    std::vector<double> freqs;
    for (double g : ctx.cfg.sweep_frequency_ghz) freqs.push_back(g * 1e9);
    const SteeringTarget target(plane_direction(ctx.cfg.target_theta_deg.front()));
    const auto rows = frequency_sweep(ctx.scenario, target, freqs);

    std::string csv = csv_header(ctx, "sweep-freq");
    csv += std::string("freq_ghz,") + kSweepColumns + "\n";
    bool any_error = false;
    for (const auto& e : rows) {
        std::string bitmap_file;
        if (e.result) {
            bitmap_file = "bitmap_f" + fmt(e.key * 1e-9, "%.2f") + ".txt";
            atomic_write(ctx.out_dir / bitmap_file,
                         csv_header(ctx, "sweep-freq") + bitmap_to_text(e.result->bits));
        } else {
            any_error = true;
        }
        csv += sweep_row(e, fmt(e.key * 1e-9, "%.2f"), bitmap_file);
    }
    atomic_write(ctx.out_dir / "sweep_freq.csv", csv);
    note(ctx, "sweep-freq: " + std::to_string(rows.size()) + " rows");
    return any_error ? 3 : 0;
}

int run_sweep_angle(Context& ctx) {
    const FreqSpec freq(ctx.cfg.frequency_ghz.front() * 1e9);
    const auto rows = steering_sweep(ctx.scenario, freq, ctx.cfg.sweep_target_theta_deg);

    std::string csv = csv_header(ctx, "sweep-angle");
    csv += std::string("target_theta_deg,") + kSweepColumns + "\n";
    bool any_error = false;
    for (const auto& e : rows) {
        std::string bitmap_file;
        if (e.result) {
            bitmap_file = "bitmap_t" + fmt(e.key, "%.1f") + ".txt";
            atomic_write(ctx.out_dir / bitmap_file,
                         csv_header(ctx, "sweep-angle") + bitmap_to_text(e.result->bits));
        } else {
            any_error = true;
        }
        csv += sweep_row(e, fmt(e.key, "%.1f"), bitmap_file);
    }
    atomic_write(ctx.out_dir / "sweep_angle.csv", csv);
    note(ctx, "sweep-angle: " + std::to_string(rows.size()) + " rows");
    return any_error ? 3 : 0;
}

int run_contrast(Context& ctx) {
    const BeamScenario& sc = ctx.scenario;
    const FreqSpec synth_freq(ctx.cfg.pattern_frequency_ghz * 1e9);
    const SteeringTarget target(plane_direction(ctx.cfg.target_theta_deg.front()));

    // configuration synthesized once at the pattern frequency, held while
    // the link is swept (the all-OFF map is the specular baseline)
    const Illumination illum_synth = illuminate(sc.tx, sc.geom, synth_freq);
    BitMap bits(sc.geom.rows(), sc.geom.cols());
    double dphi = sc.reference_phase_deg;
    if (sc.optimize_reference) {
        const ReferenceOptimum opt =
            optimize_reference_phase(sc.geom, sc.tx, target, synth_freq, sc.model,
                                     sc.reference_samples, sc.element_exponent);
        bits = opt.bits;
        dphi = opt.reference_phase_deg;
    } else {
        const PhasePair states = sc.model.phase_states(synth_freq.hz());
        bits = quantize_map(ideal_phase_map(sc.geom, FeedSpec::near_field(sc.tx.position()),
                                            target, synth_freq, dphi),
                            states.on_deg, states.off_deg);
    }
    const BitMap all_off(sc.geom.rows(), sc.geom.cols(), CellState::Off);

    std::string csv = csv_header(ctx, "contrast");
    csv += "freq_ghz,s21_on_db,s21_off_db,enhancement_db\n";
    double sum_enh = 0.0;
    double at_synth = 0.0;
    bool have_synth = false;
    for (double g : ctx.cfg.frequency_ghz) {
        const FreqSpec f(g * 1e9);
        const Illumination illum = illuminate(sc.tx, sc.geom, f);
        const Complex on = link_s21(sc.tx, sc.rx, sc.geom,
                                    reflection_grid(sc.model, bits, illum, f).gamma, f,
                                    sc.element_exponent);
        const Complex off = link_s21(sc.tx, sc.rx, sc.geom,
                                     reflection_grid(sc.model, all_off, illum, f).gamma, f,
                                     sc.element_exponent);
        const double enh = db20(on) - db20(off);
        sum_enh += enh;
        if (std::abs(g - ctx.cfg.pattern_frequency_ghz) < 1e-9) {
            at_synth = enh;
            have_synth = true;
        }
        csv += fmt(g, "%.2f") + "," + fmt(db20(on), "%.4f") + "," + fmt(db20(off), "%.4f") + "," +
               fmt(enh, "%.4f") + "\n";
    }
    atomic_write(ctx.out_dir / "contrast.csv", csv);
    atomic_write(ctx.out_dir / "bitmap_on.txt", csv_header(ctx, "contrast") + bitmap_to_text(bits));

    ordered_json j;
    j["meta"] = json_meta(ctx, "contrast");
    j["synthesis_frequency_ghz"] = ctx.cfg.pattern_frequency_ghz;
    j["reference_phase_deg"] = dphi;
    j["average_enhancement_db"] = sum_enh / ctx.cfg.frequency_ghz.size();
    j["enhancement_at_synthesis_db"] = have_synth ? ordered_json(at_synth) : ordered_json(nullptr);
    write_json(ctx, "contrast.json", j);
    note(ctx, "contrast: average enhancement " +
                  fmt(sum_enh / ctx.cfg.frequency_ghz.size(), "%.2f") + " dB");
    return 0;
}

int run_band(Context& ctx) {
    if (ctx.cfg.cell_model.kind != ScenarioConfig::CellModel::Kind::Table)
        throw std::runtime_error("band: requires cell_model.kind = \"table\"");
    const BandReport r = ctx.model.operating_band();
    ordered_json j;
    j["meta"] = json_meta(ctx, "band");
    j["found"] = r.found;
    j["f_low_ghz"] = r.found ? ordered_json(r.f_low_hz * 1e-9) : ordered_json(nullptr);
    j["f_high_ghz"] = r.found ? ordered_json(r.f_high_hz * 1e-9) : ordered_json(nullptr);
    j["fractional"] = r.found ? ordered_json(r.fractional) : ordered_json(nullptr);
    j["phase_tolerance_deg"] = 20.0;
    j["magnitude_floor_db"] = -2.8;
    write_json(ctx, "band.json", j);
    if (r.found)
        note(ctx, "band: " + fmt(r.f_low_hz * 1e-9, "%.3f") + " to " +
                      fmt(r.f_high_hz * 1e-9, "%.3f") + " GHz (" +
                      fmt(100.0 * r.fractional, "%.1f") + "%)");
    else
        note(ctx, "band: no operating band found");
    return 0;
}

int run_codebook(Context& ctx) {
    const BeamScenario& sc = ctx.scenario;
    if ((static_cast<long>(sc.geom.rows()) * sc.geom.cols()) % 8 != 0)
        throw std::runtime_error("codebook: rows*cols must be divisible by 8 to pack frames");

    std::string csv = csv_header(ctx, "codebook");
    csv += "index,freq_ghz,target_theta_deg,reference_phase_deg,on_count,frame_file,bitmap_file\n";
    int index = 0;
    auto emit = [&](double ghz, double theta, const BitMap& bits, double dphi) {
        const Frame frame = pack_frame(bits);
        char fname[64], bname[64];
        std::snprintf(fname, sizeof fname, "frame_%03d.hex", index);
        std::snprintf(bname, sizeof bname, "bitmap_%03d.txt", index);
        atomic_write(ctx.out_dir / fname, frame_to_hex(frame) + "\n");
        atomic_write(ctx.out_dir / bname, csv_header(ctx, "codebook") + bitmap_to_text(bits));
        int on = 0;
        for (std::size_t n = 0; n < bits.size(); ++n)
            if (bits[n] == CellState::On) ++on;
        csv += std::to_string(index) + "," + fmt(ghz, "%.2f") + "," + fmt(theta, "%.1f") + "," +
               fmt(dphi, "%.4f") + "," + std::to_string(on) + "," + fname + "," + bname + "\n";
        ++index;
    };

    if (ctx.opts.all_off) {
        emit(ctx.cfg.frequency_ghz.front(), 0.0,
             BitMap(sc.geom.rows(), sc.geom.cols(), CellState::Off), 0.0);
    } else {
        for (double g : ctx.cfg.frequency_ghz) {
            const FreqSpec f(g * 1e9);
            const PhasePair states = sc.model.phase_states(f.hz());
            for (double theta : ctx.cfg.target_theta_deg) {
                const SteeringTarget target(plane_direction(theta));
                BitMap bits(sc.geom.rows(), sc.geom.cols());
                double dphi = sc.reference_phase_deg;
                if (sc.optimize_reference) {
                    const ReferenceOptimum opt = optimize_reference_phase(
                        sc.geom, sc.tx, target, f, sc.model, sc.reference_samples,
                        sc.element_exponent);
                    bits = opt.bits;
                    dphi = opt.reference_phase_deg;
                } else {
                    bits = quantize_map(
                        ideal_phase_map(sc.geom, FeedSpec::near_field(sc.tx.position()), target,
                                        f, dphi),
                        states.on_deg, states.off_deg);
                }
                emit(g, theta, bits, dphi);
            }
        }
    }
    atomic_write(ctx.out_dir / "codebook.csv", csv);
    note(ctx, "codebook: " + std::to_string(index) + " frames");
    return 0;
}

int run_protocol_check(Context& ctx) {
    if (ctx.opts.input_path.empty())
        throw std::runtime_error("protocol-check: needs an input transcript file");
    std::ifstream in(ctx.opts.input_path, std::ios::binary);
    if (!in) throw std::runtime_error("protocol-check: cannot open " + ctx.opts.input_path);

    ProtocolLimits limits;
    if (!ctx.model.is_ideal()) {
        const auto [lo, hi] = ctx.model.frequency_span();
        limits = ProtocolLimits{lo * 1e-9, hi * 1e-9};
    }

    std::string report = csv_header(ctx, "protocol-check");
    int line_no = 0;
    int errors = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const ParseResult r = parse_command(line + "\n", limits);
        if (r.ok()) {
            const char* verb = std::visit(
                [](auto&& c) -> const char* {
                    using T = std::decay_t<decltype(c)>;
                    if constexpr (std::is_same_v<T, SetFrameCmd>) return "SET";
                    else if constexpr (std::is_same_v<T, SteerCmd>) return "STEER";
                    else if constexpr (std::is_same_v<T, FreqCmd>) return "FREQ";
                    else if constexpr (std::is_same_v<T, QueryStateCmd>) return "GET";
                    else return "RST";
                },
                *r.command);
            report += "L" + std::to_string(line_no) + " OK " + verb + "\n";
        } else {
            ++errors;
            report += "L" + std::to_string(line_no) + " ERROR " + to_string(r.error->code) +
                      " offset=" + std::to_string(r.error->offset) + " " + r.error->message + "\n";
        }
    }
    report += "# lines=" + std::to_string(line_no) + " errors=" + std::to_string(errors) + "\n";
    atomic_write(ctx.out_dir / "protocol_check.txt", report);
    note(ctx, "protocol-check: " + std::to_string(line_no) + " lines, " +
                  std::to_string(errors) + " errors");
    return errors == 0 ? 0 : 4;
}

}  // namespace

int dispatch(const std::string& subcommand, const ScenarioConfig& cfg,
             const DispatchOptions& opts) {
    try {
        Context ctx = make_context(cfg, opts);
        if (subcommand == "pattern") return run_pattern(ctx);
        if (subcommand == "sweep-freq") return run_sweep_freq(ctx);
        if (subcommand == "sweep-angle") return run_sweep_angle(ctx);
        if (subcommand == "contrast") return run_contrast(ctx);
        if (subcommand == "band") return run_band(ctx);
        if (subcommand == "codebook") return run_codebook(ctx);
        if (subcommand == "protocol-check") return run_protocol_check(ctx);
        std::cerr << "error: unknown subcommand '" << subcommand << "'\n";
        return 2;
    } catch (const std::exception& e) {
        std::string msg = e.what();
        for (char& c : msg)
            if (c == '\n') c = ' ';
        std::cerr << "error: " << msg << "\n";
        return 1;
    }
}

}  // namespace risbeam
