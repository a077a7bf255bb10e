#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "risbeam/control.hpp"
#include "risbeam/pattern.hpp"
#include "risbeam/sweep.hpp"
#include "risbeam/version.hpp"

namespace py = pybind11;
using namespace risbeam;

namespace {

Vec3 to_vec3(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }
std::array<double, 3> from_vec3(const Vec3& v) { return {v.x, v.y, v.z}; }

Grid2D<Complex> complex_grid(const std::vector<std::vector<Complex>>& rows) {
    if (rows.empty() || rows.front().empty())
        throw std::invalid_argument("gamma: expected a non-empty 2-D list");
    Grid2D<Complex> g(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.front().size())
            throw std::invalid_argument("gamma: ragged rows");
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            g.at(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    }
    return g;
}

py::dict metrics_dict(const PatternMetrics& m) {
    py::dict d;
    d["peak_theta_deg"] = m.peak_theta_deg;
    d["peak_phi_deg"] = m.peak_phi_deg;
    d["peak_dbi"] = m.peak_directivity_dbi;
    d["peak_gain_dbi"] = m.peak_gain_dbi ? py::cast(*m.peak_gain_dbi) : py::none();
    d["sll_db"] = m.sll_db ? py::cast(*m.sll_db) : py::none();
    d["hpbw_theta_deg"] = m.hpbw_theta_deg ? py::cast(*m.hpbw_theta_deg) : py::none();
    d["hpbw_phi_deg"] = m.hpbw_phi_deg ? py::cast(*m.hpbw_phi_deg) : py::none();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "One-bit reflective-surface beam synthesis core";
    m.attr("__version__") = kVersion;

    m.def("wavelength", &wavelength, py::arg("frequency_hz"));
    m.def("wavenumber", &wavenumber, py::arg("frequency_hz"));
    m.def("far_field_distance", &far_field_distance, py::arg("aperture_diagonal_m"),
          py::arg("frequency_hz"));

    py::class_<FreqSpec>(m, "FreqSpec")
        .def(py::init<double>(), py::arg("frequency_hz"))
        .def_property_readonly("hz", &FreqSpec::hz)
        .def_property_readonly("ghz", &FreqSpec::ghz)
        .def_property_readonly("wavelength", &FreqSpec::wavelength)
        .def_property_readonly("wavenumber", &FreqSpec::wavenumber);

    py::class_<ArrayGeometry>(m, "ArrayGeometry")
        .def(py::init<int, int, double>(), py::arg("rows"), py::arg("cols"), py::arg("pitch_m"))
        .def_property_readonly("rows", &ArrayGeometry::rows)
        .def_property_readonly("cols", &ArrayGeometry::cols)
        .def_property_readonly("pitch", &ArrayGeometry::pitch)
        .def("position",
             [](const ArrayGeometry& g, int i, int j) { return from_vec3(g.position(i, j)); },
             py::arg("i"), py::arg("j"), "Element position, 1-based indices")
        .def("element_positions",
             [](const ArrayGeometry& g) {
                 std::vector<std::array<double, 3>> out;
                 for (const Vec3& v : g.element_positions()) out.push_back(from_vec3(v));
                 return out;
             })
        .def_property_readonly("aperture_diagonal", &ArrayGeometry::aperture_diagonal);

    py::enum_<CellState>(m, "CellState").value("ON", CellState::On).value("OFF", CellState::Off);

    py::class_<BandReport>(m, "BandReport")
        .def_readonly("found", &BandReport::found)
        .def_readonly("f_low_hz", &BandReport::f_low_hz)
        .def_readonly("f_high_hz", &BandReport::f_high_hz)
        .def_readonly("fractional", &BandReport::fractional);

    py::class_<UnitCellModel>(m, "UnitCellModel")
        .def_static("ideal", &UnitCellModel::ideal, py::arg("phase_on_deg") = 0.0,
                    py::arg("magnitude_on") = 1.0, py::arg("magnitude_off") = 1.0)
        .def_static("from_csv", [](const std::string& text) { return UnitCellModel::from_csv(text); })
        .def_static("from_csv_file", &UnitCellModel::from_csv_file)
        .def("to_csv", &UnitCellModel::to_csv)
        .def_property_readonly("is_ideal", &UnitCellModel::is_ideal)
        .def("frequency_span", &UnitCellModel::frequency_span)
        .def("reflection",
             [](const UnitCellModel& mdl, CellState s, double f, double inc) {
                 const ReflectionValue v = mdl.reflection(s, f, inc);
                 return py::make_tuple(v.gamma, v.angle_clamped);
             },
             py::arg("state"), py::arg("frequency_hz"), py::arg("incidence_deg") = 0.0)
        .def("phase_states",
             [](const UnitCellModel& mdl, double f) {
                 const PhasePair p = mdl.phase_states(f);
                 return py::make_tuple(p.on_deg, p.off_deg);
             },
             py::arg("frequency_hz"))
        .def("operating_band", &UnitCellModel::operating_band,
             py::arg("phase_tolerance_deg") = 20.0, py::arg("magnitude_floor_db") = -2.8);

    py::class_<FeedSpec>(m, "FeedSpec")
        .def_static("near_field",
                    [](const std::array<double, 3>& p) { return FeedSpec::near_field(to_vec3(p)); })
        .def_static("far_field",
                    [](const std::array<double, 3>& d) { return FeedSpec::far_field(to_vec3(d)); });

    py::class_<SteeringTarget>(m, "SteeringTarget")
        .def(py::init([](const std::array<double, 3>& d) { return SteeringTarget(to_vec3(d)); }))
        .def_static("from_angles", &SteeringTarget::from_angles, py::arg("theta_deg"),
                    py::arg("phi_deg") = 0.0)
        .def_property_readonly("theta_deg", &SteeringTarget::theta_deg)
        .def_property_readonly("phi_deg", &SteeringTarget::phi_deg);

    py::class_<PhaseMap>(m, "PhaseMap")
        .def_property_readonly("frequency_hz", [](const PhaseMap& p) { return p.frequency_hz; })
        .def_property_readonly("reference_phase_deg",
                               [](const PhaseMap& p) { return p.reference_phase_deg; })
        .def("at", [](const PhaseMap& p, int i, int j) { return p.phase_deg.at(i, j); },
             py::arg("row"), py::arg("col"), "Phase in degrees, 0-based indices")
        .def_property_readonly("shape", [](const PhaseMap& p) {
            return py::make_tuple(p.phase_deg.rows(), p.phase_deg.cols());
        });

    py::class_<BitMap>(m, "BitMap")
        .def("at", [](const BitMap& b, int i, int j) { return b.at(i, j); }, py::arg("row"),
             py::arg("col"))
        .def_property_readonly("shape", [](const BitMap& b) {
            return py::make_tuple(b.rows(), b.cols());
        });

    m.def("bitmap_to_text", &bitmap_to_text);
    m.def("bitmap_from_text", [](const std::string& t) { return bitmap_from_text(t); });

    m.def("ideal_phase_map", &ideal_phase_map, py::arg("geom"), py::arg("feed"), py::arg("target"),
          py::arg("freq"), py::arg("reference_phase_deg") = 0.0);
    m.def("quantize_map", &quantize_map, py::arg("phase_map"), py::arg("phase_on_deg"),
          py::arg("phase_off_deg"));

    py::class_<HornSpec>(m, "HornSpec")
        .def(py::init([](const std::array<double, 3>& p, const std::array<double, 3>& b,
                         double q) { return HornSpec(to_vec3(p), to_vec3(b), q); }),
             py::arg("position"), py::arg("boresight"), py::arg("exponent"))
        .def_static("from_gain",
                    [](const std::array<double, 3>& p, double g) {
                        return HornSpec::from_gain(to_vec3(p), g);
                    },
                    py::arg("position"), py::arg("gain_dbi"))
        .def_property_readonly("exponent", &HornSpec::exponent)
        .def_property_readonly("peak_gain_dbi", &HornSpec::peak_gain_dbi)
        .def("gain", &HornSpec::gain, py::arg("alpha_rad"));

    py::class_<PatternGrid>(m, "PatternGrid")
        .def(py::init([](double t, double p) { return PatternGrid{t, p}; }),
             py::arg("theta_step_deg") = 0.5, py::arg("phi_step_deg") = 1.0);

    py::class_<Illumination>(m, "Illumination")
        .def("amplitude", [](const Illumination& il, int i, int j) { return il.amplitude.at(i, j); })
        .def("incidence_deg",
             [](const Illumination& il, int i, int j) { return il.incidence_deg.at(i, j); });

    m.def("illuminate", &illuminate, py::arg("horn"), py::arg("geom"), py::arg("freq"));
    m.def("plane_wave_illumination",
          [](const std::array<double, 3>& s, const ArrayGeometry& g, const FreqSpec& f) {
              return plane_wave_illumination(to_vec3(s), g, f);
          },
          py::arg("toward_source"), py::arg("geom"), py::arg("freq"));

    py::class_<Pattern>(m, "Pattern")
        .def_property_readonly("radiated_power", &Pattern::radiated_power)
        .def("directivity_dbi", &Pattern::directivity_dbi, py::arg("itheta"), py::arg("iphi"))
        .def("field", [](const Pattern& p, int it, int ip) { return p.field().at(it, ip); });

    m.def("scattered_pattern",
          [](const ArrayGeometry& g, const std::vector<std::vector<Complex>>& gamma,
             const Illumination& il, const FreqSpec& f, const PatternGrid& grid, double qe) {
              return scattered_pattern(g, complex_grid(gamma), il, f, grid, qe);
          },
          py::arg("geom"), py::arg("gamma"), py::arg("illumination"), py::arg("freq"),
          py::arg("grid") = PatternGrid{}, py::arg("element_exponent") = 1.0);

    m.def("reflection_grid",
          [](const UnitCellModel& mdl, const BitMap& bits, const Illumination& il,
             const FreqSpec& f) {
              const ReflectionGrid g = reflection_grid(mdl, bits, il, f);
              std::vector<std::vector<Complex>> rows(g.gamma.rows());
              for (int i = 0; i < g.gamma.rows(); ++i)
                  for (int j = 0; j < g.gamma.cols(); ++j) rows[i].push_back(g.gamma.at(i, j));
              return py::make_tuple(rows, g.clamped_cells);
          },
          py::arg("model"), py::arg("bits"), py::arg("illumination"), py::arg("freq"));

    m.def("compute_metrics", [](const Pattern& p) { return metrics_dict(compute_metrics(p)); });

    m.def("link_s21",
          [](const HornSpec& tx, const HornSpec& rx, const ArrayGeometry& g,
             const std::vector<std::vector<Complex>>& gamma, const FreqSpec& f, double qe) {
              return link_s21(tx, rx, g, complex_grid(gamma), f, qe);
          },
          py::arg("tx"), py::arg("rx"), py::arg("geom"), py::arg("gamma"), py::arg("freq"),
          py::arg("element_exponent") = 1.0);

    m.def("pack_frame", [](const BitMap& b) { return py::bytes(
              reinterpret_cast<const char*>(pack_frame(b).data()),
              static_cast<py::ssize_t>(b.size() / 8)); },
          py::arg("bits"));
    m.def("unpack_frame",
          [](const py::bytes& data, int rows, int cols) {
              const std::string s = data;
              return unpack_frame(Frame(s.begin(), s.end()), rows, cols);
          },
          py::arg("frame"), py::arg("rows"), py::arg("cols"));
    m.def("frame_to_hex", [](const py::bytes& data) {
        const std::string s = data;
        return frame_to_hex(Frame(s.begin(), s.end()));
    });
    m.def("frame_from_hex", [](const std::string& hex) {
        const Frame f = frame_from_hex(hex);
        return py::bytes(reinterpret_cast<const char*>(f.data()),
                         static_cast<py::ssize_t>(f.size()));
    });

    m.def("encode_command",
          [](const std::string& verb, py::object arg1, py::object arg2) {
              Command cmd;
              if (verb == "RST") cmd = ResetCmd{};
              else if (verb == "GET") cmd = QueryStateCmd{};
              else if (verb == "STEER")
                  cmd = SteerCmd{arg1.cast<double>(), arg2.is_none() ? 0.0 : arg2.cast<double>()};
              else if (verb == "FREQ") cmd = FreqCmd{arg1.cast<double>()};
              else if (verb == "SET") {
                  const std::string s = arg1.cast<py::bytes>();
                  cmd = SetFrameCmd{Frame(s.begin(), s.end())};
              } else
                  throw std::invalid_argument("unknown verb");
              return encode_command(cmd);
          },
          py::arg("verb"), py::arg("arg1") = py::none(), py::arg("arg2") = py::none());

    m.def("parse_command", [](const std::string& line) {
        const ParseResult r = parse_command(line);
        py::dict d;
        d["ok"] = r.ok();
        if (r.ok()) {
            std::visit(
                [&](auto&& c) {
                    using T = std::decay_t<decltype(c)>;
                    if constexpr (std::is_same_v<T, SetFrameCmd>) {
                        d["verb"] = "SET";
                        d["frame"] = py::bytes(reinterpret_cast<const char*>(c.frame.data()),
                                               static_cast<py::ssize_t>(c.frame.size()));
                    } else if constexpr (std::is_same_v<T, SteerCmd>) {
                        d["verb"] = "STEER";
                        d["theta_deg"] = c.theta_deg;
                        d["phi_deg"] = c.phi_deg;
                    } else if constexpr (std::is_same_v<T, FreqCmd>) {
                        d["verb"] = "FREQ";
                        d["ghz"] = c.ghz;
                    } else if constexpr (std::is_same_v<T, QueryStateCmd>) {
                        d["verb"] = "GET";
                    } else {
                        d["verb"] = "RST";
                    }
                },
                *r.command);
        } else {
            d["error"] = to_string(r.error->code);
            d["offset"] = r.error->offset;
            d["message"] = r.error->message;
        }
        return d;
    });
}
