#include "ooblab/attack/policies.hpp"
#include "ooblab/channel/acoustic.hpp"
#include "ooblab/core/alias.hpp"
#include "ooblab/core/digitize.hpp"
#include "ooblab/core/predict.hpp"
#include "ooblab/errors.hpp"
#include "ooblab/harness/experiments.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ooblab;
using nlohmann::json;

// Scenarios and reports cross the boundary as JSON text; the Python package
// wraps them in dicts.
namespace {

harness::Scenario parse(const std::string& text) { return harness::scenario_from_json(json::parse(text)); }

std::string run_scenario(const std::string& text, const std::string& variant) {
    return harness::report_to_json(harness::run(parse(text), variant).report).dump();
}

void run_to_dir(const std::string& text, const std::string& dir, const std::string& variant) {
    harness::write_outputs(harness::run(parse(text), variant), dir);
}

std::vector<std::pair<std::string, std::string>> load_scenario_file(const std::string& path) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [name, sc] : harness::load_scenario_file(path))
        out.emplace_back(name, harness::scenario_to_json(sc).dump());
    return out;
}

py::dict estimate_sample_rate(const std::string& text) {
    const auto e = harness::estimate_sample_rate(parse(text));
    py::dict d;
    d["fs_hz"] = e.fs_hz;
    d["dc_aliases"] = e.dc_aliases;
    d["residual_hz"] = e.residual_hz;
    d["drift_flagged"] = e.drift_flagged;
    return d;
}

py::list sweep_defenses(const std::string& text) {
    const auto sc = parse(text);
    if (sc.defense_matrix.empty())
        throw ConfigError("defense_matrix", "at least one defense is required");
    py::list rows;
    for (const auto& r : harness::sweep_defense_matrix(sc, sc.defense_matrix)) {
        py::dict d;
        d["defense"] = r.name;
        d["abs_theta"] = r.abs_theta;
        d["attenuation_db"] = r.attenuation_db;
        d["relative"] = r.relative;
        rows.append(d);
    }
    return rows;
}

py::tuple digitize(double frequency_hz, double amplitude, double sample_rate_hz, double duration_s,
                   double initial_phase, int resolution_bits, double full_scale, double drift_hz_per_s) {
    core::SamplerConfig s;
    s.nominal_rate_hz = sample_rate_hz;
    s.resolution_bits = resolution_bits;
    s.full_scale = full_scale;
    if (drift_hz_per_s != 0.0)
        s.drift = core::DriftModel::linear(drift_hz_per_s);
    const auto tr = core::digitize(core::ToneProgram::single(frequency_hz, amplitude, initial_phase), s, duration_s);
    return py::make_tuple(tr.times(), tr.values());
}

py::dict auto_adapt(double f1_hz, double f2_hz, double t1, double t2) {
    attack::AttackerState st;
    st.f1_hz = f1_hz;
    st.f2_hz = f2_hz;
    const auto r = attack::auto_adapt(st, t1, t2);
    py::dict d;
    d["delta_f"] = r.delta_f;
    d["ratio"] = r.ratio;
    d["f1_hz"] = r.f1_hz;
    d["f2_hz"] = r.f2_hz;
    return d;
}

} // namespace

PYBIND11_MODULE(_ooblab, m) {
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<RangeError>(m, "RangeError", PyExc_ValueError);
    py::register_exception<UnsupportedError>(m, "UnsupportedError", PyExc_RuntimeError);
    py::register_exception<SyncTimeout>(m, "SyncTimeout", PyExc_RuntimeError);
    py::register_exception<EstimationError>(m, "EstimationError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const json::exception& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    m.def("alias_decompose", [](double f, double fs) {
        const auto a = core::alias_decompose(f, fs);
        return py::make_tuple(a.n, a.epsilon);
    }, py::arg("frequency_hz"), py::arg("sample_rate_hz"));
    m.def("drift_deviation", &core::drift_deviation, py::arg("n"), py::arg("delta_fs_hz"));
    m.def("digitize", &digitize, py::arg("frequency_hz"), py::arg("amplitude"), py::arg("sample_rate_hz"),
          py::arg("duration_s"), py::arg("initial_phase") = 0.0, py::arg("resolution_bits") = 0,
          py::arg("full_scale") = 1e9, py::arg("drift_hz_per_s") = 0.0);

    m.def("predict_sideswing", [](double high, double low, double eps) {
        const auto c = core::predict_cycle_heading_sideswing(high, low, eps);
        return py::make_tuple(c.theta, c.mean_rate);
    }, py::arg("high"), py::arg("low"), py::arg("epsilon_hz"));
    m.def("predict_switching", [](double a, double eps) {
        const auto c = core::predict_cycle_heading_switching(a, eps);
        return py::make_tuple(c.theta, c.mean_rate);
    }, py::arg("amplitude"), py::arg("epsilon_hz"));
    m.def("predict_phase_pacing", [](double e1, double e2, double phase) {
        const auto p = core::predict_phase_pacing(e1, e2, phase);
        py::dict d;
        d["inverts"] = p.inverts;
        d["phase_offset"] = p.phase_offset;
        return d;
    }, py::arg("epsilon_before"), py::arg("epsilon_after"), py::arg("phase_before"));
    m.def("auto_adapt", &auto_adapt, py::arg("f1_hz"), py::arg("f2_hz"), py::arg("t1"), py::arg("t2"));

    m.def("combine_coherent_sources", [](std::vector<double> levels) {
        return channel::combine_coherent_sources(levels);
    }, py::arg("levels_db"));
    m.def("spl_at_distance", [](double spl_ref_db, double ref_m, double distance_m, int n_sources) {
        channel::SoundSource s;
        s.spl_ref_db = spl_ref_db;
        s.reference_distance_m = ref_m;
        s.n_sources = n_sources;
        return channel::spl_at_distance(s, 0.0, distance_m);
    }, py::arg("spl_ref_db"), py::arg("reference_distance_m"), py::arg("distance_m"), py::arg("n_sources") = 1);

    m.def("load_scenario_file", &load_scenario_file, py::arg("path"));
    m.def("run_scenario", &run_scenario, py::arg("scenario_json"), py::arg("variant") = "base",
          py::call_guard<py::gil_scoped_release>());
    m.def("run_to_dir", &run_to_dir, py::arg("scenario_json"), py::arg("out_dir"), py::arg("variant") = "base",
          py::call_guard<py::gil_scoped_release>());
    m.def("estimate_sample_rate", &estimate_sample_rate, py::arg("scenario_json"));
    m.def("sweep_defenses", &sweep_defenses, py::arg("scenario_json"));
}
