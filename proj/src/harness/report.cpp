#include "ooblab/harness/report.hpp"

#include "ooblab/errors.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace ooblab::harness {

using nlohmann::json;

json report_to_json(const RunReport& r) {
    json events = json::array();
    for (const auto& e : r.events)
        events.push_back({{"time_s", e.time_s}, {"source", e.source}, {"kind", e.kind}, {"detail", e.detail}});
    json j = {{"scenario", r.scenario},
              {"variant", r.variant},
              {"seed", r.seed},
              {"axis", r.axis},
              {"units", r.units},
              {"theta_final", r.theta_final},
              {"omega_max", r.omega_max},
              {"omega_mean", r.omega_mean},
              {"ratio", r.ratio},
              {"active_duration_s", r.active_duration_s},
              {"samples", r.samples},
              {"switches", r.switches},
              {"adaptations", r.adaptations},
              {"final_frequency_hz", r.final_frequency_hz},
              {"f1_hz", r.f1_hz},
              {"f2_hz", r.f2_hz},
              {"initial_phase", r.initial_phase},
              {"sensitivity", r.sensitivity},
              {"timings",
               {{"profiling_s", r.timings.profiling_s},
                {"sync_s", r.timings.sync_s},
                {"manipulate_s", r.timings.manipulate_s}}},
              {"defense_attenuation_db", r.defense_attenuation_db ? json(*r.defense_attenuation_db) : json(nullptr)},
              {"synchronized", r.synchronized},
              {"sync_trail", r.sync_trail},
              {"calibration_reproduction", r.calibration_reproduction},
              {"note", r.note},
              {"events", events}};
    if (r.profile)
        j["profile"] = {{"affected", r.profile->affected},
                        {"band_lo_hz", r.profile->band_lo_hz},
                        {"band_hi_hz", r.profile->band_hi_hz},
                        {"candidates", r.profile->candidates}};
    return j;
}

double report_metric(const RunReport& r, const std::string& m) {
    if (m == "theta_final")
        return r.theta_final;
    if (m == "abs_theta")
        return std::abs(r.theta_final);
    if (m == "omega_max")
        return r.omega_max;
    if (m == "omega_mean")
        return r.omega_mean;
    if (m == "ratio")
        return r.ratio;
    if (m == "active_duration_s")
        return r.active_duration_s;
    if (m == "switches")
        return static_cast<double>(r.switches);
    if (m == "adaptations")
        return r.adaptations;
    if (m.rfind("events:", 0) == 0) {
        const std::string kind = m.substr(7);
        double n = 0.0;
        for (const auto& e : r.events)
            n += e.kind == kind ? 1.0 : 0.0;
        return n;
    }
    throw ConfigError("checks.metric", "unknown metric '" + m + "'");
}

std::vector<CheckResult> evaluate_checks(const RunReport& r, const std::vector<Check>& checks) {
    std::vector<CheckResult> out;
    for (const auto& c : checks) {
        CheckResult cr{c, report_metric(r, c.metric), true};
        const double err = std::abs(cr.value - c.target);
        if (c.abs_tol && !(err <= *c.abs_tol))
            cr.pass = false;
        if (c.rel_tol && !(err <= *c.rel_tol * std::abs(c.target)))
            cr.pass = false;
        out.push_back(cr);
    }
    return out;
}

void write_telemetry_csv(std::ostream& out, const std::vector<TelemetryRow>& rows) {
    out << "time_s,theta_rad,omega_rad_s,actuation,event\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.6f,%.9g,%.9g,%.9g,", r.time_s, r.theta, r.omega, r.actuation);
        out << buf << r.event << '\n';
    }
}

void write_attack_events_csv(std::ostream& out, const std::vector<attack::AttackEvent>& events) {
    out << "time_s,event,frequency_hz,amplitude\n";
    char buf[160];
    for (const auto& e : events) {
        std::snprintf(buf, sizeof buf, "%.6f,%s,%.6f,%.9g\n", e.time_s, e.event.c_str(), e.frequency_hz, e.amplitude);
        out << buf;
    }
}

} // namespace ooblab::harness
