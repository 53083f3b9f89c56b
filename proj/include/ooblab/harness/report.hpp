#pragma once

#include "ooblab/attack/profiling.hpp"
#include "ooblab/harness/scenario.hpp"
#include "ooblab/harness/simulation.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ooblab::harness {

struct PhaseTimings {
    double profiling_s = 0.0;
    double sync_s = 0.0;
    double manipulate_s = 0.0;
};

/// Summary of one run. omega_mean = |theta_final| / active_duration_s.
struct RunReport {
    std::string scenario;
    std::string variant = "base";
    std::uint64_t seed = 0;
    std::string axis = "x";
    std::string units = "rad"; // m/s for accelerometer rigs
    double theta_final = 0.0;
    double omega_max = 0.0;
    double omega_mean = 0.0;
    double ratio = 0.0;
    double active_duration_s = 0.0;
    std::size_t samples = 0;
    std::size_t switches = 0;
    int adaptations = 0;
    double final_frequency_hz = 0.0;
    double f1_hz = 0.0;
    double f2_hz = 0.0;
    double initial_phase = 0.0;
    double sensitivity = 0.0; // solved ks when the channel was calibrated
    std::vector<SimEvent> events;
    PhaseTimings timings;
    std::optional<double> defense_attenuation_db;
    std::optional<attack::ProfileResult> profile;
    bool synchronized = false;
    std::vector<std::string> sync_trail;
    bool calibration_reproduction = false;
    std::string note;
};

nlohmann::json report_to_json(const RunReport& report);

/// Named scalar used by scenario checks: theta_final, abs_theta, omega_max, omega_mean,
/// ratio, active_duration_s, switches, adaptations, or events:<kind> (a count).
double report_metric(const RunReport& report, const std::string& metric);

struct CheckResult {
    Check check;
    double value = 0.0;
    bool pass = false;
};

std::vector<CheckResult> evaluate_checks(const RunReport& report, const std::vector<Check>& checks);

/// `time_s,theta_rad,omega_rad_s,actuation,event`
void write_telemetry_csv(std::ostream& out, const std::vector<TelemetryRow>& rows);
/// `time_s,event,frequency_hz,amplitude`
void write_attack_events_csv(std::ostream& out, const std::vector<attack::AttackEvent>& events);

} // namespace ooblab::harness
