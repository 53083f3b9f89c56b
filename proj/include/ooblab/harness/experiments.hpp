#pragma once

#include "ooblab/harness/report.hpp"
#include "ooblab/harness/scenario.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace ooblab::harness {

struct RunOutput {
    RunReport report;
    std::vector<core::TraceSample> trace;
    std::vector<TelemetryRow> telemetry;
    std::vector<attack::AttackEvent> attack_events;
};

/// Profile (on an identical unit), synchronize, then manipulate until duration_s.
RunOutput run(const Scenario& scenario, const std::string& variant = "base");

/// trace.csv, telemetry.csv, attack_events.csv and report.json under `dir`.
void write_outputs(const RunOutput& output, const std::filesystem::path& dir);

struct SampleRateEstimate {
    double fs_hz = 0.0;
    std::vector<double> dc_aliases; // centers of DC-like clusters, ascending
    double residual_hz = 0.0;       // worst |alias - k * fs|
    bool drift_flagged = false;
};

/// Step a vibration/acoustic tone over scenario.fs_sweep, find DC-like aliases and fit
/// fs = sum(k f_k) / sum(k^2). Throws EstimationError when no DC alias appears.
SampleRateEstimate estimate_sample_rate(const Scenario& scenario);

struct DefenseRow {
    std::string name;
    double abs_theta = 0.0;
    double attenuation_db = 0.0;
    double relative = 1.0; // abs_theta / baseline abs_theta
};

/// One run per defense with the base scenario's seed; the first row is the undefended baseline.
std::vector<DefenseRow> sweep_defense_matrix(const Scenario& base, const std::vector<NamedDefense>& defenses);

} // namespace ooblab::harness
