#pragma once

#include "ooblab/attack/observation.hpp"
#include "ooblab/attack/policies.hpp"
#include "ooblab/attack/profiling.hpp"
#include "ooblab/channel/acoustic.hpp"
#include "ooblab/core/sampler.hpp"
#include "ooblab/victims/heading.hpp"
#include "ooblab/victims/models.hpp"

#include <json.hpp>

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace ooblab::harness {

inline constexpr const char* kSchema = "oob-lab/1";

enum class ChannelKind { acoustic, vibration };
enum class ObserverKind {
    actuation, // what an onlooker sees of the victim's actuation
    ideal,     // zero-latency sign of the alias itself (analytic fixture)
};
enum class AttackMode { non_invasive, invasive };

const char* to_string(ChannelKind k);
const char* to_string(ObserverKind k);
const char* to_string(AttackMode m);
AttackMode attack_mode_from_string(const std::string& s);

/// Solve ks so that a full-level tone at `frequency_hz` induces `peak_output`.
struct ChannelCalibration {
    double frequency_hz = 0.0;
    double peak_output = 0.0;
};

struct ChannelConfig {
    ChannelKind kind = ChannelKind::acoustic;
    channel::SoundSource source;
    double distance_m = 0.5;
    channel::ResonantFront front;
    std::optional<ChannelCalibration> calibration;
    channel::VibrationChannel vibration;
};

struct RigConfig {
    victims::SensorKind kind = victims::SensorKind::gyro;
    int axis = 0;
    core::SamplerConfig sampler;
    double initial_phase = 0.0;
    bool random_phase = false; // draw phi0 from the seed instead
    double baseline = 0.0;     // reading at rest on the attacked axis (gravity for an upward accel axis)
    double benign_amplitude = 0.0;
    double benign_frequency_hz = 0.0;
    victims::IntegrationRule integration = victims::IntegrationRule::rectangular;
};

struct ObserverConfig {
    ObserverKind kind = ObserverKind::actuation;
    attack::ObservationModel model;
};

/// Timed change to the running policy.
struct ScheduleEntry {
    double at_s = 0.0;
    std::optional<attack::Direction> target;
    std::optional<int> desired_level_class;
    std::optional<bool> emit; // false silences the attacker
};

struct SyncConfig {
    bool enabled = false;
    double start_frequency_hz = 0.0;
    attack::SyncOptions options;
};

struct ProfileConfig {
    bool enabled = false;
    attack::ProfileOptions options;
};

struct AttackerConfig {
    attack::PolicyConfig policy;
    double start_s = 0.0;
    double stop_s = std::numeric_limits<double>::infinity();
    std::vector<ScheduleEntry> schedule;
    SyncConfig sync;
    ProfileConfig profile;
};

struct NamedDefense {
    std::string name;
    victims::DefenseConfig defense;
};

struct FsSweep {
    double start_hz = 0.0;
    double stop_hz = 0.0;
    double step_hz = 0.1;
    double dwell_s = 20.0;
    double level = 1.0;
    double dc_threshold_hz = 0.05;
};

struct Check {
    std::string metric;
    double target = 0.0;
    std::optional<double> rel_tol;
    std::optional<double> abs_tol;
};

struct ReportOptions {
    double telemetry_interval_s = 0.01;
    bool write_trace = true;
    bool calibration_reproduction = false; // numbers were fitted, not predicted
    std::string note;
};

struct Scenario {
    std::string name;
    std::string description;
    std::uint64_t seed = 1;
    double duration_s = 10.0;
    double tick_s = 0.001;
    AttackMode mode = AttackMode::non_invasive;
    ChannelConfig channel;
    RigConfig rig;
    victims::VictimModel victim;
    ObserverConfig observer;
    AttackerConfig attacker;
    std::vector<NamedDefense> defense_matrix;
    std::optional<FsSweep> fs_sweep;
    std::vector<Check> checks;
    ReportOptions report;
};

/// Throws ConfigError with the offending field path.
void validate(const Scenario& scenario);

/// Parse one scenario object (no variants). Unknown keys are rejected.
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& scenario);

/// A scenario file may carry "variants": {name: merge-patch}. Returns the base run
/// (named "base") followed by each patched variant, in key order.
std::vector<std::pair<std::string, Scenario>> expand_variants(const nlohmann::json& document);

nlohmann::json read_json_file(const std::string& path);
std::vector<std::pair<std::string, Scenario>> load_scenario_file(const std::string& path);

} // namespace ooblab::harness
