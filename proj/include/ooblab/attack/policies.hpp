#pragma once

#include "ooblab/attack/observation.hpp"

#include <deque>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace ooblab::attack {

enum class PolicyKind { side_swing, switching, conservative_side_swing, auto_switching, dos };
enum class SwitchRule {
    opposite_direction, // switch once the induced motion turns against the target
    attenuation,        // switch on the first magnitude class below the running peak
};
enum class AttackPhase { profiling, synchronizing, manipulating, adjusting };

const char* to_string(PolicyKind k);
PolicyKind policy_kind_from_string(const std::string& s);
const char* to_string(SwitchRule r);
SwitchRule switch_rule_from_string(const std::string& s);
const char* to_string(AttackPhase p);

struct PolicyConfig {
    PolicyKind policy = PolicyKind::side_swing;
    Direction target = Direction::positive;
    double high = 1.0;           // Ah, drive level in [0, 1]
    double low = 0.0;            // Al
    double step_hz = 1.0;        // F2 - F1
    double frequency_hz = 0.0;   // carrier for side-swing / dos / conservative
    double f1_hz = 0.0;          // switching bracket
    double f2_hz = 0.0;
    SwitchRule switch_rule = SwitchRule::opposite_direction;
    int switch_threshold_class = 1;  // non-invasive: minimum class of an opposite-direction observation
    double switch_threshold = 0.0;   // invasive: sensor units
    double reaction_delay_s = 0.0;
    bool adaptive = false;           // invasive auto-switching: re-center after every two switches
    double assumed_epsilon_hz = 0.0; // side-swing: re-arm after half an alias period when blind at Al (0 = never)
    int desired_level_class = 0;     // conservative side-swing
};

/// Throws ConfigError.
void validate(const PolicyConfig& cfg, const std::string& path = "attacker");

struct DriveCommand {
    double frequency_hz = 0.0;
    double level = 0.0;
    bool operator==(const DriveCommand&) const = default;
};

struct AttackerState {
    double frequency_hz = 0.0;
    double f1_hz = 0.0;
    double f2_hz = 0.0;
    double level = 0.0;
    bool on_f2 = false;
    Direction target = Direction::positive;

    double n0fs_estimate = std::numeric_limits<double>::quiet_NaN();
    int epsilon_sign = 0;
    double epsilon_abs = std::numeric_limits<double>::quiet_NaN();
    AttackPhase phase = AttackPhase::manipulating;

    std::vector<double> switch_times;     // effect times of every frequency switch
    std::vector<std::string> sign_trail;  // synchronization reasoning

    // Measured dwell on each frequency between the two most recent switches (T'1, T'2).
    double last_interval_f1 = std::numeric_limits<double>::quiet_NaN();
    double last_interval_f2 = std::numeric_limits<double>::quiet_NaN();
    int intervals_since_adapt = 0;
    int adaptations = 0;

    // Bookkeeping for the per-observation rules.
    bool high = true;
    bool armed = true;
    int running_peak = 0;
    double effect_time = -std::numeric_limits<double>::infinity();
    double low_since = 0.0;
    bool reached_level = false;
};

/// Initial state for a policy: frequencies from the config, emitting at the high level.
AttackerState initial_state(const PolicyConfig& cfg);

DriveCommand current_drive(const AttackerState& state);

/// Observation delivery time: when the attacker can act on it.
inline double delivery_time(const ActuationObservation& o) { return o.time + o.latency; }

DriveCommand side_swing_step(const PolicyConfig& cfg, AttackerState& state, const ActuationObservation& obs);
DriveCommand switching_step(const PolicyConfig& cfg, AttackerState& state, const ActuationObservation& obs);
DriveCommand conservative_side_swing(const PolicyConfig& cfg, AttackerState& state, const ActuationObservation& obs,
                                     int desired_level_class);
DriveCommand dos_drive(const PolicyConfig& cfg, AttackerState& state);

struct AdaptResult {
    double delta_f = 0.0;
    double ratio = 1.0; // r = T'2 / T'1
    double f1_hz = 0.0;
    double f2_hz = 0.0;
};

/// Re-center the bracket so n0*Fs sits at its midpoint: dF = (r - 1) / (2 (r + 1)) * (F2 - F1).
AdaptResult auto_adapt(const AttackerState& state, double t1, double t2);

/// Reading of the raw sensor stream. Only reachable by policies holding InvasiveAccess.
struct SensorReading {
    double time = 0.0;
    double value = 0.0;
};

/// Capability token for sensor-reading policies. Constructible only with the explicit
/// invasive flag, so non-invasive runs cannot hand sensor data to an attacker.
class InvasiveAccess {
public:
    static InvasiveAccess grant(bool invasive_mode) {
        if (!invasive_mode)
            throw std::logic_error("sensor access requested in non-invasive mode");
        return InvasiveAccess{};
    }

private:
    InvasiveAccess() = default;
};

/// Program-driven Switching on the live sensor value (automatic attack).
DriveCommand auto_switching_step(const PolicyConfig& cfg, AttackerState& state, const SensorReading& reading,
                                 const InvasiveAccess& access);

struct AttackEvent {
    double time_s = 0.0;
    std::string event;
    double frequency_hz = 0.0;
    double amplitude = 0.0;
};

/// Deterministic policy state machine with reaction delay: decisions made at delivery
/// time t take effect at t + reaction_delay.
class Attacker {
public:
    explicit Attacker(PolicyConfig cfg);
    Attacker(PolicyConfig cfg, AttackerState state);

    /// Feed one observation (non-invasive policies).
    void on_observation(const ActuationObservation& obs);
    /// Feed one sensor reading (auto_switching).
    void on_reading(const SensorReading& reading, const InvasiveAccess& access);

    /// Drive in force at time `now`, applying matured decisions.
    DriveCommand drive_at(double now);

    void set_target(Direction d);
    void set_bracket(double f1, double f2);
    void set_frequency(double f);

    const PolicyConfig& config() const noexcept { return cfg_; }
    PolicyConfig& mutable_config() noexcept { return cfg_; }
    const AttackerState& state() const noexcept { return state_; }
    AttackerState& mutable_state() noexcept { return state_; }
    const std::vector<AttackEvent>& events() const noexcept { return events_; }
    void log(double t, std::string event);

private:
    void schedule(double decided_at, const DriveCommand& cmd);

    PolicyConfig cfg_;
    AttackerState state_;
    std::deque<std::pair<double, DriveCommand>> pending_;
    DriveCommand applied_;
    std::vector<AttackEvent> events_;
    std::size_t logged_switches_ = 0;
    int logged_adaptations_ = 0;
};

} // namespace ooblab::attack
