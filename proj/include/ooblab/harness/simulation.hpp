#pragma once

#include "ooblab/attack/policies.hpp"
#include "ooblab/attack/profiling.hpp"
#include "ooblab/core/oscillator.hpp"
#include "ooblab/core/trace.hpp"
#include "ooblab/harness/scenario.hpp"
#include "ooblab/victims/defense.hpp"

#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ooblab::harness {

struct SimEvent {
    double time_s = 0.0;
    std::string source; // victim | attacker | harness
    std::string kind;
    std::string detail;
};

struct TelemetryRow {
    double time_s = 0.0;
    double theta = 0.0;
    double omega = 0.0;
    double actuation = 0.0;
    std::string event;
};

/// Mixes the scenario seed with a stream tag so every random source is derived from one seed.
std::uint64_t derive_seed(std::uint64_t scenario_seed, std::uint64_t stream, std::uint64_t explicit_seed = 0);

/// One scenario advanced tick by tick in the fixed order
/// channel -> sampler -> victim -> observer -> attacker.
///
/// The drive comes from the scenario's attacker policy unless an override is set
/// (synchronization probes, profiling, or a live operator).
class Simulation {
public:
    explicit Simulation(const Scenario& scenario);
    ~Simulation();
    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    const Scenario& scenario() const noexcept { return sc_; }
    double time() const noexcept { return static_cast<double>(tick_) * sc_.tick_s; }
    bool finished() const noexcept { return time() >= sc_.duration_s - 0.5 * sc_.tick_s; }

    void step();
    void run_until(double t);

    // Drive control.
    void set_override(std::optional<attack::DriveCommand> drive) { override_ = drive; }
    const std::optional<attack::DriveCommand>& override_drive() const noexcept { return override_; }
    attack::DriveCommand applied_drive() const noexcept { return applied_; }
    /// Replace the policy's state (after synchronization) and hand control back to it.
    void start_policy(const attack::AttackerState& state);
    attack::Attacker& attacker() noexcept { return *attacker_; }
    const attack::Attacker& attacker() const noexcept { return *attacker_; }
    bool policy_active() const noexcept { return policy_active_; }
    void set_policy_active(bool on) { policy_active_ = on; }

    /// Put the victim back at rest without touching the sampler clock.
    void reset_victim();

    // Observability.
    const victims::VictimState& victim() const noexcept { return victim_; }
    double last_sample_value() const noexcept { return last_value_; }
    double last_actuation() const noexcept { return last_actuation_; }
    double amplitude_at(double frequency_hz) const;
    double solved_sensitivity() const noexcept { return front_.sensitivity; }
    double initial_phase() const noexcept { return phase0_; }
    double active_duration() const noexcept { return active_s_; }
    std::int64_t samples_taken() const noexcept { return samples_; }

    /// Observations delivered since the last call (only when collection is enabled).
    void collect_observations(bool on) { collect_ = on; }
    std::vector<attack::ActuationObservation> take_observations();

    const std::vector<core::TraceSample>& trace() const noexcept { return trace_; }
    const std::vector<TelemetryRow>& telemetry() const noexcept { return telemetry_; }
    const std::vector<SimEvent>& events() const noexcept { return events_; }
    const std::vector<attack::AttackEvent>& attack_events() const noexcept { return attack_log_; }
    void note(const std::string& source, const std::string& kind, const std::string& detail = {});

private:
    class Input;
    attack::DriveCommand choose_drive(double now);
    void apply_schedule(double now);
    void on_sample(const core::TraceSample& s, double rate);
    void emit_telemetry(double now);
    void log_drive_change(double now, const attack::DriveCommand& d);

    Scenario sc_;
    channel::ResonantFront front_;
    double phase0_ = 0.0;
    std::unique_ptr<victims::SensorFrontEnd> fe_;
    std::unique_ptr<Input> input_;
    core::Oscillator osc_;
    double amp_cache_f_ = -1.0;
    double amp_cache_ = 0.0;

    std::unique_ptr<attack::Attacker> attacker_;
    std::optional<attack::InvasiveAccess> access_;
    bool policy_active_ = true;
    bool emitting_ = true;
    std::size_t schedule_pos_ = 0;
    std::optional<attack::DriveCommand> override_;
    attack::DriveCommand applied_{};
    bool drive_logged_ = false;
    std::size_t attacker_events_seen_ = 0;

    victims::VictimState victim_;
    double last_value_ = 0.0;
    double last_actuation_ = 0.0;
    std::vector<double> dos_window_;
    double dos_window_start_ = 0.0;

    std::deque<attack::ActuationObservation> in_flight_;
    std::deque<attack::SensorReading> readings_;
    bool collect_ = false;
    std::vector<attack::ActuationObservation> delivered_;

    std::int64_t tick_ = 0;
    std::int64_t samples_ = 0;
    double active_s_ = 0.0;
    double next_telemetry_ = 0.0;
    std::string pending_event_;

    std::vector<core::TraceSample> trace_;
    std::vector<TelemetryRow> telemetry_;
    std::vector<SimEvent> events_;
    std::vector<attack::AttackEvent> attack_log_;
};

/// The live device as the attacker sees it during probing.
class SimulationOracle final : public attack::DeviceOracle {
public:
    explicit SimulationOracle(Simulation& sim) : sim_(sim) {}
    std::vector<attack::ActuationObservation> observe(double frequency_hz, double level, double seconds) override;
    void settle() override { sim_.reset_victim(); }
    double elapsed_s() const override { return spent_; }

private:
    Simulation& sim_;
    double spent_ = 0.0;
};

} // namespace ooblab::harness
