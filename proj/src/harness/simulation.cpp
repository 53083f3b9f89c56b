#include "ooblab/harness/simulation.hpp"

#include "ooblab/errors.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace ooblab::harness {

std::uint64_t derive_seed(std::uint64_t scenario_seed, std::uint64_t stream, std::uint64_t explicit_seed) {
    // splitmix64 finalizer
    std::uint64_t z = scenario_seed + 0x9E3779B97F4A7C15ULL * (stream + 1) + explicit_seed * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Simulation::Input final : public victims::AnalogInput {
public:
    Input(const RigConfig& rig, const core::Oscillator& osc) : rig_(rig), osc_(osc) {}

    double benign(long double t) const override {
        double v = rig_.baseline;
        if (rig_.benign_amplitude != 0.0)
            v += rig_.benign_amplitude *
                 std::sin(2.0 * std::numbers::pi * rig_.benign_frequency_hz * static_cast<double>(t));
        return v;
    }
    double injected(long double t) const override { return amplitude == 0.0 ? 0.0 : amplitude * osc_.carrier_at(t); }
    double injected_frequency() const override { return osc_.frequency(); }

    double amplitude = 0.0;

private:
    const RigConfig& rig_;
    const core::Oscillator& osc_;
};

Simulation::Simulation(const Scenario& scenario) : sc_(scenario) {
    validate(sc_);
    front_ = sc_.channel.front;
    if (sc_.channel.kind == ChannelKind::acoustic && sc_.channel.calibration) {
        front_.sensitivity = channel::solve_sensitivity(sc_.channel.source, sc_.channel.distance_m,
                                                        sc_.channel.calibration->frequency_hz, front_,
                                                        sc_.channel.calibration->peak_output);
    }
    if (sc_.rig.random_phase) {
        std::mt19937_64 rng(derive_seed(sc_.seed, 3));
        phase0_ = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
    } else {
        phase0_ = sc_.rig.initial_phase;
    }

    core::SamplerConfig sampler = sc_.rig.sampler;
    sampler.drift.seed = derive_seed(sc_.seed, 1, sampler.drift.seed);
    if (sampler.defense)
        sampler.defense->seed = derive_seed(sc_.seed, 2, sampler.defense->seed);
    fe_ = std::make_unique<victims::SensorFrontEnd>(sampler);

    attacker_ = std::make_unique<attack::Attacker>(sc_.attacker.policy);
    if (sc_.attacker.policy.policy == attack::PolicyKind::auto_switching)
        access_ = attack::InvasiveAccess::grant(sc_.mode == AttackMode::invasive);

    osc_ = core::Oscillator(attacker_->state().frequency_hz, phase0_);
    input_ = std::make_unique<Input>(sc_.rig, osc_);
    applied_ = {osc_.frequency(), 0.0};
}

Simulation::~Simulation() = default;

double Simulation::amplitude_at(double f) const {
    if (sc_.channel.kind == ChannelKind::vibration)
        return channel::vibration_drive(sc_.channel.vibration, f, 1.0).amplitude;
    return channel::induced_amplitude(sc_.channel.source, sc_.channel.distance_m, f, front_);
}

void Simulation::note(const std::string& source, const std::string& kind, const std::string& detail) {
    events_.push_back({time(), source, kind, detail});
    if (!pending_event_.empty())
        pending_event_ += ';';
    pending_event_ += kind;
}

void Simulation::start_policy(const attack::AttackerState& state) {
    attack::PolicyConfig cfg = attacker_->config();
    cfg.frequency_hz = state.frequency_hz;
    cfg.f1_hz = state.f1_hz;
    cfg.f2_hz = state.f2_hz;
    cfg.step_hz = state.f2_hz - state.f1_hz;
    cfg.target = state.target;
    attacker_ = std::make_unique<attack::Attacker>(cfg, state);
    attacker_events_seen_ = 0;
    override_.reset();
    policy_active_ = true;
    in_flight_.clear();
    readings_.clear();
}

void Simulation::reset_victim() {
    victim_ = {};
    in_flight_.clear();
    readings_.clear();
    dos_window_.clear();
    dos_window_start_ = time();
}

std::vector<attack::ActuationObservation> Simulation::take_observations() {
    std::vector<attack::ActuationObservation> out;
    out.swap(delivered_);
    return out;
}

void Simulation::apply_schedule(double now) {
    const auto& sched = sc_.attacker.schedule;
    while (schedule_pos_ < sched.size() && sched[schedule_pos_].at_s <= now + 1e-12) {
        const auto& e = sched[schedule_pos_++];
        if (e.target) {
            attacker_->set_target(*e.target);
            note("harness", "retarget", attack::to_string(*e.target));
        }
        if (e.desired_level_class) {
            attacker_->mutable_config().desired_level_class = *e.desired_level_class;
            attacker_->mutable_state().reached_level = false;
            note("harness", "desired_level", std::to_string(*e.desired_level_class));
        }
        if (e.emit) {
            emitting_ = *e.emit;
            note("harness", *e.emit ? "emit_on" : "emit_off");
        }
    }
}

attack::DriveCommand Simulation::choose_drive(double now) {
    if (override_)
        return *override_;
    const bool window = now >= sc_.attacker.start_s && now < sc_.attacker.stop_s;
    attack::DriveCommand d = attacker_->drive_at(now);
    if (policy_active_ && window && emitting_) {
        active_s_ += sc_.tick_s;
        return d;
    }
    return {d.frequency_hz, 0.0};
}

void Simulation::log_drive_change(double now, const attack::DriveCommand& d) {
    if (drive_logged_ && d == applied_)
        return;
    const char* kind = "level";
    if (!drive_logged_)
        kind = "drive";
    else if (d.frequency_hz != applied_.frequency_hz)
        kind = "switch";
    else if (d.level == 0.0)
        kind = "silence";
    attack_log_.push_back({now, kind, d.frequency_hz, d.level});
    drive_logged_ = true;
}

void Simulation::step() {
    const double now = time();
    const double end = static_cast<double>(tick_ + 1) * sc_.tick_s;
    apply_schedule(now);

    // channel
    const attack::DriveCommand drive = choose_drive(now);
    if (drive.frequency_hz != osc_.frequency())
        osc_.retune(now, drive.frequency_hz);
    if (drive.frequency_hz != amp_cache_f_) {
        amp_cache_f_ = drive.frequency_hz;
        amp_cache_ = amplitude_at(drive.frequency_hz);
    }
    input_->amplitude = amp_cache_ * drive.level;
    log_drive_change(now, drive);
    applied_ = drive;

    // sampler -> victim -> observer
    while (fe_->next_time() < static_cast<long double>(end)) {
        double rate = 0.0;
        const auto s = fe_->sample(*input_, &rate);
        on_sample(s, rate);
    }

    // observer -> attacker
    const bool feed = !override_ && policy_active_ && now >= sc_.attacker.start_s && now < sc_.attacker.stop_s;
    while (!in_flight_.empty() && attack::delivery_time(in_flight_.front()) <= end + 1e-12) {
        const auto obs = in_flight_.front();
        in_flight_.pop_front();
        if (collect_)
            delivered_.push_back(obs);
        if (feed && !access_)
            attacker_->on_observation(obs);
    }
    while (!readings_.empty()) {
        if (feed && access_)
            attacker_->on_reading(readings_.front(), *access_);
        readings_.pop_front();
    }
    const auto& aev = attacker_->events();
    for (; attacker_events_seen_ < aev.size(); ++attacker_events_seen_) {
        const auto& e = aev[attacker_events_seen_];
        if (e.event == "switch")
            continue; // the drive log records the switch when it takes effect
        attack_log_.push_back(e);
        note("attacker", e.event);
    }

    ++tick_;
    emit_telemetry(end);
}

void Simulation::on_sample(const core::TraceSample& s, double rate) {
    ++samples_;
    if (sc_.report.write_trace)
        trace_.push_back(s);
    last_value_ = s.value;
    const double dt = 1.0 / rate;
    const double omega = s.value - sc_.victim.reference;
    victims::integrate_sample(victim_.heading, omega, dt, sc_.rig.integration);
    const auto out = victims::step_victim(sc_.victim, victim_, dt, sc_.rig.axis);
    last_actuation_ = out.actuation.level;
    if (out.event)
        note("victim", *out.event);

    if (std::isfinite(sc_.victim.fault_threshold)) {
        dos_window_.push_back(s.value);
        if (s.time_s - dos_window_start_ >= sc_.victim.window_s) {
            if (auto ev = victims::dos_check(sc_.victim, dos_window_)) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "peak=%.6g", ev->peak);
                note("victim", ev->kind, buf);
                victim_.awake = victim_.awake || ev->kind == "wake";
                victim_.faulted = victim_.faulted || ev->kind == "fault";
            }
            dos_window_.clear();
            dos_window_start_ = s.time_s;
        }
    }

    attack::ActuationObservation obs;
    if (sc_.observer.kind == ObserverKind::ideal) {
        attack::ObservationModel m = sc_.observer.model;
        m.latency_s = 0.0;
        m.polarity = 1.0;
        const double alias = amp_cache_ * attacker_->config().high * osc_.carrier_at(s.time_s);
        obs = attack::observe(m, {out.actuation.level, alias}, s.time_s);
    } else {
        obs = attack::observe(sc_.observer.model, out.actuation, s.time_s);
    }
    in_flight_.push_back(obs);
    if (access_)
        readings_.push_back({s.time_s, omega});
}

void Simulation::emit_telemetry(double now) {
    const double dt = sc_.report.telemetry_interval_s;
    while (next_telemetry_ <= now + 1e-12) {
        telemetry_.push_back({next_telemetry_, victim_.heading.theta, victim_.heading.omega, last_actuation_,
                              std::move(pending_event_)});
        pending_event_.clear();
        next_telemetry_ = static_cast<double>(telemetry_.size()) * dt;
    }
}

void Simulation::run_until(double t) {
    while (time() < t - 0.5 * sc_.tick_s)
        step();
}

std::vector<attack::ActuationObservation> SimulationOracle::observe(double frequency_hz, double level, double seconds) {
    if (!(seconds > 0.0))
        throw DomainError("observe: window must be positive");
    sim_.collect_observations(true);
    sim_.take_observations();
    sim_.set_override(attack::DriveCommand{frequency_hz, level});
    const double end = sim_.time() + seconds;
    while (sim_.time() < end - 0.5 * sim_.scenario().tick_s)
        sim_.step();
    spent_ += seconds;
    return sim_.take_observations();
}

} // namespace ooblab::harness
