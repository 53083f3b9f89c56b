#include "ooblab/attack/policies.hpp"

#include "ooblab/errors.hpp"

#include <cmath>

namespace ooblab::attack {

const char* to_string(PolicyKind k) {
    switch (k) {
    case PolicyKind::side_swing: return "side_swing";
    case PolicyKind::switching: return "switching";
    case PolicyKind::conservative_side_swing: return "conservative_side_swing";
    case PolicyKind::auto_switching: return "auto_switching";
    case PolicyKind::dos: return "dos";
    }
    return "?";
}

PolicyKind policy_kind_from_string(const std::string& s) {
    for (auto k : {PolicyKind::side_swing, PolicyKind::switching, PolicyKind::conservative_side_swing,
                   PolicyKind::auto_switching, PolicyKind::dos})
        if (s == to_string(k))
            return k;
    throw ConfigError("", "unknown policy '" + s + "'");
}

const char* to_string(SwitchRule r) {
    return r == SwitchRule::opposite_direction ? "opposite_direction" : "attenuation";
}

SwitchRule switch_rule_from_string(const std::string& s) {
    if (s == "opposite_direction")
        return SwitchRule::opposite_direction;
    if (s == "attenuation")
        return SwitchRule::attenuation;
    throw ConfigError("", "unknown switch rule '" + s + "'");
}

const char* to_string(AttackPhase p) {
    switch (p) {
    case AttackPhase::profiling: return "profiling";
    case AttackPhase::synchronizing: return "synchronizing";
    case AttackPhase::manipulating: return "manipulating";
    case AttackPhase::adjusting: return "adjusting";
    }
    return "?";
}

namespace {

bool switching_like(PolicyKind k) { return k == PolicyKind::switching || k == PolicyKind::auto_switching; }

} // namespace

void validate(const PolicyConfig& c, const std::string& path) {
    if (!(c.low >= 0.0) || !(c.high >= c.low))
        throw ConfigError(path + ".high", "drive levels need high >= low >= 0");
    if (!(c.step_hz > 0.0))
        throw ConfigError(path + ".step_hz", "step must be positive");
    if (!(c.reaction_delay_s >= 0.0))
        throw ConfigError(path + ".reaction_delay_s", "must be nonnegative");
    if (!(c.assumed_epsilon_hz >= 0.0))
        throw ConfigError(path + ".assumed_epsilon_hz", "must be nonnegative");
    if (c.target == Direction::none && c.policy != PolicyKind::dos)
        throw ConfigError(path + ".target", "target direction must be pos or neg");
    if (switching_like(c.policy)) {
        if (!(c.f1_hz > 0.0))
            throw ConfigError(path + ".f1_hz", "switching needs a positive F1");
        if (c.f2_hz != 0.0 && std::abs(c.f2_hz - c.f1_hz - c.step_hz) > 1e-9)
            throw ConfigError(path + ".f2_hz", "F2 must equal F1 + step");
    } else if (!(c.frequency_hz > 0.0)) {
        throw ConfigError(path + ".frequency_hz", "carrier frequency must be positive");
    }
}

AttackerState initial_state(const PolicyConfig& c) {
    AttackerState s;
    s.target = c.target;
    s.level = c.high;
    if (switching_like(c.policy)) {
        s.f1_hz = c.f1_hz;
        s.f2_hz = c.f1_hz + c.step_hz;
        s.frequency_hz = s.f1_hz;
    } else {
        s.frequency_hz = c.frequency_hz;
        s.f1_hz = c.frequency_hz;
        s.f2_hz = c.frequency_hz + c.step_hz;
    }
    if (c.policy == PolicyKind::conservative_side_swing && c.desired_level_class == 0)
        s.level = 0.0;
    return s;
}

DriveCommand current_drive(const AttackerState& s) { return {s.frequency_hz, s.level}; }

DriveCommand side_swing_step(const PolicyConfig& c, AttackerState& s, const ActuationObservation& obs) {
    const double now = delivery_time(obs);
    if (obs.direction == s.target) {
        s.high = true;
    } else if (!s.high && c.assumed_epsilon_hz > 0.0 && now - s.low_since >= 0.5 / c.assumed_epsilon_hz) {
        // Half an alias period at Al: it has swung back toward the target, whatever
        // slow motion (a victim's own recalibration) shows meanwhile.
        s.high = true;
    } else if (obs.direction == opposite(s.target) && obs.magnitude_class >= c.switch_threshold_class) {
        if (s.high)
            s.low_since = now;
        s.high = false;
    }
    s.level = s.high ? c.high : c.low;
    return current_drive(s);
}

namespace {

void record_interval(AttackerState& s, double effect_time) {
    if (!s.switch_times.empty()) {
        const double dwell = effect_time - s.switch_times.back();
        (s.on_f2 ? s.last_interval_f2 : s.last_interval_f1) = dwell;
        ++s.intervals_since_adapt;
    }
    s.switch_times.push_back(effect_time);
}

void toggle(const PolicyConfig& c, AttackerState& s, double now) {
    const double effect = now + c.reaction_delay_s;
    record_interval(s, effect);
    s.on_f2 = !s.on_f2;
    s.frequency_hz = s.on_f2 ? s.f2_hz : s.f1_hz;
    s.effect_time = effect;
    s.armed = false;
    s.running_peak = 0;
}

} // namespace

DriveCommand switching_step(const PolicyConfig& c, AttackerState& s, const ActuationObservation& obs) {
    s.level = c.high;
    // Observations of motion that predates the last switch say nothing about the new tone.
    if (obs.time < s.effect_time)
        return current_drive(s);
    const double now = delivery_time(obs);
    if (obs.direction == s.target) {
        s.armed = true;
        if (c.switch_rule == SwitchRule::attenuation) {
            if (obs.magnitude_class < s.running_peak) {
                toggle(c, s, now);
                return current_drive(s);
            }
            s.running_peak = obs.magnitude_class;
        }
    } else if (obs.direction == opposite(s.target) && s.armed && obs.magnitude_class >= c.switch_threshold_class) {
        toggle(c, s, now);
    }
    return current_drive(s);
}

DriveCommand conservative_side_swing(const PolicyConfig& c, AttackerState& s, const ActuationObservation& obs,
                                     int desired_level_class) {
    const int gap = desired_level_class - obs.level_class;
    if (gap == 0) {
        s.reached_level = true;
        s.level = 0.0;
        s.high = false;
        return current_drive(s);
    }
    s.target = gap > 0 ? Direction::positive : Direction::negative;
    // Reuse the Side-Swing gate toward the remaining gap.
    PolicyConfig toward = c;
    toward.target = s.target;
    return side_swing_step(toward, s, obs);
}

DriveCommand dos_drive(const PolicyConfig& c, AttackerState& s) {
    s.level = c.high;
    return current_drive(s);
}

AdaptResult auto_adapt(const AttackerState& s, double t1, double t2) {
    if (!(t1 > 0.0) || !std::isfinite(t1))
        throw DomainError("auto_adapt: T'1 must be positive");
    if (!(t2 > 0.0) || !std::isfinite(t2))
        throw DomainError("auto_adapt: T'2 must be positive");
    AdaptResult r;
    r.ratio = t2 / t1;
    r.delta_f = (r.ratio - 1.0) / (2.0 * (r.ratio + 1.0)) * (s.f2_hz - s.f1_hz);
    r.f1_hz = s.f1_hz + r.delta_f;
    r.f2_hz = s.f2_hz + r.delta_f;
    return r;
}

DriveCommand auto_switching_step(const PolicyConfig& c, AttackerState& s, const SensorReading& reading,
                                 const InvasiveAccess&) {
    s.level = c.high;
    if (reading.time < s.effect_time)
        return current_drive(s);
    const double along = sign_of(s.target) * reading.value;
    if (along > c.switch_threshold) {
        s.armed = true;
    } else if (s.armed && along < -c.switch_threshold) {
        toggle(c, s, reading.time);
        if (c.adaptive && s.intervals_since_adapt >= 2 && std::isfinite(s.last_interval_f1) &&
            std::isfinite(s.last_interval_f2)) {
            const auto a = auto_adapt(s, s.last_interval_f1, s.last_interval_f2);
            s.f1_hz = a.f1_hz;
            s.f2_hz = a.f2_hz;
            s.frequency_hz = s.on_f2 ? s.f2_hz : s.f1_hz;
            s.n0fs_estimate = 0.5 * (s.f1_hz + s.f2_hz);
            s.intervals_since_adapt = 0;
            ++s.adaptations;
        }
    }
    return current_drive(s);
}

Attacker::Attacker(PolicyConfig cfg) : Attacker(cfg, initial_state(cfg)) {}

Attacker::Attacker(PolicyConfig cfg, AttackerState state)
    : cfg_(std::move(cfg)), state_(std::move(state)), applied_(current_drive(state_)) {
    validate(cfg_);
}

void Attacker::schedule(double decided_at, const DriveCommand& cmd) {
    const DriveCommand last = pending_.empty() ? applied_ : pending_.back().second;
    if (cmd == last)
        return;
    pending_.emplace_back(decided_at + cfg_.reaction_delay_s, cmd);
}

void Attacker::on_observation(const ActuationObservation& obs) {
    DriveCommand cmd;
    switch (cfg_.policy) {
    case PolicyKind::side_swing: cmd = side_swing_step(cfg_, state_, obs); break;
    case PolicyKind::switching: cmd = switching_step(cfg_, state_, obs); break;
    case PolicyKind::conservative_side_swing: {
        const bool was_reached = state_.reached_level;
        const bool was_silent = state_.level == 0.0;
        cmd = conservative_side_swing(cfg_, state_, obs, cfg_.desired_level_class);
        if (!was_reached && state_.reached_level)
            log(delivery_time(obs), "hold");
        else if (was_reached && was_silent && state_.level > 0.0)
            log(delivery_time(obs), "heading_decayed");
        break;
    }
    case PolicyKind::dos: cmd = dos_drive(cfg_, state_); break;
    case PolicyKind::auto_switching:
        throw UnsupportedError("auto_switching consumes sensor readings, not observations");
    }
    schedule(delivery_time(obs), cmd);
    while (logged_switches_ < state_.switch_times.size())
        events_.push_back({state_.switch_times[logged_switches_++], "switch",
                           (state_.on_f2 ? state_.f2_hz : state_.f1_hz), state_.level});
}

void Attacker::on_reading(const SensorReading& reading, const InvasiveAccess& access) {
    if (cfg_.policy != PolicyKind::auto_switching)
        throw UnsupportedError("only auto_switching reads the sensor");
    const DriveCommand cmd = auto_switching_step(cfg_, state_, reading, access);
    schedule(reading.time, cmd);
    while (logged_switches_ < state_.switch_times.size())
        events_.push_back({state_.switch_times[logged_switches_++], "switch", cmd.frequency_hz, cmd.level});
    if (state_.adaptations != logged_adaptations_) {
        logged_adaptations_ = state_.adaptations;
        events_.push_back({reading.time + cfg_.reaction_delay_s, "adapt", state_.frequency_hz, state_.level});
    }
}

DriveCommand Attacker::drive_at(double now) {
    while (!pending_.empty() && pending_.front().first <= now) {
        applied_ = pending_.front().second;
        pending_.pop_front();
    }
    return applied_;
}

void Attacker::set_target(Direction d) {
    if (d == Direction::none)
        throw DomainError("set_target: direction must be pos or neg");
    cfg_.target = d;
    state_.target = d;
}

void Attacker::set_bracket(double f1, double f2) {
    if (!(f1 > 0.0) || !(f2 > f1))
        throw DomainError("set_bracket: need 0 < F1 < F2");
    cfg_.f1_hz = f1;
    cfg_.f2_hz = f2;
    cfg_.step_hz = f2 - f1;
    state_.f1_hz = f1;
    state_.f2_hz = f2;
    state_.frequency_hz = state_.on_f2 ? f2 : f1;
    pending_.clear();
    applied_ = current_drive(state_);
}

void Attacker::set_frequency(double f) {
    if (!(f > 0.0))
        throw DomainError("set_frequency: frequency must be positive");
    cfg_.frequency_hz = f;
    state_.frequency_hz = f;
    pending_.clear();
    applied_ = current_drive(state_);
}

void Attacker::log(double t, std::string event) {
    events_.push_back({t, std::move(event), state_.frequency_hz, state_.level});
}

} // namespace ooblab::attack
