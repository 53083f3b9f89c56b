#include "ooblab/victims/models.hpp"

#include "ooblab/errors.hpp"

#include <cmath>

namespace ooblab::victims {

const char* to_string(VictimKind k) {
    switch (k) {
    case VictimKind::balancer: return "balancer";
    case VictimKind::stabilizer: return "stabilizer";
    case VictimKind::open_loop_motor: return "open_loop_motor";
    case VictimKind::cursor: return "cursor";
    case VictimKind::navigation: return "navigation";
    case VictimKind::motion_wakeup: return "motion_wakeup";
    }
    return "?";
}

VictimKind victim_kind_from_string(const std::string& s) {
    for (auto k : {VictimKind::balancer, VictimKind::stabilizer, VictimKind::open_loop_motor, VictimKind::cursor,
                   VictimKind::navigation, VictimKind::motion_wakeup})
        if (s == to_string(k))
            return k;
    throw ConfigError("", "unknown victim kind '" + s + "'");
}

const char* to_string(SensorKind k) { return k == SensorKind::gyro ? "gyro" : "accelerometer"; }

SensorKind sensor_kind_from_string(const std::string& s) {
    if (s == "gyro")
        return SensorKind::gyro;
    if (s == "accelerometer")
        return SensorKind::accelerometer;
    throw ConfigError("", "unknown sensor kind '" + s + "'");
}

void validate(const VictimModel& m, const std::string& path) {
    if (!(m.kp >= 0.0) || !(m.kd >= 0.0))
        throw ConfigError(path + ".kp", "balancer gains must be nonnegative");
    if (!(m.calibration_rate >= 0.0))
        throw ConfigError(path + ".calibration_rate", "must be nonnegative");
    if (!(m.tilt_fault_rad > 0.0))
        throw ConfigError(path + ".tilt_fault_rad", "must be positive");
    if (!(m.fault_threshold > 0.0))
        throw ConfigError(path + ".fault_threshold", "must be positive");
    if (!(m.window_s > 0.0))
        throw ConfigError(path + ".window_s", "must be positive");
}

StepOutput step_balancer(const VictimModel& m, VictimState& s, double dt) {
    if (!(dt > 0.0))
        throw DomainError("step_balancer: dt must be positive");
    StepOutput out;
    const double command = m.kp * s.heading.theta + m.kd * s.heading.omega;
    s.wheel_speed += command * dt;
    out.actuation = {s.wheel_speed, command};
    if (!s.faulted && std::abs(s.heading.theta) > m.tilt_fault_rad) {
        s.faulted = true;
        out.event = "fall";
    }
    return out;
}

StepOutput step_stabilizer(const VictimModel& m, VictimState& s, double dt, int axis) {
    if (!(dt > 0.0))
        throw DomainError("step_stabilizer: dt must be positive");
    if (axis < 0 || axis > 2)
        throw DomainError("step_stabilizer: axis out of range");
    auto& h = s.heading;
    double pull = 0.0;
    if (m.calibrated_axes[static_cast<std::size_t>(axis)]) {
        pull = m.calibration_rate * h.prev_theta;
        h.theta -= pull * dt;
        h.velocity = h.theta;
    }
    return {{-h.theta, -(h.omega - pull)}, std::nullopt};
}

StepOutput step_open_loop(const VictimModel& m, VictimState& s, double dt) {
    if (!(dt > 0.0))
        throw DomainError("step_open_loop: dt must be positive");
    return {{m.actuation_gain * s.heading.theta, m.actuation_gain * s.heading.omega}, std::nullopt};
}

StepOutput step_victim(const VictimModel& m, VictimState& s, double dt, int axis) {
    switch (m.kind) {
    case VictimKind::balancer: return step_balancer(m, s, dt);
    case VictimKind::stabilizer: return step_stabilizer(m, s, dt, axis);
    case VictimKind::open_loop_motor:
    case VictimKind::cursor:
    case VictimKind::navigation:
    case VictimKind::motion_wakeup: return step_open_loop(m, s, dt);
    }
    return {};
}

std::optional<DosEvent> dos_check(const VictimModel& m, std::span<const double> window) {
    double peak = 0.0;
    for (double v : window)
        peak = std::max(peak, std::abs(v - m.reference));
    if (window.empty() || !(peak >= m.fault_threshold))
        return std::nullopt;
    return DosEvent{m.kind == VictimKind::motion_wakeup ? "wake" : "fault", peak};
}

} // namespace ooblab::victims
