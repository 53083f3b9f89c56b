#pragma once

#include "ooblab/attack/observation.hpp"
#include "ooblab/victims/heading.hpp"

#include <array>
#include <limits>
#include <optional>
#include <span>
#include <string>

namespace ooblab::victims {

enum class SensorKind { gyro, accelerometer };
enum class VictimKind { balancer, stabilizer, open_loop_motor, cursor, navigation, motion_wakeup };

const char* to_string(VictimKind k);
VictimKind victim_kind_from_string(const std::string& s);
const char* to_string(SensorKind k);
SensorKind sensor_kind_from_string(const std::string& s);

/// Control-loop parameters. Only the fields relevant to `kind` are read.
struct VictimModel {
    VictimKind kind = VictimKind::open_loop_motor;

    // balancer: command = kp * tilt + kd * tilt_rate on the (spoofed) gyro-derived tilt.
    // kd = 2 sqrt(kp) makes the linearized loop critically damped.
    double kp = 25.0;
    double kd = 10.0;
    double tilt_fault_rad = std::numeric_limits<double>::infinity();

    // stabilizer: heading pulled toward the gravity reference at this rate (1/s).
    double calibration_rate = 0.5;
    std::array<bool, 3> calibrated_axes{true, true, false};

    // open-loop kinds: actuation = gain * theta.
    double actuation_gain = 1.0;

    // dos_check: windowed peak |sample - reference| compared with >=.
    double fault_threshold = std::numeric_limits<double>::infinity();
    double window_s = 1.0;

    // Benign reading the firmware subtracts before integrating (gravity on an upward accel axis).
    double reference = 0.0;
};

void validate(const VictimModel& model, const std::string& path = "victim");

struct VictimState {
    HeadingState heading;
    double wheel_speed = 0.0;
    bool faulted = false;
    bool awake = false;
};

struct StepOutput {
    attack::Actuation actuation;
    std::optional<std::string> event;
};

/// Balancer with its wheels lifted: the tilt estimate comes from the integrated gyro
/// and the PD command accelerates the wheels.
StepOutput step_balancer(const VictimModel& model, VictimState& state, double dt);

/// Gimbal tracks -theta; on calibrated axes theta relaxes toward zero at calibration_rate.
/// Call after integrate_sample(): the pull uses the pre-sample heading so the fixed point
/// under a constant rate w is exactly w / calibration_rate.
StepOutput step_stabilizer(const VictimModel& model, VictimState& state, double dt, int axis);

/// Motor speed / cursor / orientation as a pure function of theta, no calibration.
StepOutput step_open_loop(const VictimModel& model, VictimState& state, double dt);

/// Dispatch on model.kind.
StepOutput step_victim(const VictimModel& model, VictimState& state, double dt, int axis);

struct DosEvent {
    std::string kind; // "wake" or "fault"
    double peak = 0.0;
};

/// Fires when the window's peak |sample - reference| reaches model.fault_threshold.
std::optional<DosEvent> dos_check(const VictimModel& model, std::span<const double> window);

} // namespace ooblab::victims
