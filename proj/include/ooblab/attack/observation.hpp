#pragma once

#include <string>
#include <vector>

namespace ooblab::attack {

enum class Direction : int { negative = -1, none = 0, positive = 1 };

inline int sign_of(Direction d) { return static_cast<int>(d); }
inline Direction opposite(Direction d) { return static_cast<Direction>(-static_cast<int>(d)); }
const char* to_string(Direction d);      // "pos" / "neg" / "none"
Direction direction_from_string(const std::string& s);

/// What a victim physically does, before anyone looks at it.
/// `level` is the persistent actuation (motor speed, gimbal angle, cursor position);
/// `rate` is its rate of change, the motion an onlooker perceives.
struct Actuation {
    double level = 0.0;
    double rate = 0.0;
};

/// The only signal a non-invasive attacker receives: a coarse, possibly delayed
/// reading of the induced actuation.
struct ActuationObservation {
    double time = 0.0;          // when the actuation happened
    Direction direction = Direction::none;
    int magnitude_class = 0;    // 0 = below the first bin
    double latency = 0.0;       // delay between `time` and delivery
    int level_class = 0;        // signed coarse class of the persistent actuation
};

/// How actuations are turned into observations.
struct ObservationModel {
    std::vector<double> bins{0.05, 0.5, 1.0, 2.0, 4.0}; // ascending |rate| thresholds
    double polarity = 1.0;   // reverse-mapping sign: +1 if actuation follows the sensor, -1 if it opposes it
    double latency_s = 0.0;
    double level_bin = 0.1;  // width of one level class
};

/// Throws ConfigError on unsorted or non-positive bins, negative latency.
void validate(const ObservationModel& model, const std::string& path = "observer");

ActuationObservation observe(const ObservationModel& model, const Actuation& actuation, double time);

} // namespace ooblab::attack
