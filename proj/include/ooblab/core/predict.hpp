#pragma once

#include <cstdint>

namespace ooblab::core {

/// Outcome of retuning the carrier from an alias at epsilon_before to one at epsilon_after
/// while the digital phase sits at phase_before.
struct PhasePacingEvent {
    std::int64_t switch_index = 0;
    double phase_before = 0.0;
    double epsilon_before = 0.0;
    double epsilon_after = 0.0;
    bool inverts = false;
    double phase_offset = 0.0; // pi - 2*phase_before wrapped to [0, 2*pi) when inverting, else 0
};

PhasePacingEvent predict_phase_pacing(double epsilon_before, double epsilon_after, double phase_before,
                                      std::int64_t switch_index = 0);

struct CycleHeading {
    double theta = 0.0;      // rad accumulated per alias cycle
    double mean_rate = 0.0;  // rad/s averaged over the cycle
};

/// Side-Swing: high level Ah while the alias points at the target, Al otherwise.
/// theta = (Ah - Al) / (pi |eps|), mean rate = (Ah - Al) / pi, both signed by target_sign.
CycleHeading predict_cycle_heading_sideswing(double high, double low, double epsilon_hz, int target_sign = 1);

/// Switching with |eps1| = |eps2| = eps: theta = 2A / (pi |eps|), mean rate = 2A / pi.
CycleHeading predict_cycle_heading_switching(double amplitude, double epsilon_hz, int target_sign = 1);

} // namespace ooblab::core
