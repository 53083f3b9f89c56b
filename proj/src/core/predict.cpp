#include "ooblab/core/predict.hpp"

#include "ooblab/errors.hpp"

#include <cmath>
#include <numbers>

namespace ooblab::core {

PhasePacingEvent predict_phase_pacing(double epsilon_before, double epsilon_after, double phase_before,
                                      std::int64_t switch_index) {
    if (epsilon_before == 0.0 || epsilon_after == 0.0)
        throw DomainError("predict_phase_pacing: alias frequencies must be nonzero");
    if (!std::isfinite(epsilon_before) || !std::isfinite(epsilon_after) || !std::isfinite(phase_before))
        throw DomainError("predict_phase_pacing: non-finite input");

    PhasePacingEvent ev;
    ev.switch_index = switch_index;
    ev.phase_before = phase_before;
    ev.epsilon_before = epsilon_before;
    ev.epsilon_after = epsilon_after;
    ev.inverts = epsilon_before * epsilon_after < 0.0;
    if (ev.inverts) {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        double off = std::fmod(std::numbers::pi - 2.0 * phase_before, two_pi);
        if (off < 0.0)
            off += two_pi;
        if (off >= two_pi)
            off = 0.0;
        ev.phase_offset = off;
    }
    return ev;
}

CycleHeading predict_cycle_heading_sideswing(double high, double low, double epsilon_hz, int target_sign) {
    if (epsilon_hz == 0.0 || !std::isfinite(epsilon_hz))
        throw DomainError("predict_cycle_heading_sideswing: epsilon must be nonzero");
    if (!(high >= low && low >= 0.0))
        throw DomainError("predict_cycle_heading_sideswing: requires Ah >= Al >= 0");
    const double sign = target_sign < 0 ? -1.0 : 1.0;
    const double mean = (high - low) / std::numbers::pi;
    return {sign * mean / std::abs(epsilon_hz), sign * mean};
}

CycleHeading predict_cycle_heading_switching(double amplitude, double epsilon_hz, int target_sign) {
    if (epsilon_hz == 0.0 || !std::isfinite(epsilon_hz))
        throw DomainError("predict_cycle_heading_switching: epsilon must be nonzero");
    if (!(amplitude > 0.0))
        throw DomainError("predict_cycle_heading_switching: amplitude must be positive");
    const double sign = target_sign < 0 ? -1.0 : 1.0;
    const double mean = 2.0 * amplitude / std::numbers::pi;
    return {sign * mean / std::abs(epsilon_hz), sign * mean};
}

} // namespace ooblab::core
