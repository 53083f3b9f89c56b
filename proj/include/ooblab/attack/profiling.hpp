#pragma once

#include "ooblab/attack/observation.hpp"
#include "ooblab/attack/policies.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ooblab::attack {

/// A device the attacker can emit at and watch. Holds no sensor access.
class DeviceOracle {
public:
    virtual ~DeviceOracle() = default;
    /// Emit a steady tone for `seconds` and return what could be seen meanwhile.
    virtual std::vector<ActuationObservation> observe(double frequency_hz, double level, double seconds) = 0;
    /// Bring the device back to rest (profiling uses an identical, balanced unit per probe).
    virtual void settle() {}
    /// Simulated time spent on the device so far.
    virtual double elapsed_s() const = 0;
};

struct ProfileOptions {
    double sweep_lo_hz = 0.0;
    double sweep_hi_hz = 0.0;
    double coarse_step_hz = 10.0;
    double fine_step_hz = 1.0;
    double start_offset_hz = 0.0; // in [0, coarse_step)
    double window_s = 2.0;
    double level = 1.0;
};

struct ProfileResult {
    bool affected = false;
    double band_lo_hz = 0.0;
    double band_hi_hz = 0.0;
    std::vector<double> candidates; // probed F with observed |eps| < 1 Hz
};

ProfileResult profile_resonance(DeviceOracle& device, const ProfileOptions& options);

/// |eps| from the spacing of direction alternations: consecutive changes are half an
/// alias period apart. nullopt with fewer than two changes.
std::optional<double> estimate_epsilon(std::span<const ActuationObservation> observations);

struct SyncOptions {
    PolicyKind policy = PolicyKind::side_swing;
    double budget_s = 60.0;
    double coarse_step_hz = 1.0;
    double fine_step_hz = 0.1;
    double window_s = 1.0;
    double max_window_s = 6.0;
    int min_changes = 4;          // alternations to collect before trusting an estimate
    double level = 1.0;
    double target_epsilon_hz = 1.0; // side-swing: done below this
    double min_epsilon_hz = 0.2;    // side-swing: DC-like aliases cannot swing
    double step_hz = 1.0;           // switching bracket width
};

/// Drive the state toward n0*Fs using only observed alternation rates and the gradient-sign rule.
/// Throws SyncTimeout past the budget and UnsupportedError when the start tone has no effect.
AttackerState synchronize(AttackerState state, DeviceOracle& device, const SyncOptions& options);

} // namespace ooblab::attack
