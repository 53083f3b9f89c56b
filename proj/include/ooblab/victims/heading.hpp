#pragma once

#include "ooblab/core/trace.hpp"

#include <span>

namespace ooblab::victims {

enum class IntegrationRule { rectangular, trapezoidal };

/// Accumulated heading on the attacked axis. For accelerometer rigs the same
/// accumulator carries velocity (m/s) and `velocity` mirrors `theta`.
struct HeadingState {
    double theta = 0.0;
    double prev_theta = 0.0; // theta before the most recent sample
    double omega = 0.0;      // last (baseline-corrected) sample
    double velocity = 0.0;
    double omega_max = 0.0;  // peak |omega| seen
    double elapsed_s = 0.0;
    long samples = 0;

    double mean_rate() const;
};

/// One firmware-style update: theta += omega * dt (rectangular) or the trapezoid
/// with the previous sample.
void integrate_sample(HeadingState& state, double omega, double dt, IntegrationRule rule = IntegrationRule::rectangular);

/// Integrate a gapless trace using the per-sample instantaneous rates (dt = 1/Fs_i).
/// `baseline` is subtracted first (e.g. gravity on an upward accelerometer axis).
HeadingState integrate_heading(std::span<const core::TraceSample> samples, std::span<const double> rates,
                               IntegrationRule rule = IntegrationRule::rectangular, double baseline = 0.0);

} // namespace ooblab::victims
