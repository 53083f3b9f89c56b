#pragma once

#include <optional>
#include <span>
#include <vector>

namespace ooblab::core {

struct ZeroCrossing {
    double time_s;
    int direction; // +1 rising, -1 falling
};

/// Sign changes of (value - baseline), located by linear interpolation between the
/// bracketing samples. Samples exactly at the baseline are skipped.
std::vector<ZeroCrossing> find_zero_crossings(std::span<const double> times, std::span<const double> values,
                                              double baseline = 0.0);

/// Frequency magnitude from the mean spacing of zero crossings: (k-1) / (2 * span).
/// Empty when fewer than two crossings exist.
std::optional<double> zero_crossing_frequency(std::span<const double> times, std::span<const double> values,
                                              double baseline = 0.0);

} // namespace ooblab::core
