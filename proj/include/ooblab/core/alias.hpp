#pragma once

#include <cstdint>

namespace ooblab::core {

/// Decomposition F = n*Fs + epsilon with -Fs/2 < epsilon <= Fs/2.
/// epsilon is the frequency at which the sampled stream sees the tone.
struct AliasResult {
    std::int64_t n = 0;
    double epsilon = 0.0;
};

AliasResult alias_decompose(double frequency_hz, double sample_rate_hz);

/// Shift of the alias frequency caused by a sample-rate drift: -n * delta_fs.
double drift_deviation(std::int64_t n, double delta_fs_hz);

} // namespace ooblab::core
