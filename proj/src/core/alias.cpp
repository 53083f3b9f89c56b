#include "ooblab/core/alias.hpp"

#include "ooblab/errors.hpp"

#include <cmath>

namespace ooblab::core {

AliasResult alias_decompose(double frequency_hz, double sample_rate_hz) {
    if (!std::isfinite(frequency_hz) || !std::isfinite(sample_rate_hz))
        throw DomainError("alias_decompose: inputs must be finite");
    if (frequency_hz <= 0.0 || sample_rate_hz <= 0.0)
        throw DomainError("alias_decompose: frequency and sample rate must be positive");

    auto n = static_cast<std::int64_t>(std::ceil(frequency_hz / sample_rate_hz - 0.5));
    if (n < 0)
        n = 0;
    double eps = frequency_hz - static_cast<double>(n) * sample_rate_hz;
    // The ceil above can land one off when F/Fs - 1/2 rounds across an integer.
    const double half = 0.5 * sample_rate_hz;
    if (eps > half) {
        ++n;
        eps = frequency_hz - static_cast<double>(n) * sample_rate_hz;
    } else if (eps <= -half && n > 0) {
        --n;
        eps = frequency_hz - static_cast<double>(n) * sample_rate_hz;
    }
    return {n, eps};
}

double drift_deviation(std::int64_t n, double delta_fs_hz) {
    if (n < 0)
        throw DomainError("drift_deviation: n must be nonnegative");
    return -static_cast<double>(n) * delta_fs_hz;
}

} // namespace ooblab::core
