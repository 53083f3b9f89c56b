#include "ooblab/core/oscillator.hpp"

#include "ooblab/errors.hpp"

#include <cmath>
#include <numbers>

namespace ooblab::core {

Oscillator::Oscillator(double frequency_hz, double initial_phase)
    : frequency_(frequency_hz), initial_phase_(initial_phase) {
    if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz))
        throw DomainError("Oscillator: frequency must be positive");
}

void Oscillator::retune(long double t, double frequency_hz) {
    if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz))
        throw DomainError("Oscillator: frequency must be positive");
    if (frequency_hz == frequency_)
        return;
    anchor_cycles_ = cycles_at(t);
    anchor_time_ = t;
    frequency_ = frequency_hz;
}

long double Oscillator::cycles_at(long double t) const {
    const long double c = anchor_cycles_ + static_cast<long double>(frequency_) * (t - anchor_time_);
    return c - std::floor(c);
}

double Oscillator::carrier_at(long double t) const {
    constexpr long double two_pi = 2.0L * std::numbers::pi_v<long double>;
    return static_cast<double>(std::sin(two_pi * cycles_at(t) + static_cast<long double>(initial_phase_)));
}

} // namespace ooblab::core
