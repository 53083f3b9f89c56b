#pragma once

namespace ooblab::core {

/// Phase-continuous tone generator retuned in place, the streaming counterpart of a
/// phase-continuous ToneProgram. Times must be non-decreasing across retune() calls.
class Oscillator {
public:
    explicit Oscillator(double frequency_hz = 1.0, double initial_phase = 0.0);

    void retune(long double t, double frequency_hz);
    double frequency() const noexcept { return frequency_; }
    double initial_phase() const noexcept { return initial_phase_; }

    /// Fractional cycles in [0, 1) at time t (t >= last retune time).
    long double cycles_at(long double t) const;
    double carrier_at(long double t) const;

private:
    double frequency_;
    double initial_phase_;
    long double anchor_time_ = 0.0L;
    long double anchor_cycles_ = 0.0L;
};

} // namespace ooblab::core
