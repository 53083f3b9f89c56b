#pragma once

#include <cstddef>
#include <vector>

namespace ooblab::core {

struct ToneSegment {
    double start_s = 0.0;
    double frequency_hz = 0.0;
    double amplitude = 0.0;
};

/// Piecewise schedule of emitted frequency and amplitude.
///
/// With phase continuity the oscillator phase carries across segment boundaries
/// (a single generator retuned in place). Without it every segment is an
/// independent oscillator locked to absolute time: sin(2*pi*F_k*t + phi0).
/// Before the first segment start the output is zero.
class ToneProgram {
public:
    ToneProgram(std::vector<ToneSegment> segments, bool phase_continuous = true, double initial_phase = 0.0);

    static ToneProgram single(double frequency_hz, double amplitude, double initial_phase = 0.0);

    const std::vector<ToneSegment>& segments() const noexcept { return segments_; }
    bool phase_continuous() const noexcept { return phase_continuous_; }
    double initial_phase() const noexcept { return initial_phase_; }

    /// Index of the segment in force at t, or npos before the first start.
    std::size_t segment_index(long double t) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    /// Fractional oscillator phase in cycles, in [0, 1), excluding initial_phase.
    long double cycles_at(long double t) const;

    /// sin(2*pi*cycles + phi0) without amplitude; zero before the program starts.
    double carrier_at(long double t) const;

    /// Analog value A_k * carrier.
    double value_at(long double t) const;

private:
    std::vector<ToneSegment> segments_;
    std::vector<long double> start_cycles_; // fractional phase at each segment start
    bool phase_continuous_;
    double initial_phase_;
};

} // namespace ooblab::core
