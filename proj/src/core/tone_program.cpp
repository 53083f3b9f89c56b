#include "ooblab/core/tone_program.hpp"

#include "ooblab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ooblab::core {

namespace {

long double frac(long double x) { return x - std::floor(x); }

} // namespace

ToneProgram::ToneProgram(std::vector<ToneSegment> segments, bool phase_continuous, double initial_phase)
    : segments_(std::move(segments)), phase_continuous_(phase_continuous), initial_phase_(initial_phase) {
    if (segments_.empty())
        throw DomainError("ToneProgram: empty program");
    for (std::size_t k = 0; k < segments_.size(); ++k) {
        const auto& s = segments_[k];
        if (!std::isfinite(s.start_s) || !std::isfinite(s.frequency_hz) || !std::isfinite(s.amplitude))
            throw DomainError("ToneProgram: non-finite segment field");
        if (s.frequency_hz <= 0.0)
            throw DomainError("ToneProgram: frequencies must be positive");
        if (s.amplitude < 0.0)
            throw DomainError("ToneProgram: amplitudes must be nonnegative");
        if (k > 0 && !(s.start_s > segments_[k - 1].start_s))
            throw DomainError("ToneProgram: segment start times must be strictly increasing");
    }
    if (!std::isfinite(initial_phase_))
        throw DomainError("ToneProgram: non-finite initial phase");

    start_cycles_.resize(segments_.size());
    for (std::size_t k = 0; k < segments_.size(); ++k) {
        const long double start = segments_[k].start_s;
        if (!phase_continuous_) {
            start_cycles_[k] = frac(static_cast<long double>(segments_[k].frequency_hz) * start);
        } else if (k == 0) {
            start_cycles_[k] = 0.0L;
        } else {
            const auto& prev = segments_[k - 1];
            const long double span = start - static_cast<long double>(prev.start_s);
            start_cycles_[k] = frac(start_cycles_[k - 1] + static_cast<long double>(prev.frequency_hz) * span);
        }
    }
}

ToneProgram ToneProgram::single(double frequency_hz, double amplitude, double initial_phase) {
    return ToneProgram({{0.0, frequency_hz, amplitude}}, true, initial_phase);
}

std::size_t ToneProgram::segment_index(long double t) const {
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](long double v, const ToneSegment& s) { return v < s.start_s; });
    if (it == segments_.begin())
        return npos;
    return static_cast<std::size_t>(std::distance(segments_.begin(), it) - 1);
}

long double ToneProgram::cycles_at(long double t) const {
    const auto k = segment_index(t);
    if (k == npos)
        return 0.0L;
    const auto& s = segments_[k];
    return frac(start_cycles_[k] + static_cast<long double>(s.frequency_hz) * (t - static_cast<long double>(s.start_s)));
}

double ToneProgram::carrier_at(long double t) const {
    if (segment_index(t) == npos)
        return 0.0;
    constexpr long double two_pi = 2.0L * std::numbers::pi_v<long double>;
    return static_cast<double>(std::sin(two_pi * cycles_at(t) + static_cast<long double>(initial_phase_)));
}

double ToneProgram::value_at(long double t) const {
    const auto k = segment_index(t);
    if (k == npos)
        return 0.0;
    return segments_[k].amplitude * carrier_at(t);
}

} // namespace ooblab::core
