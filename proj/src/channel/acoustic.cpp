#include "ooblab/channel/acoustic.hpp"

#include "ooblab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ooblab::channel {

FrequencyResponse::FrequencyResponse(std::vector<std::pair<double, double>> points) : points_(std::move(points)) {
    std::sort(points_.begin(), points_.end());
    for (std::size_t i = 1; i < points_.size(); ++i)
        if (points_[i].first == points_[i - 1].first)
            throw DomainError("FrequencyResponse: duplicate frequency");
}

bool FrequencyResponse::covers(double f) const {
    return points_.empty() || (f >= points_.front().first && f <= points_.back().first);
}

double FrequencyResponse::offset_db(double f) const {
    if (points_.empty())
        return 0.0;
    if (!covers(f))
        throw RangeError("FrequencyResponse: frequency outside the response table");
    if (points_.size() == 1)
        return points_.front().second;
    auto hi = std::lower_bound(points_.begin(), points_.end(), f,
                               [](const auto& p, double v) { return p.first < v; });
    if (hi == points_.begin())
        return hi->second;
    auto lo = hi - 1;
    if (hi->first == f)
        return hi->second;
    const double w = (f - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
}

namespace {

double detuning(double f, double f0) { return f / f0 - f0 / f; }

} // namespace

ResonantFront ResonantFront::from_band(double f_lo, double f_hi, double sensitivity, double attenuation) {
    ResonantFront r;
    r.f_lo = f_lo;
    r.f_hi = f_hi;
    r.f0 = 0.5 * (f_lo + f_hi);
    r.sensitivity = sensitivity;
    r.attenuation = attenuation;
    // |H| = 1/sqrt(1 + Q^2 x^2); gain 0.1 at the edge with the smaller |x| (the weaker attenuation).
    const double x = std::min(std::abs(detuning(f_lo, r.f0)), std::abs(detuning(f_hi, r.f0)));
    r.q = x > 0.0 ? std::sqrt(99.0) / x : 1.0;
    validate(r);
    return r;
}

void validate(const ResonantFront& r) {
    if (!(r.f_lo > 0.0 && r.f_lo < r.f0 && r.f0 < r.f_hi))
        throw DomainError("ResonantFront: requires 0 < f_lo < f0 < f_hi");
    if (!(r.q > 0.0))
        throw DomainError("ResonantFront: Q must be positive");
    if (r.sensitivity < 0.0 || r.attenuation < 0.0)
        throw DomainError("ResonantFront: sensitivity and attenuation must be nonnegative");
}

double ResonantFront::gain(double f) const {
    if (!(f >= f_lo && f <= f_hi))
        return 0.0;
    const double x = q * detuning(f, f0);
    return 1.0 / std::sqrt(1.0 + x * x);
}

double spl_to_pascal(double spl_db) { return kReferencePressurePa * std::pow(10.0, spl_db / 20.0); }

double pascal_to_spl(double pressure_pa) {
    if (!(pressure_pa > 0.0))
        throw DomainError("pascal_to_spl: pressure must be positive");
    return 20.0 * std::log10(pressure_pa / kReferencePressurePa);
}

double combine_coherent_sources(std::span<const double> levels_db) {
    if (levels_db.empty())
        throw DomainError("combine_coherent_sources: empty list");
    // Factor out the loudest level so large SPLs do not overflow the pressure ratio sum.
    const double ref = *std::max_element(levels_db.begin(), levels_db.end());
    double sum = 0.0;
    for (double l : levels_db)
        sum += std::pow(10.0, (l - ref) / 20.0);
    return ref + 20.0 * std::log10(sum);
}

double spl_at_distance(const SoundSource& source, double frequency_hz, double distance_m) {
    if (!(distance_m > 0.0))
        throw DomainError("spl_at_distance: distance must be positive");
    if (!(source.reference_distance_m > 0.0))
        throw DomainError("spl_at_distance: reference distance must be positive");
    if (source.n_sources < 1)
        throw DomainError("spl_at_distance: n_sources must be >= 1");
    return source.spl_ref_db + source.response.offset_db(frequency_hz) +
           20.0 * std::log10(source.reference_distance_m / distance_m) +
           20.0 * std::log10(static_cast<double>(source.n_sources));
}

double induced_amplitude(const SoundSource& source, double distance_m, double frequency_hz, const ResonantFront& front) {
    if (!(distance_m > 0.0))
        throw DomainError("induced_amplitude: distance must be positive");
    const double g = front.gain(frequency_hz);
    if (g == 0.0)
        return 0.0;
    const double pa = spl_to_pascal(spl_at_distance(source, frequency_hz, distance_m));
    return pa * front.attenuation * front.sensitivity * g;
}

double solve_sensitivity(const SoundSource& source, double distance_m, double frequency_hz, ResonantFront front,
                         double target_amplitude) {
    front.sensitivity = 1.0;
    const double unit = induced_amplitude(source, distance_m, frequency_hz, front);
    if (!(unit > 0.0))
        throw DomainError("solve_sensitivity: frequency does not couple into the sensor");
    return target_amplitude / unit;
}

AnalogTone vibration_drive(const VibrationChannel& channel, double frequency_hz, double amplitude) {
    if (!(frequency_hz > 0.0))
        throw DomainError("vibration_drive: frequency must be positive");
    if (channel.coupling_gain < 0.0)
        throw DomainError("vibration_drive: coupling gain must be nonnegative");
    return {frequency_hz, channel.coupling_gain * amplitude};
}

} // namespace ooblab::channel
