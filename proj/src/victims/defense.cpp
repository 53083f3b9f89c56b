#include "ooblab/victims/defense.hpp"

#include "ooblab/core/oscillator.hpp"
#include "ooblab/errors.hpp"

#include <cmath>
#include <numbers>

namespace ooblab::victims {

const char* to_string(SamplingStrategy s) {
    switch (s) {
    case SamplingStrategy::fixed: return "fixed";
    case SamplingStrategy::randomized_delay: return "randomized_delay";
    case SamplingStrategy::out_of_phase_pairs: return "out_of_phase_pairs";
    case SamplingStrategy::dynamic_rate: return "dynamic_rate";
    }
    return "?";
}

SamplingStrategy sampling_strategy_from_string(const std::string& s) {
    for (auto k : {SamplingStrategy::fixed, SamplingStrategy::randomized_delay, SamplingStrategy::out_of_phase_pairs,
                   SamplingStrategy::dynamic_rate})
        if (s == to_string(k))
            return k;
    throw ConfigError("", "unknown sampling strategy '" + s + "'");
}

void validate(const DefenseConfig& d, const std::string& path) {
    if (d.analog_lpf_hz && !(*d.analog_lpf_hz > 0.0))
        throw ConfigError(path + ".analog_lpf_hz", "cutoff must be positive");
    if (d.digital_lpf_hz && !(*d.digital_lpf_hz > 0.0))
        throw ConfigError(path + ".digital_lpf_hz", "cutoff must be positive");
    switch (d.sampling) {
    case SamplingStrategy::fixed:
        break;
    case SamplingStrategy::randomized_delay:
        if (!(d.max_jitter_s >= 0.0))
            throw ConfigError(path + ".max_jitter_s", "jitter must be nonnegative");
        break;
    case SamplingStrategy::out_of_phase_pairs:
        if (!(d.assumed_frequency_hz > 0.0))
            throw ConfigError(path + ".assumed_frequency_hz", "out-of-phase pairing needs a positive assumed frequency");
        break;
    case SamplingStrategy::dynamic_rate:
        if (d.rates_hz.empty())
            throw ConfigError(path + ".rates_hz", "dynamic rate needs at least one rate");
        for (double r : d.rates_hz)
            if (!(r > 0.0))
                throw ConfigError(path + ".rates_hz", "rates must be positive");
        if (!(d.dwell_s > 0.0))
            throw ConfigError(path + ".dwell_s", "dwell must be positive");
        break;
    }
}

SensorFrontEnd::SensorFrontEnd(const core::SamplerConfig& sampler)
    : cfg_(sampler), defense_(sampler.defense.value_or(DefenseConfig{})), clock_(sampler, true) {
    validate(defense_);
}

double SensorFrontEnd::analog(const AnalogInput& input, long double t) const {
    double v = input.benign(t);
    if (!(defense_.analog_lpf_hz && input.injected_frequency() > *defense_.analog_lpf_hz))
        v += input.injected(t);
    return v;
}

core::TraceSample SensorFrontEnd::sample(const AnalogInput& input, double* rate) {
    const auto inst = clock_.next();
    double v = analog(input, inst.time);
    if (defense_.sampling == SamplingStrategy::out_of_phase_pairs) {
        const long double half = 0.5L / static_cast<long double>(defense_.assumed_frequency_hz);
        v = 0.5 * (v + analog(input, inst.time + half));
    }
    v = core::quantize(v, cfg_.resolution_bits, cfg_.full_scale);
    if (defense_.digital_lpf_hz) {
        const double alpha = 1.0 - std::exp(-2.0 * std::numbers::pi * *defense_.digital_lpf_hz / inst.rate);
        if (!lpf_primed_) {
            lpf_state_ = v;
            lpf_primed_ = true;
        } else {
            lpf_state_ += alpha * (v - lpf_state_);
        }
        v = lpf_state_;
    }
    if (rate)
        *rate = inst.rate;
    return {inst.index, static_cast<double>(inst.time), v};
}

namespace {

class ToneInput final : public AnalogInput {
public:
    ToneInput(channel::AnalogTone tone, double phase) : tone_(tone), osc_(tone.frequency_hz, phase) {}
    double benign(long double) const override { return 0.0; }
    double injected(long double t) const override { return tone_.amplitude * osc_.carrier_at(t); }
    double injected_frequency() const override { return tone_.frequency_hz; }

private:
    channel::AnalogTone tone_;
    core::Oscillator osc_;
};

} // namespace

core::DigitalTrace apply_defense(const DefenseConfig& defense, core::SamplerConfig sampler,
                                 const channel::AnalogTone& tone, double duration_s, double initial_phase) {
    if (!(duration_s > 0.0))
        throw DomainError("apply_defense: duration must be positive");
    validate(defense);
    sampler.defense = defense;
    SensorFrontEnd fe(sampler);
    ToneInput input(tone, initial_phase);
    core::DigitalTrace trace;
    while (fe.next_time() < static_cast<long double>(duration_s)) {
        double rate = 0.0;
        trace.samples.push_back(fe.sample(input, &rate));
        trace.effective_rate_log.push_back(rate);
    }
    return trace;
}

double attenuation_db(const core::DigitalTrace& defended, const core::DigitalTrace& reference) {
    auto rms = [](const core::DigitalTrace& t) {
        if (t.samples.empty())
            return 0.0;
        double acc = 0.0;
        for (const auto& s : t.samples)
            acc += s.value * s.value;
        return std::sqrt(acc / static_cast<double>(t.samples.size()));
    };
    const double ref = rms(reference);
    const double def = rms(defended);
    if (!(ref > 0.0))
        throw DomainError("attenuation_db: reference trace carries no signal");
    if (!(def > 0.0))
        return kAttenuationFloorDb;
    return std::max(kAttenuationFloorDb, 20.0 * std::log10(def / ref));
}

} // namespace ooblab::victims
