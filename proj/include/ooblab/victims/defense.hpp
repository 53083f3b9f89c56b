#pragma once

#include "ooblab/channel/acoustic.hpp"
#include "ooblab/core/sampler.hpp"
#include "ooblab/core/trace.hpp"
#include "ooblab/victims/defense_config.hpp"

namespace ooblab::victims {

/// Continuous-time signal at the transducer: benign motion plus the injected tone.
class AnalogInput {
public:
    virtual ~AnalogInput() = default;
    virtual double benign(long double t) const = 0;
    virtual double injected(long double t) const = 0;
    virtual double injected_frequency() const = 0;
};

/// The ADC path with countermeasures: analog LPF -> sampling strategy -> quantizer -> digital LPF.
/// Victims only ever see what comes out of here.
class SensorFrontEnd {
public:
    explicit SensorFrontEnd(const core::SamplerConfig& sampler);

    long double next_time() const noexcept { return clock_.peek_time(); }
    /// Produce the next sample; `rate` receives the instantaneous Fs used.
    core::TraceSample sample(const AnalogInput& input, double* rate = nullptr);

    const core::SamplerConfig& config() const noexcept { return cfg_; }

private:
    double analog(const AnalogInput& input, long double t) const;

    core::SamplerConfig cfg_;
    DefenseConfig defense_;
    core::SampleClock clock_;
    bool lpf_primed_ = false;
    double lpf_state_ = 0.0;
};

/// Digitize a single injected tone through the defended front end over [0, duration).
core::DigitalTrace apply_defense(const DefenseConfig& defense, core::SamplerConfig sampler,
                                 const channel::AnalogTone& tone, double duration_s, double initial_phase = 0.0);

/// 20 log10(rms(defended) / rms(reference)), floored at -120 dB.
double attenuation_db(const core::DigitalTrace& defended, const core::DigitalTrace& reference);

inline constexpr double kAttenuationFloorDb = -120.0;

} // namespace ooblab::victims
