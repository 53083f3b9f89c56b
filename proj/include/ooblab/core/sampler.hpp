#pragma once

#include "ooblab/victims/defense_config.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>

namespace ooblab::core {

enum class DriftKind { none, linear, random_walk };

/// How the ADC's instantaneous rate departs from nominal.
///  - linear: Fs(t) = Fs0 + rate * min(t, ramp_s) (ramp_s <= 0 means unbounded)
///  - random_walk: per sample, Fs += N(0, step_stddev^2 * dt), reflected inside the +-1% envelope
/// The instantaneous rate is always held within +-1% of nominal.
struct DriftModel {
    DriftKind kind = DriftKind::none;
    double rate_hz_per_s = 0.0;
    double ramp_s = 0.0;
    double step_stddev = 0.0;
    std::uint64_t seed = 0;

    static DriftModel none() { return {}; }
    static DriftModel linear(double rate_hz_per_s, double ramp_s = 0.0) {
        DriftModel d;
        d.kind = DriftKind::linear;
        d.rate_hz_per_s = rate_hz_per_s;
        d.ramp_s = ramp_s;
        return d;
    }
    static DriftModel random_walk(double step_stddev, std::uint64_t seed) {
        DriftModel d;
        d.kind = DriftKind::random_walk;
        d.step_stddev = step_stddev;
        d.seed = seed;
        return d;
    }
};

const char* to_string(DriftKind k);

struct SamplerConfig {
    double nominal_rate_hz = 100.0;
    DriftModel drift;
    int resolution_bits = 16;  // 0 disables quantization (clipping still applies)
    double full_scale = 8.7;   // +-500 dps in rad/s
    std::optional<victims::DefenseConfig> defense;
};

/// Throws DomainError for a malformed sampler.
void validate(const SamplerConfig& sampler);

/// Round to the ADC grid and clip to +-full_scale.
double quantize(double value, int resolution_bits, double full_scale);

/// Smallest representable step, or 0 when quantization is disabled.
double quantization_step(int resolution_bits, double full_scale);

/// Generates the ADC's sample instants: the integral of the instantaneous rate
/// (a continuous clock), optionally with a defensive sampling strategy layered on top.
class SampleClock {
public:
    struct Instant {
        std::int64_t index;
        long double time;
        double rate; // instantaneous rate used for this sample
    };

    explicit SampleClock(const SamplerConfig& sampler, bool honor_defense = true);

    /// Time of the next instant without consuming it.
    long double peek_time() const noexcept { return next_time_; }
    Instant next();

    double current_rate() const noexcept { return rate_; }

private:
    double drift_offset(long double t) const;
    double clamp_rate(double r) const;
    void advance_clock();

    SamplerConfig cfg_;
    victims::SamplingStrategy strategy_ = victims::SamplingStrategy::fixed;
    double max_jitter_ = 0.0;
    std::vector<double> dynamic_rates_;
    double dwell_ = 1.0;

    std::int64_t index_ = 0;
    long double clock_time_ = 0.0L; // undelayed instant of the current index
    long double next_time_ = 0.0L;  // instant actually reported (with jitter)
    double rate_ = 0.0;
    double walk_offset_ = 0.0;
    double dynamic_base_ = 0.0;
    std::int64_t dwell_slot_ = -1;
    bool exact_grid_ = false;

    std::mt19937_64 drift_rng_;
    std::mt19937_64 defense_rng_;
};

} // namespace ooblab::core
