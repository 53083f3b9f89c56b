#include "ooblab/core/sampler.hpp"

#include "ooblab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ooblab::core {

namespace {
constexpr double kDriftEnvelope = 0.01;
}

const char* to_string(DriftKind k) {
    switch (k) {
    case DriftKind::none: return "none";
    case DriftKind::linear: return "linear";
    case DriftKind::random_walk: return "random_walk";
    }
    return "?";
}

void validate(const SamplerConfig& s) {
    if (!std::isfinite(s.nominal_rate_hz) || s.nominal_rate_hz <= 0.0)
        throw DomainError("sampler: nominal rate must be positive");
    if (!std::isfinite(s.full_scale) || s.full_scale <= 0.0)
        throw DomainError("sampler: full_scale must be positive");
    if (s.resolution_bits < 0 || s.resolution_bits > 32)
        throw DomainError("sampler: resolution_bits must be in [0, 32]");
    if (s.drift.kind == DriftKind::random_walk && s.drift.step_stddev < 0.0)
        throw DomainError("sampler: random walk step must be nonnegative");
    if (s.defense) {
        const auto& d = *s.defense;
        if (d.sampling == victims::SamplingStrategy::randomized_delay &&
            !(d.max_jitter_s >= 0.0 && d.max_jitter_s < 0.99 / s.nominal_rate_hz))
            throw DomainError("sampler: jitter must be nonnegative and below one sample period");
    }
}

double quantization_step(int resolution_bits, double full_scale) {
    if (resolution_bits <= 0)
        return 0.0;
    return full_scale / std::ldexp(1.0, resolution_bits - 1);
}

double quantize(double value, int resolution_bits, double full_scale) {
    double v = std::clamp(value, -full_scale, full_scale);
    const double step = quantization_step(resolution_bits, full_scale);
    if (step > 0.0)
        v = std::clamp(std::round(v / step) * step, -full_scale, full_scale);
    return v;
}

SampleClock::SampleClock(const SamplerConfig& sampler, bool honor_defense)
    : cfg_(sampler), drift_rng_(sampler.drift.seed) {
    validate(cfg_);
    if (honor_defense && cfg_.defense) {
        const auto& d = *cfg_.defense;
        strategy_ = d.sampling;
        max_jitter_ = d.max_jitter_s;
        dynamic_rates_ = d.rates_hz;
        dwell_ = d.dwell_s;
        defense_rng_.seed(d.seed);
        if (strategy_ == victims::SamplingStrategy::dynamic_rate && dynamic_rates_.empty())
            throw DomainError("sampler: dynamic rate needs a non-empty rate set");
    }
    exact_grid_ = cfg_.drift.kind == DriftKind::none && strategy_ != victims::SamplingStrategy::dynamic_rate;

    dynamic_base_ = cfg_.nominal_rate_hz;
    if (strategy_ == victims::SamplingStrategy::dynamic_rate) {
        std::uniform_int_distribution<std::size_t> pick(0, dynamic_rates_.size() - 1);
        dwell_slot_ = 0;
        dynamic_base_ = dynamic_rates_[pick(defense_rng_)];
    }
    rate_ = clamp_rate(dynamic_base_ + drift_offset(0.0L));
    next_time_ = clock_time_;
    if (strategy_ == victims::SamplingStrategy::randomized_delay && max_jitter_ > 0.0)
        next_time_ += std::uniform_real_distribution<double>(0.0, max_jitter_)(defense_rng_);
}

double SampleClock::drift_offset(long double t) const {
    const double limit = kDriftEnvelope * cfg_.nominal_rate_hz;
    switch (cfg_.drift.kind) {
    case DriftKind::none:
        return 0.0;
    case DriftKind::linear: {
        long double span = t;
        if (cfg_.drift.ramp_s > 0.0)
            span = std::min(span, static_cast<long double>(cfg_.drift.ramp_s));
        return std::clamp(static_cast<double>(cfg_.drift.rate_hz_per_s * span), -limit, limit);
    }
    case DriftKind::random_walk:
        return walk_offset_;
    }
    return 0.0;
}

double SampleClock::clamp_rate(double r) const {
    return std::max(r, 1e-9);
}

SampleClock::Instant SampleClock::next() {
    Instant out{index_, next_time_, rate_};
    advance_clock();
    return out;
}

void SampleClock::advance_clock() {
    ++index_;
    if (exact_grid_) {
        clock_time_ = static_cast<long double>(index_) / static_cast<long double>(cfg_.nominal_rate_hz);
    } else {
        const long double r = rate_;
        long double dt = 1.0L / r;
        if (cfg_.drift.kind == DriftKind::linear) {
            // Solve r*dt + k*dt^2/2 = 1 so the clock integral advances by exactly one sample.
            const bool ramping = cfg_.drift.ramp_s <= 0.0 || clock_time_ < cfg_.drift.ramp_s;
            const double limit = kDriftEnvelope * cfg_.nominal_rate_hz;
            const bool saturated = std::abs(drift_offset(clock_time_)) >= limit;
            const long double k = (ramping && !saturated) ? cfg_.drift.rate_hz_per_s : 0.0;
            if (k != 0.0L)
                dt = 2.0L / (r + std::sqrt(r * r + 2.0L * k));
        }
        clock_time_ += dt;

        if (cfg_.drift.kind == DriftKind::random_walk && cfg_.drift.step_stddev > 0.0) {
            std::normal_distribution<double> gauss(0.0, 1.0);
            const double limit = kDriftEnvelope * cfg_.nominal_rate_hz;
            double w = walk_offset_ + cfg_.drift.step_stddev * std::sqrt(static_cast<double>(dt)) * gauss(drift_rng_);
            if (w > limit)
                w = 2.0 * limit - w;
            if (w < -limit)
                w = -2.0 * limit - w;
            walk_offset_ = std::clamp(w, -limit, limit);
        }
        if (strategy_ == victims::SamplingStrategy::dynamic_rate) {
            const auto slot = static_cast<std::int64_t>(std::floor(clock_time_ / dwell_));
            if (slot != dwell_slot_) {
                dwell_slot_ = slot;
                std::uniform_int_distribution<std::size_t> pick(0, dynamic_rates_.size() - 1);
                dynamic_base_ = dynamic_rates_[pick(defense_rng_)];
            }
        }
    }
    rate_ = clamp_rate(dynamic_base_ + drift_offset(clock_time_));
    next_time_ = clock_time_;
    if (strategy_ == victims::SamplingStrategy::randomized_delay && max_jitter_ > 0.0)
        next_time_ += std::uniform_real_distribution<double>(0.0, max_jitter_)(defense_rng_);
}

} // namespace ooblab::core
