#include "ooblab/victims/heading.hpp"

#include "ooblab/errors.hpp"

#include <cmath>

namespace ooblab::victims {

double HeadingState::mean_rate() const { return elapsed_s > 0.0 ? std::abs(theta) / elapsed_s : 0.0; }

void integrate_sample(HeadingState& s, double omega, double dt, IntegrationRule rule) {
    s.prev_theta = s.theta;
    if (rule == IntegrationRule::trapezoidal && s.samples > 0)
        s.theta += 0.5 * (s.omega + omega) * dt;
    else
        s.theta += omega * dt;
    s.omega = omega;
    s.velocity = s.theta;
    s.omega_max = std::max(s.omega_max, std::abs(omega));
    s.elapsed_s += dt;
    ++s.samples;
}

HeadingState integrate_heading(std::span<const core::TraceSample> samples, std::span<const double> rates,
                               IntegrationRule rule, double baseline) {
    if (samples.size() != rates.size())
        throw DomainError("integrate_heading: one rate per sample is required");
    HeadingState s;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].index != static_cast<std::int64_t>(i) + samples.front().index)
            throw DomainError("integrate_heading: samples must be gapless");
        if (!(rates[i] > 0.0))
            throw DomainError("integrate_heading: rates must be positive");
        integrate_sample(s, samples[i].value - baseline, 1.0 / rates[i], rule);
    }
    return s;
}

} // namespace ooblab::victims
