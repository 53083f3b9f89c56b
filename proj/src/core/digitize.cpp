#include "ooblab/core/digitize.hpp"

#include "ooblab/errors.hpp"

#include <cmath>

namespace ooblab::core {

DigitalTrace digitize(const ToneProgram& program, const SamplerConfig& sampler, double duration_s) {
    if (!std::isfinite(duration_s) || duration_s <= 0.0)
        throw DomainError("digitize: duration must be positive");
    if (program.segments().empty())
        throw DomainError("digitize: empty program");

    SampleClock clock(sampler, false);
    DigitalTrace trace;
    const auto expected = static_cast<std::size_t>(duration_s * sampler.nominal_rate_hz * 1.02) + 2;
    trace.samples.reserve(expected);
    trace.effective_rate_log.reserve(expected);

    while (clock.peek_time() < static_cast<long double>(duration_s)) {
        const auto inst = clock.next();
        const double v = quantize(program.value_at(inst.time), sampler.resolution_bits, sampler.full_scale);
        trace.samples.push_back({inst.index, static_cast<double>(inst.time), v});
        trace.effective_rate_log.push_back(inst.rate);
    }
    return trace;
}

} // namespace ooblab::core
