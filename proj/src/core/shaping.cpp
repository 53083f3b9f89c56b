#include "ooblab/core/shaping.hpp"

#include "ooblab/core/alias.hpp"
#include "ooblab/errors.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace ooblab::core {

ToneProgram shape_digital_amplitudes(const ToneProgram& program, const SamplerConfig& sampler, const SampleGate& gate,
                                     const ShapingOptions& options) {
    if (program.segments().size() != 1)
        throw UnsupportedError("shape_digital_amplitudes: program must be a single carrier tone");
    if (!gate)
        throw DomainError("shape_digital_amplitudes: gate is empty");
    if (!(options.duration_s > 0.0))
        throw DomainError("shape_digital_amplitudes: duration must be positive");
    if (options.low_level < 0.0)
        throw DomainError("shape_digital_amplitudes: low level must be nonnegative");

    const auto carrier = program.segments().front();
    const auto alias = alias_decompose(carrier.frequency_hz, sampler.nominal_rate_hz);
    if (alias.n == 0)
        throw UnsupportedError("shape_digital_amplitudes: in-band carrier cannot be shaped per sample");
    if (carrier.frequency_hz <= kShapingMinRatio * sampler.nominal_rate_hz)
        throw UnsupportedError("shape_digital_amplitudes: carrier too close to the sample rate for independent samples");

    const double high = carrier.amplitude;
    const long double F = carrier.frequency_hz;

    std::vector<ToneSegment> out;
    SampleClock clock(sampler, false);
    long double prev_time = -1.0L;
    while (clock.peek_time() < static_cast<long double>(options.duration_s)) {
        const auto inst = clock.next();
        const double level = gate(inst.index, program.carrier_at(inst.time)) ? high : options.low_level;
        if (!out.empty() && out.back().amplitude == level) {
            prev_time = inst.time;
            continue;
        }
        long double boundary = carrier.start_s;
        if (prev_time >= 0.0L) {
            if (options.switching == EnvelopeSwitching::instant) {
                boundary = 0.5L * (prev_time + inst.time);
            } else {
                // Next half-cycle boundary of the emitted carrier after the previous sample.
                const long double c = program.cycles_at(prev_time) + program.initial_phase() / (2.0L * std::numbers::pi_v<long double>);
                long double to_cross = (std::floor(2.0L * c) + 1.0L) / 2.0L - c;
                if (to_cross <= 0.0L)
                    to_cross += 0.5L;
                boundary = prev_time + to_cross / F;
                if (boundary >= inst.time)
                    boundary = 0.5L * (prev_time + inst.time);
            }
        }
        out.push_back({static_cast<double>(boundary), carrier.frequency_hz, level});
        prev_time = inst.time;
    }
    if (out.empty())
        out.push_back(carrier);
    return ToneProgram(std::move(out), true, program.initial_phase());
}

} // namespace ooblab::core
