#pragma once

#include "ooblab/core/sampler.hpp"
#include "ooblab/core/tone_program.hpp"

#include <cstdint>
#include <functional>

namespace ooblab::core {

/// Carrier must exceed this multiple of Fs before samples are treated as independent.
inline constexpr double kShapingMinRatio = 10.0;

enum class EnvelopeSwitching {
    zero_crossing, // level changes at the first carrier zero crossing after the previous sample
    instant,       // level changes midway between samples
};

/// Decides, per sample, whether the high level applies. `carrier` is sin(Phi[i]) of the
/// unshaped tone at that sample, in [-1, 1].
using SampleGate = std::function<bool(std::int64_t index, double carrier)>;

struct ShapingOptions {
    double low_level = 0.0;
    double duration_s = 1.0;
    EnvelopeSwitching switching = EnvelopeSwitching::zero_crossing;
};

/// Turn a single-carrier program into one whose envelope alternates between the
/// carrier's amplitude (gate true) and `low_level` (gate false) so the digitized
/// stream approximates V[i] = A[i] * sin(Phi[i]).
ToneProgram shape_digital_amplitudes(const ToneProgram& program, const SamplerConfig& sampler, const SampleGate& gate,
                                     const ShapingOptions& options);

} // namespace ooblab::core
