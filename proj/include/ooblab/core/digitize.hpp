#pragma once

#include "ooblab/core/sampler.hpp"
#include "ooblab/core/tone_program.hpp"
#include "ooblab/core/trace.hpp"

namespace ooblab::core {

/// Sample the analog program at the sampler's (possibly drifting) instants in [0, duration),
/// then quantize and clip. Defensive sampling strategies and filters in `sampler.defense`
/// are not applied here; see victims::apply_defense for the defended front end.
DigitalTrace digitize(const ToneProgram& program, const SamplerConfig& sampler, double duration_s);

} // namespace ooblab::core
