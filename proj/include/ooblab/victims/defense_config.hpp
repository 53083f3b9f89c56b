#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ooblab::victims {

enum class SamplingStrategy { fixed, randomized_delay, out_of_phase_pairs, dynamic_rate };

/// Filtering and sampling countermeasures applied around the ADC.
/// At most one sampling strategy is active; the filters compose with any of them.
struct DefenseConfig {
    std::optional<double> analog_lpf_hz;  // ideal brick-wall ahead of the sampler
    std::optional<double> digital_lpf_hz; // first-order IIR after quantization

    SamplingStrategy sampling = SamplingStrategy::fixed;
    double max_jitter_s = 0.0;            // randomized_delay
    double assumed_frequency_hz = 0.0;    // out_of_phase_pairs
    std::vector<double> rates_hz;         // dynamic_rate
    double dwell_s = 1.0;                 // dynamic_rate
    std::uint64_t seed = 0;               // randomized_delay / dynamic_rate

    bool is_none() const {
        return !analog_lpf_hz && !digital_lpf_hz && sampling == SamplingStrategy::fixed;
    }
};

const char* to_string(SamplingStrategy s);
SamplingStrategy sampling_strategy_from_string(const std::string& s);

/// Throws ConfigError when the configuration is not well formed.
void validate(const DefenseConfig& defense, const std::string& path = "defense");

} // namespace ooblab::victims
