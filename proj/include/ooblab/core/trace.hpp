#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ooblab::core {

struct TraceSample {
    std::int64_t index = 0;
    double time_s = 0.0;
    double value = 0.0;
};

/// Sampled output stream of the ADC plus the instantaneous rate used at each sample.
struct DigitalTrace {
    std::vector<TraceSample> samples;
    std::vector<double> effective_rate_log;

    std::size_t size() const noexcept { return samples.size(); }
    std::vector<double> values() const;
    std::vector<double> times() const;
};

/// CSV with header `index,time_s,value`.
void write_trace_csv(std::ostream& out, std::span<const TraceSample> samples);
std::string trace_csv(const DigitalTrace& trace);

} // namespace ooblab::core
