#include "ooblab/core/trace.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

namespace ooblab::core {

std::vector<double> DigitalTrace::values() const {
    std::vector<double> v;
    v.reserve(samples.size());
    for (const auto& s : samples)
        v.push_back(s.value);
    return v;
}

std::vector<double> DigitalTrace::times() const {
    std::vector<double> v;
    v.reserve(samples.size());
    for (const auto& s : samples)
        v.push_back(s.time_s);
    return v;
}

void write_trace_csv(std::ostream& out, std::span<const TraceSample> samples) {
    out << "index,time_s,value\n";
    char buf[96];
    for (const auto& s : samples) {
        std::snprintf(buf, sizeof buf, "%lld,%.9f,%.9g\n", static_cast<long long>(s.index), s.time_s, s.value);
        out << buf;
    }
}

std::string trace_csv(const DigitalTrace& trace) {
    std::ostringstream os;
    write_trace_csv(os, trace.samples);
    return os.str();
}

} // namespace ooblab::core
