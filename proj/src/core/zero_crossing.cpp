#include "ooblab/core/zero_crossing.hpp"

#include "ooblab/errors.hpp"

namespace ooblab::core {

std::vector<ZeroCrossing> find_zero_crossings(std::span<const double> times, std::span<const double> values,
                                              double baseline) {
    if (times.size() != values.size())
        throw DomainError("find_zero_crossings: times and values differ in length");
    std::vector<ZeroCrossing> out;
    bool have_prev = false;
    double prev_t = 0.0;
    double prev_v = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i] - baseline;
        if (v == 0.0)
            continue;
        if (have_prev && (v > 0.0) != (prev_v > 0.0)) {
            const double frac = prev_v / (prev_v - v);
            out.push_back({prev_t + frac * (times[i] - prev_t), v > 0.0 ? 1 : -1});
        }
        have_prev = true;
        prev_t = times[i];
        prev_v = v;
    }
    return out;
}

std::optional<double> zero_crossing_frequency(std::span<const double> times, std::span<const double> values,
                                              double baseline) {
    const auto zc = find_zero_crossings(times, values, baseline);
    if (zc.size() < 2)
        return std::nullopt;
    const double span = zc.back().time_s - zc.front().time_s;
    if (!(span > 0.0))
        return std::nullopt;
    return static_cast<double>(zc.size() - 1) / (2.0 * span);
}

} // namespace ooblab::core
