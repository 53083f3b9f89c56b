#include "ooblab/attack/observation.hpp"

#include "ooblab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ooblab::attack {

const char* to_string(Direction d) {
    switch (d) {
    case Direction::positive: return "pos";
    case Direction::negative: return "neg";
    case Direction::none: return "none";
    }
    return "none";
}

Direction direction_from_string(const std::string& s) {
    if (s == "pos" || s == "positive" || s == "+")
        return Direction::positive;
    if (s == "neg" || s == "negative" || s == "-")
        return Direction::negative;
    if (s == "none")
        return Direction::none;
    throw ConfigError("", "unknown direction '" + s + "'");
}

void validate(const ObservationModel& m, const std::string& path) {
    if (m.bins.empty())
        throw ConfigError(path + ".bins", "at least one magnitude bin is required");
    for (std::size_t i = 0; i < m.bins.size(); ++i) {
        if (!(m.bins[i] > 0.0))
            throw ConfigError(path + ".bins", "bins must be positive");
        if (i > 0 && !(m.bins[i] > m.bins[i - 1]))
            throw ConfigError(path + ".bins", "bins must be strictly ascending");
    }
    if (!(m.latency_s >= 0.0))
        throw ConfigError(path + ".latency_s", "latency must be nonnegative");
    if (!(m.level_bin > 0.0))
        throw ConfigError(path + ".level_bin", "level bin must be positive");
    if (m.polarity != 1.0 && m.polarity != -1.0)
        throw ConfigError(path + ".polarity", "polarity must be +1 or -1");
}

ActuationObservation observe(const ObservationModel& model, const Actuation& actuation, double time) {
    ActuationObservation o;
    o.time = time;
    o.latency = model.latency_s;
    const double rate = model.polarity * actuation.rate;
    const double mag = std::abs(rate);
    o.magnitude_class = static_cast<int>(std::upper_bound(model.bins.begin(), model.bins.end(), mag) - model.bins.begin());
    if (o.magnitude_class > 0)
        o.direction = rate > 0.0 ? Direction::positive : Direction::negative;
    const double lvl = model.polarity * actuation.level / model.level_bin;
    o.level_class = static_cast<int>(std::lround(lvl));
    return o;
}

} // namespace ooblab::attack
