#pragma once

#include "ooblab/harness/experiments.hpp"
#include "ooblab/harness/scenario.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ooblab::testing {

inline std::string scenario_path(const std::string& name) {
    return std::string(OOBLAB_SCENARIO_DIR) + "/" + name + ".json";
}

inline harness::Scenario bundled(const std::string& name, const std::string& variant = "base") {
    for (auto& [v, sc] : harness::load_scenario_file(scenario_path(name)))
        if (v == variant)
            return sc;
    throw std::runtime_error("no variant " + variant + " in " + name);
}

/// Flat-gain channel so the induced amplitude is exactly `amplitude` at any drive
/// frequency, read by a navigation victim through a zero-latency ideal observer.
inline harness::Scenario analytic_scenario(double fs, double amplitude, double duration_s) {
    harness::Scenario sc;
    sc.name = "analytic";
    sc.seed = 1;
    sc.duration_s = duration_s;
    sc.tick_s = std::min(0.001, 0.5 / fs);
    sc.channel.kind = harness::ChannelKind::vibration;
    sc.channel.vibration.coupling_gain = amplitude;
    sc.rig.kind = victims::SensorKind::gyro;
    sc.rig.sampler.nominal_rate_hz = fs;
    sc.rig.sampler.resolution_bits = 0;
    sc.rig.sampler.full_scale = 10.0 * amplitude;
    sc.rig.initial_phase = 0.0;
    sc.victim.kind = victims::VictimKind::navigation;
    sc.observer.kind = harness::ObserverKind::ideal;
    sc.observer.model.bins = {1e-9}; // any nonzero alias classifies
    sc.report.telemetry_interval_s = 0.1;
    sc.report.write_trace = false;
    return sc;
}

/// Independent reference for one undersampled output: A sin(2 pi F i / Fs + phi0),
/// with the cycle count reduced in extended precision before the sine.
inline double direct_sample(double f, double fs, double amplitude, double phi0, long long i) {
    const long double cycles = static_cast<long double>(f) * static_cast<long double>(i) / static_cast<long double>(fs);
    const long double frac = cycles - std::floor(cycles);
    return static_cast<double>(amplitude * std::sin(2.0L * std::numbers::pi_v<long double> * frac + phi0));
}

} // namespace ooblab::testing
