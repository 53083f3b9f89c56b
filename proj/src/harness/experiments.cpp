#include "ooblab/harness/experiments.hpp"

#include "ooblab/core/oscillator.hpp"
#include "ooblab/core/zero_crossing.hpp"
#include "ooblab/errors.hpp"
#include "ooblab/victims/defense.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace ooblab::harness {

namespace {

std::optional<double> defense_attenuation(const Scenario& sc, const Simulation& sim) {
    const auto& sampler = sc.rig.sampler;
    if (!sampler.defense || sampler.defense->is_none())
        return std::nullopt;
    const double f = sim.attacker().config().policy == attack::PolicyKind::switching ||
                             sim.attacker().config().policy == attack::PolicyKind::auto_switching
                         ? sc.attacker.policy.f1_hz
                         : sc.attacker.policy.frequency_hz;
    const channel::AnalogTone tone{f, sim.amplitude_at(f) * sc.attacker.policy.high};
    if (!(tone.amplitude > 0.0))
        return std::nullopt;
    core::SamplerConfig plain = sampler;
    plain.defense.reset();
    plain.drift.seed = derive_seed(sc.seed, 1, plain.drift.seed);
    victims::DefenseConfig defense = *sampler.defense;
    defense.seed = derive_seed(sc.seed, 2, defense.seed);
    const double window = 10.0;
    const auto reference = victims::apply_defense({}, plain, tone, window, sim.initial_phase());
    const auto defended = victims::apply_defense(defense, plain, tone, window, sim.initial_phase());
    try {
        return victims::attenuation_db(defended, reference);
    } catch (const DomainError&) {
        return std::nullopt; // the undefended alias itself is silent at this phase
    }
}

} // namespace

RunOutput run(const Scenario& sc, const std::string& variant) {
    Simulation sim(sc);
    RunReport rep;
    rep.scenario = sc.name;
    rep.variant = variant;
    rep.seed = sc.seed;
    rep.axis = std::string(1, "xyz"[sc.rig.axis]);
    rep.units = sc.rig.kind == victims::SensorKind::accelerometer ? "m/s" : "rad";

    if (sc.attacker.profile.enabled) {
        Simulation twin(sc); // an identical unit, so the target stays untouched
        SimulationOracle oracle(twin);
        rep.profile = attack::profile_resonance(oracle, sc.attacker.profile.options);
        rep.timings.profiling_s = oracle.elapsed_s();
        sim.note("harness", rep.profile->affected ? "profiled" : "not_affected");
    }

    if (sc.attacker.sync.enabled) {
        SimulationOracle oracle(sim);
        auto state = attack::initial_state(sc.attacker.policy);
        state.frequency_hz = sc.attacker.sync.start_frequency_hz;
        sim.note("harness", "sync_start");
        try {
            state = attack::synchronize(state, oracle, sc.attacker.sync.options);
            rep.synchronized = true;
            rep.sync_trail = state.sign_trail;
            sim.start_policy(state);
            sim.note("harness", "sync_done");
        } catch (const SyncTimeout& e) {
            sim.set_override(std::nullopt);
            sim.note("harness", "sync_timeout", e.what());
        }
        sim.collect_observations(false);
        rep.timings.sync_s = oracle.elapsed_s();
    }

    sim.run_until(sc.duration_s);

    const auto& h = sim.victim().heading;
    rep.theta_final = h.theta;
    rep.omega_max = h.omega_max;
    rep.active_duration_s = sim.active_duration();
    rep.omega_mean = rep.active_duration_s > 0.0 ? std::abs(h.theta) / rep.active_duration_s : 0.0;
    rep.ratio = rep.omega_max > 0.0 ? std::min(1.0, rep.omega_mean / rep.omega_max) : 0.0;
    rep.samples = static_cast<std::size_t>(sim.samples_taken());
    const auto& st = sim.attacker().state();
    rep.switches = st.switch_times.size();
    rep.adaptations = st.adaptations;
    rep.final_frequency_hz = sim.applied_drive().frequency_hz;
    rep.f1_hz = st.f1_hz;
    rep.f2_hz = st.f2_hz;
    rep.initial_phase = sim.initial_phase();
    rep.sensitivity = sim.solved_sensitivity();
    rep.timings.manipulate_s = sim.active_duration();
    rep.defense_attenuation_db = defense_attenuation(sc, sim);
    rep.calibration_reproduction = sc.report.calibration_reproduction;
    rep.note = sc.report.note;
    rep.events = sim.events();

    RunOutput out;
    out.report = std::move(rep);
    out.trace = sim.trace();
    out.telemetry = sim.telemetry();
    out.attack_events = sim.attack_events();
    return out;
}

void write_outputs(const RunOutput& o, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot write " + (dir / name).string());
        return f;
    };
    {
        auto f = open("trace.csv");
        core::write_trace_csv(f, o.trace);
    }
    {
        auto f = open("telemetry.csv");
        write_telemetry_csv(f, o.telemetry);
    }
    {
        auto f = open("attack_events.csv");
        write_attack_events_csv(f, o.attack_events);
    }
    {
        auto f = open("report.json");
        f << report_to_json(o.report).dump(2) << '\n';
    }
}

namespace {

class SweepInput final : public victims::AnalogInput {
public:
    explicit SweepInput(double baseline, double phase) : baseline_(baseline), osc_(1.0, phase) {}
    double benign(long double) const override { return baseline_; }
    double injected(long double t) const override { return amplitude * osc_.carrier_at(t); }
    double injected_frequency() const override { return osc_.frequency(); }
    void retune(long double t, double f) { osc_.retune(t, f); }

    double amplitude = 0.0;

private:
    double baseline_;
    core::Oscillator osc_;
};

} // namespace

SampleRateEstimate estimate_sample_rate(const Scenario& sc) {
    if (!sc.fs_sweep)
        throw ConfigError("fs_sweep", "scenario has no fs_sweep block");
    const FsSweep& w = *sc.fs_sweep;
    Simulation probe(sc); // for channel calibration and the seeded phase
    core::SamplerConfig sampler = sc.rig.sampler;
    sampler.drift.seed = derive_seed(sc.seed, 1, sampler.drift.seed);
    if (sampler.defense)
        sampler.defense->seed = derive_seed(sc.seed, 2, sampler.defense->seed);
    victims::SensorFrontEnd fe(sampler);
    SweepInput input(sc.rig.baseline, probe.initial_phase());

    const auto steps = static_cast<long>(std::floor((w.stop_hz - w.start_hz) / w.step_hz + 1e-9));
    std::vector<std::pair<double, bool>> points; // (F, DC-like)
    long double t0 = 0.0L;
    for (long k = 0; k <= steps; ++k) {
        const double f = w.start_hz + static_cast<double>(k) * w.step_hz;
        input.retune(t0, f);
        input.amplitude = probe.amplitude_at(f) * w.level;
        const long double t1 = t0 + static_cast<long double>(w.dwell_s);
        std::vector<double> times, values;
        while (fe.next_time() < t1) {
            const auto s = fe.sample(input);
            times.push_back(s.time_s);
            values.push_back(s.value);
        }
        t0 = t1;
        if (!(input.amplitude > 0.0))
            continue;
        const auto eps = core::zero_crossing_frequency(times, values, sc.rig.baseline);
        points.emplace_back(f, !eps || *eps < w.dc_threshold_hz);
    }

    SampleRateEstimate est;
    double widest = 0.0;
    for (std::size_t i = 0; i < points.size();) {
        if (!points[i].second) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < points.size() && points[j + 1].second)
            ++j;
        est.dc_aliases.push_back(0.5 * (points[i].first + points[j].first));
        widest = std::max(widest, points[j].first - points[i].first);
        i = j + 1;
    }
    if (est.dc_aliases.empty())
        throw EstimationError("estimate_sample_rate: no DC-like alias in the sweep");

    const double first = est.dc_aliases.front();
    double num = 0.0, den = 0.0;
    std::vector<double> ks;
    for (double f : est.dc_aliases) {
        const double k = std::max(1.0, std::round(f / first));
        ks.push_back(k);
        num += k * f;
        den += k * k;
    }
    est.fs_hz = num / den;
    for (std::size_t i = 0; i < ks.size(); ++i)
        est.residual_hz = std::max(est.residual_hz, std::abs(est.dc_aliases[i] - ks[i] * est.fs_hz));
    est.drift_flagged = est.residual_hz > 0.5 * w.step_hz || widest > 2.0 * w.step_hz;
    return est;
}

std::vector<DefenseRow> sweep_defense_matrix(const Scenario& base, const std::vector<NamedDefense>& defenses) {
    if (defenses.empty())
        throw ConfigError("defense_matrix", "at least one defense is required");
    auto one = [&](const std::string& name, const std::optional<victims::DefenseConfig>& d) {
        Scenario s = base;
        s.rig.sampler.defense = d;
        s.report.write_trace = false;
        const auto out = run(s, name);
        DefenseRow row;
        row.name = name;
        row.abs_theta = std::abs(out.report.theta_final);
        row.attenuation_db = out.report.defense_attenuation_db.value_or(0.0);
        return row;
    };
    std::vector<DefenseRow> rows;
    rows.push_back(one("none", std::nullopt));
    for (const auto& d : defenses)
        rows.push_back(one(d.name, d.defense));
    const double ref = rows.front().abs_theta;
    for (auto& r : rows)
        r.relative = ref > 0.0 ? r.abs_theta / ref : 0.0;
    return rows;
}

} // namespace ooblab::harness
