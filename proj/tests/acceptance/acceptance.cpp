// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.

#include "fixtures.hpp"

#include "ooblab/attack/policies.hpp"
#include "ooblab/channel/acoustic.hpp"
#include "ooblab/core/alias.hpp"
#include "ooblab/core/digitize.hpp"
#include "ooblab/core/predict.hpp"
#include "ooblab/core/zero_crossing.hpp"
#include "ooblab/harness/experiments.hpp"
#include "ooblab/harness/simulation.hpp"
#include "ooblab/victims/defense.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace ooblab;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

// Collects sub-checks of one criterion; the criterion passes only if all do.
class Verdict {
public:
    void expect(bool ok, const char* fmt, ...) {
        char buf[512];
        va_list ap;
        va_start(ap, fmt);
        std::vsnprintf(buf, sizeof buf, fmt, ap);
        va_end(ap);
        ok_ = ok_ && ok;
        if (!detail_.empty())
            detail_ += "; ";
        detail_ += buf;
        if (!ok)
            detail_ += " [out of tolerance]";
    }
    bool ok() const { return ok_; }
    const std::string& detail() const { return detail_; }

private:
    bool ok_ = true;
    std::string detail_;
};

bool within(double v, double target, double tol) { return std::abs(v - target) <= tol; }
bool within_rel(double v, double target, double rel) { return std::abs(v - target) <= rel * std::abs(target); }

const char* kBundled[] = {"iphone5_sideswing",  "iphone7_switching",        "pixel_accel_vibration",
                          "auto_drift",         "navigation_auto",          "mitu_balancer",
                          "osmo_stabilizer",    "screwdriver_conservative", "soldering_iron_dos",
                          "defense_matrix"};

// Sign of the first clear departure of a trace that starts at phase zero: the
// direction the alias's phase moves, which the zero-crossing rate cannot tell.
int departure_sign(const core::DigitalTrace& tr, double threshold) {
    for (const auto& s : tr.samples)
        if (std::abs(s.value) > threshold)
            return s.value > 0.0 ? 1 : -1;
    return 0;
}

std::optional<double> zc_frequency_between(const core::DigitalTrace& tr, double t0, double t1) {
    std::vector<double> t, v;
    for (const auto& s : tr.samples)
        if (s.time_s >= t0 && s.time_s < t1) {
            t.push_back(s.time_s);
            v.push_back(s.value);
        }
    return core::zero_crossing_frequency(t, v);
}

// 1. Drift amplification through the alias.
void drift_amplification(Verdict& v) {
    const auto start = std::chrono::steady_clock::now();
    core::SamplerConfig s;
    s.nominal_rate_hz = 200.0;
    s.resolution_bits = 0;
    s.full_scale = 2.0;
    s.drift = core::DriftModel::linear(0.01 / 0.5, 0.5); // +0.01 Hz reached at 0.5 s, then held
    const auto tr = core::digitize(core::ToneProgram::single(20000.0, 1.0, 0.0), s, 21.0);
    const auto f = zc_frequency_between(tr, 1.0, 21.0);
    const int sign = departure_sign(tr, 1e-3);
    const double measured = f ? sign * *f : 0.0;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    v.expect(within(measured, -1.0, 0.05), "measured deviation %.4f Hz (target -1.0 +- 0.05)", measured);
    v.expect(within(core::drift_deviation(100, 0.01), -1.0, 1e-12), "-n*dFs = %.4f Hz",
             core::drift_deviation(100, 0.01));
    v.expect(secs < 1.0, "runtime %.3f s (< 1 s)", secs);
}

// 2. digitize against direct evaluation.
void digitization_oracle(Verdict& v) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> fs_d(20.0, 1000.0), f_d(1.0, 30000.0), ph_d(0.0, 2.0 * pi);
    double worst = 0.0;
    std::size_t fewest = SIZE_MAX;
    for (int draw = 0; draw < 100; ++draw) {
        const double fs = fs_d(rng), f = f_d(rng), phi = ph_d(rng);
        core::SamplerConfig s;
        s.nominal_rate_hz = fs;
        s.resolution_bits = 0;
        s.full_scale = 2.0;
        const auto tr = core::digitize(core::ToneProgram::single(f, 1.0, phi), s, (10000.0 - 0.5) / fs);
        fewest = std::min(fewest, tr.size());
        for (const auto& x : tr.samples)
            worst = std::max(worst, std::abs(x.value - testing::direct_sample(f, fs, 1.0, phi, x.index)));
    }
    v.expect(fewest >= 10000, "%zu samples per draw, 100 draws", fewest);
    v.expect(worst <= 1e-9, "worst error %.3g of amplitude (<= 1e-9)", worst);
}

struct AnalyticRun {
    double theta, active, omega_max, ratio;
};

// The cycle laws are continuous-time; a sampled observer reacts one sample late,
// so |eps| is kept well below Fs to stay in the regime where they apply.
AnalyticRun analytic_run(attack::PolicyConfig policy, double amplitude, double duration) {
    auto sc = testing::analytic_scenario(1000.0, amplitude, duration);
    sc.attacker.policy = policy;
    const auto r = harness::run(sc).report;
    return {r.theta_final, r.active_duration_s, r.omega_max, r.ratio};
}

attack::PolicyConfig side_swing_at(double f) {
    attack::PolicyConfig p;
    p.policy = attack::PolicyKind::side_swing;
    p.frequency_hz = f;
    return p;
}

attack::PolicyConfig switching_around(double n0fs, double eps) {
    attack::PolicyConfig p;
    p.policy = attack::PolicyKind::switching;
    p.f1_hz = n0fs - eps;
    p.f2_hz = n0fs + eps;
    p.step_hz = 2.0 * eps;
    return p;
}

// 3. Ideal Side-Swing against its per-cycle law.
void sideswing_analytics(Verdict& v, double& ratio_out) {
    ratio_out = 0.0;
    for (double eps : {0.25, 0.5, 1.0})
        for (double a : {1.0, 3.0}) {
            const double cycles = 10.0, T = cycles / eps;
            const auto r = analytic_run(side_swing_at(10000.0 + eps), a, T);
            const auto p = core::predict_cycle_heading_sideswing(a, 0.0, eps);
            const double per_cycle = r.theta / cycles, mean = r.theta / r.active;
            v.expect(within_rel(per_cycle, p.theta, 0.02) && within_rel(mean, p.mean_rate, 0.02),
                     "eps=%.2f A=%.0f: theta/cycle %.4f vs %.4f, mean %.4f vs %.4f", eps, a, per_cycle, p.theta, mean,
                     p.mean_rate);
            v.expect(within(r.ratio, 1.0 / pi, 0.02), "ratio %.4f vs 1/pi", r.ratio);
            if (eps == 0.5 && a == 1.0)
                ratio_out = r.ratio;
        }
}

// 4. Ideal Switching against its per-period law.
void switching_analytics(Verdict& v, double sideswing_ratio) {
    double ratio_sw = 0.0;
    for (double eps : {0.25, 0.5, 1.0})
        for (double a : {1.0, 3.0}) {
            const double periods = 10.0, T = periods / eps;
            const auto r = analytic_run(switching_around(10000.0, eps), a, T);
            const auto p = core::predict_cycle_heading_switching(a, eps);
            const double per_period = r.theta / periods, mean = r.theta / r.active;
            v.expect(within_rel(per_period, p.theta, 0.02) && within_rel(mean, p.mean_rate, 0.02),
                     "eps=%.2f A=%.0f: theta/period %.4f vs %.4f, mean %.4f vs %.4f", eps, a, per_period, p.theta,
                     mean, p.mean_rate);
            v.expect(within(r.ratio, 2.0 / pi, 0.02), "ratio %.4f vs 2/pi", r.ratio);
            if (eps == 0.5 && a == 1.0)
                ratio_sw = r.ratio;
        }
    v.expect(ratio_sw > sideswing_ratio, "ideal ordering %.3f > %.3f", ratio_sw, sideswing_ratio);
    const auto ss = harness::run(testing::bundled("iphone5_sideswing")).report;
    const auto sw = harness::run(testing::bundled("iphone7_switching")).report;
    v.expect(sw.ratio > ss.ratio, "bundled ordering %.3f > %.3f", sw.ratio, ss.ratio);
}

// 5. Bundled phone scenarios (calibration reproductions).
void scenario_reproduction(Verdict& v) {
    const auto a = harness::run(testing::bundled("iphone5_sideswing")).report;
    v.expect(within_rel(a.theta_final, 17.6, 0.30), "iphone5 theta %.2f rad (17.6 +- 30%%)", a.theta_final);
    v.expect(within_rel(a.omega_max, 4.73, 0.02), "omega_max %.3f rad/s (4.73)", a.omega_max);
    v.expect(within(a.ratio, 0.15, 0.05), "ratio %.3f (0.15 +- 0.05)", a.ratio);
    v.expect(a.calibration_reproduction, "flagged as calibration reproduction");
    const auto b = harness::run(testing::bundled("iphone7_switching")).report;
    v.expect(within_rel(b.theta_final, 6.5, 0.30), "iphone7 theta %.2f rad (6.5 +- 30%%)", b.theta_final);
    v.expect(within(b.ratio, 0.58, 0.08), "ratio %.3f (0.58 +- 0.08)", b.ratio);
    v.expect(b.calibration_reproduction, "flagged as calibration reproduction");
}

// Heading gained per simulated minute and the ideal Switching gain for the amplitude
// at the attacker's current bracket.
struct MinuteGrowth {
    std::vector<double> growth, ideal;
};

MinuteGrowth per_minute(const harness::Scenario& sc, int minutes) {
    harness::Simulation sim(sc);
    MinuteGrowth out;
    auto bracket_amp = [&] {
        const auto& st = sim.attacker().state();
        return 0.5 * (sim.amplitude_at(st.f1_hz) + sim.amplitude_at(st.f2_hz));
    };
    for (int m = 0; m < minutes; ++m) {
        const double th0 = sim.victim().heading.theta, a0 = bracket_amp();
        sim.run_until(60.0 * (m + 1));
        const double a1 = bracket_amp();
        out.growth.push_back(sim.victim().heading.theta - th0);
        out.ideal.push_back(2.0 / pi * 0.5 * (a0 + a1) * 60.0);
    }
    return out;
}

// 6. Automatic adaptation under drift of n0*Fs.
void auto_adaptation(Verdict& v) {
    const auto base = testing::bundled("auto_drift");
    const double n = std::round(base.attacker.policy.f1_hz / base.rig.sampler.nominal_rate_hz);
    const double drift_per_min = std::abs(n * base.rig.sampler.drift.rate_hz_per_s * 60.0);
    v.expect(within(drift_per_min, 1.0, 1e-6), "n0*Fs drifts %.4f Hz/min", drift_per_min);

    const auto stalled = per_minute(testing::bundled("auto_drift", "non_adaptive"), 2);
    const double second = stalled.growth[1] / stalled.ideal[1];
    v.expect(std::abs(second) < 0.05, "non-adaptive minute 2: %.1f%% of ideal (< 5%%)", 100.0 * second);

    const auto adaptive = per_minute(base, 10);
    double worst = 1e9;
    for (std::size_t m = 0; m < adaptive.growth.size(); ++m)
        worst = std::min(worst, adaptive.growth[m] / adaptive.ideal[m]);
    v.expect(worst >= 0.90, "adaptive: worst minute %.1f%% of ideal over 10 min (>= 90%%)", 100.0 * worst);

    attack::AttackerState s;
    s.f1_hz = 27378.0;
    s.f2_hz = 27379.0;
    const double d1 = attack::auto_adapt(s, 1.0, 1.0).delta_f, d3 = attack::auto_adapt(s, 1.0, 3.0).delta_f;
    v.expect(d1 == 0.0 && within(d3, 0.25, 1e-12), "dF(r=1)=%.3f, dF(r=3)=%.3f", d1, d3);
}

// 7. Accelerometer rig at a 19.9 Hz sample rate.
void low_frequency(Verdict& v) {
    const auto a = core::alias_decompose(19.6, 19.9);
    v.expect(a.n == 1 && within(a.epsilon, -0.3, 1e-9), "alias of 19.6 Hz: n=%lld eps=%.4f",
             static_cast<long long>(a.n), a.epsilon);
    core::SamplerConfig s;
    s.nominal_rate_hz = 19.9;
    s.resolution_bits = 0;
    s.full_scale = 2.0;
    const auto tr = core::digitize(core::ToneProgram::single(19.6, 1.0, 0.0), s, 100.0);
    const auto f = zc_frequency_between(tr, 0.0, 100.0);
    const double measured = f ? departure_sign(tr, 1e-3) * *f : 0.0;
    v.expect(within(measured, -0.3, 0.01), "digitized alias %.4f Hz", measured);

    const auto ss = harness::run(testing::bundled("pixel_accel_vibration")).report;
    const auto sw = harness::run(testing::bundled("pixel_accel_vibration", "switching"), "switching").report;
    v.expect(within_rel(ss.theta_final, 73.9, 0.05), "side-swing %.2f m/s (73.9 +- 5%%)", ss.theta_final);
    v.expect(within_rel(sw.theta_final, 74.5, 0.05), "switching %.2f m/s (74.5 +- 5%%)", sw.theta_final);

    const auto est = harness::estimate_sample_rate(testing::bundled("pixel_accel_vibration"));
    v.expect(within(est.fs_hz, 19.9, 0.05), "estimated Fs %.4f Hz", est.fs_hz);
    bool aliases = est.dc_aliases.size() == 3;
    for (std::size_t k = 0; aliases && k < 3; ++k)
        aliases = within(est.dc_aliases[k], 19.9 * static_cast<double>(k + 1), 0.1);
    v.expect(aliases, "%zu DC aliases near 19.9/39.8/59.7", est.dc_aliases.size());
}

// 8. Acoustic channel laws.
void channel_laws(Verdict& v) {
    channel::SoundSource one;
    one.spl_ref_db = 110.0;
    auto eight = one;
    eight.n_sources = 8;
    const double gain = channel::spl_at_distance(eight, 20000.0, 0.5) - channel::spl_at_distance(one, 20000.0, 0.5);
    const std::vector<double> levels(8, 110.0);
    const double combined = channel::combine_coherent_sources(levels) - 110.0;
    v.expect(within(gain, 18.06, 0.01) && within(combined, 18.06, 0.01), "8 sources +%.4f dB / +%.4f dB", gain,
             combined);
    const double halved = channel::spl_at_distance(one, 20000.0, 1.0) - channel::spl_at_distance(one, 20000.0, 0.5);
    v.expect(within(halved, -6.02, 0.01), "distance doubling %.4f dB", halved);
}

// 9. Defenses.
void defenses(Verdict& v) {
    const auto sc = testing::bundled("defense_matrix");
    core::SamplerConfig adc = sc.rig.sampler;
    victims::DefenseConfig pairs;
    pairs.sampling = victims::SamplingStrategy::out_of_phase_pairs;
    pairs.assumed_frequency_hz = sc.attacker.policy.f1_hz;
    const channel::AnalogTone tone{sc.attacker.policy.f1_hz, 0.45};
    const double att = victims::attenuation_db(victims::apply_defense(pairs, adc, tone, 30.0),
                                               victims::apply_defense({}, adc, tone, 30.0));
    v.expect(att <= -40.0, "out-of-phase pairs %.1f dB (<= -40)", att);

    const auto rows = harness::sweep_defense_matrix(sc, sc.defense_matrix);
    const harness::DefenseRow* dyn = nullptr;
    const harness::DefenseRow* lpf = nullptr;
    for (const auto& r : rows) {
        if (r.name == "dynamic_rate")
            dyn = &r;
        if (r.name == "digital_lpf")
            lpf = &r;
    }
    v.expect(dyn && dyn->relative <= 0.1, "dynamic rate |theta| %.4g vs %.4g fixed (x%.1f reduction, >= 10)",
             dyn ? dyn->abs_theta : 0.0, rows[0].abs_theta, dyn && dyn->relative > 0 ? 1.0 / dyn->relative : 0.0);
    const double lpf_db = lpf ? 20.0 * std::log10(std::max(lpf->relative, 1e-12)) : -999.0;
    v.expect(lpf && lpf->attenuation_db > -3.0 && lpf_db > -3.0,
             "digital LPF alone: tone %.3f dB, heading %.3f dB (improvement < 3 dB)", lpf ? lpf->attenuation_db : 0.0,
             lpf_db);
}

// 10. Phase pacing and the DoS baseline.
void phase_pacing(Verdict& v) {
    const double fs = 200.0, eps = 0.5, phi1 = pi / 2.0;
    const int ic = 100;
    const double phi0 = phi1 - 2.0 * pi * eps * ic / fs;
    // eps1 = +eps up to the switch, half a sample after index ic; eps2 = -eps after it.
    core::ToneProgram prog({{0.0, 20000.0 + eps, 1.0}, {(ic + 0.5) / fs, 20000.0 - eps, 1.0}}, true, phi0);
    core::SamplerConfig s;
    s.nominal_rate_hz = fs;
    s.resolution_bits = 0;
    s.full_scale = 2.0;
    const auto tr = core::digitize(prog, s, 3.0);
    const double at_switch = tr.samples[ic].value;
    int held = 0;
    for (std::size_t i = ic + 1; i < tr.size() && tr.samples[i].value > 0.0; ++i)
        ++held;
    const int needed = static_cast<int>(std::floor(fs / (4.0 * eps)));
    const auto pred = core::predict_phase_pacing(eps, -eps, phi1, ic);
    v.expect(within(at_switch, 1.0, 1e-9) && pred.inverts, "alias at switch %.6f, inversion predicted", at_switch);
    v.expect(held >= needed, "%d positive samples after the switch (>= %d)", held, needed);

    attack::PolicyConfig dos;
    dos.policy = attack::PolicyKind::dos;
    dos.frequency_hz = 10000.5;
    const auto d = analytic_run(dos, 1.0, 24.0);
    const auto ss = analytic_run(side_swing_at(10000.5), 1.0, 24.0);
    v.expect(std::abs(d.theta) < 0.01 * std::abs(ss.theta), "DoS |theta| %.4g vs side-swing %.4g (< 1%%)",
             std::abs(d.theta), std::abs(ss.theta));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// 11. Determinism of every bundled scenario and variant.
void determinism(Verdict& v) {
    const fs::path root = fs::temp_directory_path() / "ooblab_acceptance_determinism";
    int runs = 0, identical = 0;
    for (const char* name : kBundled)
        for (const auto& [variant, sc] : harness::load_scenario_file(testing::scenario_path(name))) {
            const fs::path a = root / (std::string(name) + "_" + variant) / "a";
            const fs::path b = root / (std::string(name) + "_" + variant) / "b";
            harness::write_outputs(harness::run(sc, variant), a);
            harness::write_outputs(harness::run(sc, variant), b);
            bool same = true;
            for (const char* f : {"trace.csv", "telemetry.csv", "attack_events.csv"})
                same = same && slurp(a / f) == slurp(b / f) && !slurp(a / f).empty();
            ++runs;
            identical += same ? 1 : 0;
            if (!same)
                v.expect(false, "%s[%s] differs", name, variant.c_str());
        }
    fs::remove_all(root);
    v.expect(identical == runs, "%d of %d scenario runs byte-identical", identical, runs);
}

} // namespace

int main() {
    int failures = 0;
    auto report = [&](int id, const char* title, const std::function<void(Verdict&)>& body) {
        Verdict v;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            body(v);
        } catch (const std::exception& e) {
            v.expect(false, "threw: %s", e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %2d %s: %s (%.1f s)\n", v.ok() ? "PASS" : "FAIL", id, title, v.detail().c_str(), secs);
        std::fflush(stdout);
        failures += v.ok() ? 0 : 1;
    };

    double ss_ratio = 0.0;
    report(1, "drift amplification", drift_amplification);
    report(2, "digitization oracle", digitization_oracle);
    report(3, "side-swing analytics", [&](Verdict& v) { sideswing_analytics(v, ss_ratio); });
    report(4, "switching analytics", [&](Verdict& v) { switching_analytics(v, ss_ratio); });
    report(5, "scenario reproduction", scenario_reproduction);
    report(6, "automatic adaptation", auto_adaptation);
    report(7, "low-frequency generalization", low_frequency);
    report(8, "channel laws", channel_laws);
    report(9, "defenses", defenses);
    report(10, "phase pacing", phase_pacing);
    report(11, "determinism", determinism);
    std::printf("%d of 11 criteria failed\n", failures);
    return failures;
}
