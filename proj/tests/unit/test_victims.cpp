#include "ooblab/errors.hpp"
#include "ooblab/victims/defense.hpp"
#include "ooblab/victims/heading.hpp"
#include "ooblab/victims/models.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace ooblab;
using namespace ooblab::victims;

TEST_CASE("a constant rate integrates to rate times time") {
    for (auto rule : {IntegrationRule::rectangular, IntegrationRule::trapezoidal}) {
        HeadingState h;
        for (int i = 0; i < 1000; ++i)
            integrate_sample(h, 1.0, 0.01, rule);
        CHECK(h.theta == doctest::Approx(10.0));
        CHECK(h.elapsed_s == doctest::Approx(10.0));
        CHECK(h.mean_rate() == doctest::Approx(1.0));
    }
}

TEST_CASE("integrating a trace subtracts the baseline and uses per-sample rates") {
    std::vector<core::TraceSample> s;
    std::vector<double> rates;
    for (int i = 0; i < 200; ++i) {
        s.push_back({i, i * 0.05, 9.80665 + 0.5});
        rates.push_back(20.0);
    }
    const auto h = integrate_heading(s, rates, IntegrationRule::rectangular, 9.80665);
    CHECK(h.theta == doctest::Approx(5.0));
    CHECK(h.omega_max == doctest::Approx(0.5));
    rates.pop_back();
    CHECK_THROWS_AS(integrate_heading(s, rates), DomainError);
}

TEST_CASE("a stabilizer settles where the injected rate balances recalibration") {
    VictimModel m;
    m.kind = VictimKind::stabilizer;
    m.calibration_rate = 0.5;
    VictimState s;
    const double dt = 0.005, w = 0.8;
    for (int i = 0; i < 8000; ++i) {
        integrate_sample(s.heading, w, dt);
        step_stabilizer(m, s, dt, 0);
    }
    CHECK(s.heading.theta == doctest::Approx(w / m.calibration_rate).epsilon(0.02));

    const double start = s.heading.theta;
    for (int i = 0; i < 400; ++i) {
        integrate_sample(s.heading, 0.0, dt);
        step_stabilizer(m, s, dt, 0);
    }
    // Two seconds of pure recalibration: exp(-0.5 * 2).
    CHECK(s.heading.theta == doctest::Approx(start * std::exp(-1.0)).epsilon(0.01));
}

TEST_CASE("an uncalibrated stabilizer axis keeps its heading") {
    VictimModel m;
    m.kind = VictimKind::stabilizer;
    VictimState s;
    for (int i = 0; i < 100; ++i) {
        integrate_sample(s.heading, 1.0, 0.01);
        step_stabilizer(m, s, 0.01, 2);
    }
    for (int i = 0; i < 1000; ++i) {
        integrate_sample(s.heading, 0.0, 0.01);
        const auto out = step_stabilizer(m, s, 0.01, 2);
        REQUIRE(out.actuation.level == doctest::Approx(-1.0));
    }
}

TEST_CASE("open-loop actuation persists once the injection stops") {
    VictimModel m;
    m.kind = VictimKind::open_loop_motor;
    m.actuation_gain = 2.0;
    VictimState s;
    for (int i = 0; i < 50; ++i) {
        integrate_sample(s.heading, 1.0, 0.01);
        step_open_loop(m, s, 0.01);
    }
    for (int i = 0; i < 500; ++i) {
        integrate_sample(s.heading, 0.0, 0.01);
        const auto out = step_victim(m, s, 0.01, 0);
        REQUIRE(out.actuation.level == doctest::Approx(1.0));
        REQUIRE(out.actuation.rate == 0.0);
    }
}

TEST_CASE("the balancer answers a spoofed tilt and reports one fall") {
    VictimModel m;
    m.kind = VictimKind::balancer;
    m.kp = 2.0;
    m.kd = 10.0;
    m.tilt_fault_rad = 1.0;
    VictimState s;
    integrate_sample(s.heading, 0.5, 0.01);
    auto out = step_balancer(m, s, 0.01);
    CHECK(out.actuation.rate == doctest::Approx(2.0 * 0.005 + 10.0 * 0.5));
    CHECK(out.actuation.rate > 0.0);
    int falls = 0;
    for (int i = 0; i < 1000; ++i) {
        integrate_sample(s.heading, 0.5, 0.01);
        if (step_balancer(m, s, 0.01).event == std::optional<std::string>("fall"))
            ++falls;
    }
    CHECK(falls == 1);
    CHECK(s.faulted);
}

TEST_CASE("the DoS check fires at the threshold, not just above it") {
    VictimModel m;
    m.kind = VictimKind::motion_wakeup;
    m.fault_threshold = 0.8;
    m.reference = 9.80665;
    const std::vector<double> at{9.80665, 9.80665 + 0.8, 9.80665};
    const std::vector<double> below{9.80665 + 0.79, 9.80665 - 0.79};
    const auto ev = dos_check(m, at);
    REQUIRE(ev.has_value());
    CHECK(ev->kind == "wake");
    CHECK_FALSE(dos_check(m, below).has_value());
    CHECK_FALSE(dos_check(m, std::vector<double>{}).has_value());
    m.kind = VictimKind::balancer;
    CHECK(dos_check(m, at)->kind == "fault");
}

TEST_CASE("victim models are validated") {
    VictimModel m;
    m.kp = -1.0;
    CHECK_THROWS_AS(validate(m), ConfigError);
    m = {};
    m.window_s = 0.0;
    CHECK_THROWS_AS(validate(m), ConfigError);
    CHECK_THROWS_AS(victim_kind_from_string("toaster"), ConfigError);
}

namespace {

core::SamplerConfig gyro_adc() {
    core::SamplerConfig s;
    s.nominal_rate_hz = 99.92153284671533;
    s.resolution_bits = 16;
    s.full_scale = 8.7;
    return s;
}

const channel::AnalogTone kTone{27378.0, 0.45};

} // namespace

TEST_CASE("an analog low-pass ahead of the ADC removes the tone") {
    DefenseConfig d;
    d.analog_lpf_hz = 45.0;
    const auto ref = apply_defense({}, gyro_adc(), kTone, 20.0);
    const auto out = apply_defense(d, gyro_adc(), kTone, 20.0);
    CHECK(attenuation_db(out, ref) <= -40.0);
}

TEST_CASE("out-of-phase pair averaging cancels the injected tone") {
    DefenseConfig d;
    d.sampling = SamplingStrategy::out_of_phase_pairs;
    d.assumed_frequency_hz = 27378.0;
    const auto ref = apply_defense({}, gyro_adc(), kTone, 20.0);
    const auto out = apply_defense(d, gyro_adc(), kTone, 20.0);
    CHECK(attenuation_db(out, ref) <= -40.0);
}

TEST_CASE("a digital low-pass cannot undo an alias that is already in band") {
    DefenseConfig d;
    d.digital_lpf_hz = 20.0;
    const auto ref = apply_defense({}, gyro_adc(), kTone, 20.0);
    const auto out = apply_defense(d, gyro_adc(), kTone, 20.0);
    CHECK(attenuation_db(out, ref) > -3.0);
}

TEST_CASE("randomized and dynamic sampling keep the sample count near nominal") {
    DefenseConfig jitter;
    jitter.sampling = SamplingStrategy::randomized_delay;
    jitter.max_jitter_s = 0.002;
    jitter.seed = 4;
    const auto a = apply_defense(jitter, gyro_adc(), kTone, 10.0);
    CHECK(std::abs(static_cast<double>(a.size()) - 999.2) <= 2.0);

    DefenseConfig dyn;
    dyn.sampling = SamplingStrategy::dynamic_rate;
    dyn.rates_hz = {93.0, 107.0};
    dyn.dwell_s = 0.5;
    dyn.seed = 4;
    const auto b = apply_defense(dyn, gyro_adc(), kTone, 10.0);
    for (double r : b.effective_rate_log)
        REQUIRE((std::abs(r - 93.0) < 1e-9 || std::abs(r - 107.0) < 1e-9));
}

TEST_CASE("defense configuration is validated") {
    DefenseConfig d;
    d.analog_lpf_hz = -1.0;
    CHECK_THROWS_AS(validate(d), ConfigError);
    d = {};
    d.sampling = SamplingStrategy::dynamic_rate;
    CHECK_THROWS_AS(validate(d), ConfigError);
    d = {};
    d.sampling = SamplingStrategy::out_of_phase_pairs;
    CHECK_THROWS_AS(validate(d), ConfigError);
    CHECK_THROWS_AS(sampling_strategy_from_string("shuffle"), ConfigError);
    CHECK(DefenseConfig{}.is_none());
}
