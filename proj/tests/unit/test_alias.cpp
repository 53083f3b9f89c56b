#include "ooblab/core/alias.hpp"
#include "ooblab/core/sampler.hpp"
#include "ooblab/core/zero_crossing.hpp"
#include "ooblab/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace ooblab;
using namespace ooblab::core;

TEST_CASE("alias decomposition of worked examples") {
    auto a = alias_decompose(20000.0, 200.0);
    CHECK(a.n == 100);
    CHECK(a.epsilon == doctest::Approx(0.0));

    auto b = alias_decompose(300.0, 200.0);
    CHECK(b.n == 1);
    CHECK(b.epsilon == doctest::Approx(100.0)); // the +Fs/2 edge belongs to the upper interval

    auto c = alias_decompose(19.6, 19.9);
    CHECK(c.n == 1);
    CHECK(c.epsilon == doctest::Approx(-0.3).epsilon(1e-9));

    auto d = alias_decompose(27378.0, 99.92153284671533);
    CHECK(d.n == 274);
    CHECK(d.epsilon == doctest::Approx(-0.5).epsilon(1e-6));
}

TEST_CASE("alias decomposition reconstructs F with epsilon in (-Fs/2, Fs/2]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> fs_d(10.0, 2000.0), f_d(0.1, 40000.0);
    for (int k = 0; k < 20000; ++k) {
        const double fs = fs_d(rng), f = f_d(rng);
        const auto r = alias_decompose(f, fs);
        REQUIRE(r.n >= 0);
        REQUIRE(r.epsilon > -fs / 2.0);
        REQUIRE(r.epsilon <= fs / 2.0);
        REQUIRE(static_cast<double>(r.n) * fs + r.epsilon == doctest::Approx(f).epsilon(1e-12));
    }
}

TEST_CASE("alias decomposition rejects nonpositive and non-finite input") {
    CHECK_THROWS_AS(alias_decompose(0.0, 100.0), DomainError);
    CHECK_THROWS_AS(alias_decompose(100.0, -1.0), DomainError);
    CHECK_THROWS_AS(alias_decompose(NAN, 100.0), DomainError);
    CHECK_THROWS_AS(alias_decompose(100.0, INFINITY), DomainError);
    CHECK_THROWS_AS(drift_deviation(-1, 0.1), DomainError);
}

TEST_CASE("drift deviation is -n times the rate change") {
    CHECK(drift_deviation(100, 0.01) == doctest::Approx(-1.0));
    CHECK(drift_deviation(0, 0.5) == 0.0);
    CHECK(drift_deviation(137, -0.02) == doctest::Approx(2.74));
}

TEST_CASE("drift deviation agrees with differencing two decompositions") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> fs_d(50.0, 500.0), eps_d(-0.2, 0.2), dfs_d(-0.01, 0.01);
    std::uniform_int_distribution<int> n_d(1, 300);
    for (int k = 0; k < 2000; ++k) {
        const double fs = fs_d(rng), dfs = dfs_d(rng);
        const int n = n_d(rng);
        const double f = n * fs + eps_d(rng) * fs;
        const auto before = alias_decompose(f, fs);
        const auto after = alias_decompose(f, fs + dfs);
        if (after.n != before.n)
            continue; // the shift wrapped into a neighbouring interval
        REQUIRE(after.epsilon - before.epsilon ==
                doctest::Approx(drift_deviation(before.n, dfs)).epsilon(1e-6).scale(f));
    }
}

TEST_CASE("quantizer rounds to the ADC grid and clips") {
    const double q = quantization_step(16, 8.7);
    CHECK(q == doctest::Approx(8.7 / 32768.0));
    CHECK(quantize(0.3 * q, 16, 8.7) == 0.0);
    CHECK(quantize(0.6 * q, 16, 8.7) == doctest::Approx(q));
    CHECK(quantize(100.0, 16, 8.7) == doctest::Approx(8.7).epsilon(1e-3));
    CHECK(quantize(-100.0, 16, 8.7) >= -8.7);
    CHECK(quantize(1.2345, 0, 8.7) == 1.2345);
    CHECK(quantization_step(0, 8.7) == 0.0);
}

TEST_CASE("sample clock holds a linear drift inside the one percent envelope") {
    SamplerConfig s;
    s.nominal_rate_hz = 100.0;
    s.drift = DriftModel::linear(10.0); // would reach +1000% without the clamp
    SampleClock clock(s);
    double last = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const auto in = clock.next();
        REQUIRE(in.rate <= 101.0 + 1e-9);
        REQUIRE(in.rate >= 99.0 - 1e-9);
        if (i > 0)
            REQUIRE(static_cast<double>(in.time) > last);
        last = static_cast<double>(in.time);
    }
}

TEST_CASE("random walk drift is reproducible from its seed") {
    SamplerConfig s;
    s.nominal_rate_hz = 200.0;
    s.drift = DriftModel::random_walk(0.05, 42);
    SampleClock a(s), b(s);
    for (int i = 0; i < 5000; ++i)
        REQUIRE(a.next().time == b.next().time);
}

TEST_CASE("zero crossing estimator recovers a sinusoid's frequency") {
    for (double f : {0.3, 1.0, 2.5, 7.0}) {
        std::vector<double> t, v;
        for (int i = 0; i < 20000; ++i) {
            t.push_back(i / 200.0);
            v.push_back(std::sin(2.0 * std::numbers::pi * f * t.back() + 0.4));
        }
        const auto est = zero_crossing_frequency(t, v);
        REQUIRE(est.has_value());
        CHECK(*est == doctest::Approx(f).epsilon(0.01));
    }
}

TEST_CASE("zero crossings respect the baseline and report direction") {
    const std::vector<double> t{0, 1, 2, 3, 4};
    const std::vector<double> v{9.0, 10.0, 9.0, 10.5, 10.5};
    const auto zc = find_zero_crossings(t, v, 9.5);
    REQUIRE(zc.size() == 3);
    CHECK(zc[0].direction == 1);
    CHECK(zc[0].time_s == doctest::Approx(0.5));
    CHECK(zc[1].direction == -1);
    CHECK(zc[2].direction == 1);
    CHECK_FALSE(zero_crossing_frequency(std::vector<double>{0, 1}, std::vector<double>{1, 1}).has_value());
    CHECK_THROWS_AS(find_zero_crossings(t, std::vector<double>{1.0}), DomainError);
}
