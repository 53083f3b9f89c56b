#include "ooblab/core/digitize.hpp"
#include "ooblab/core/shaping.hpp"
#include "ooblab/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace ooblab;
using namespace ooblab::core;

namespace {

SamplerConfig adc() {
    SamplerConfig s;
    s.nominal_rate_hz = 200.0;
    s.resolution_bits = 16;
    s.full_scale = 8.7;
    return s;
}

} // namespace

TEST_CASE("an always-high gate leaves the digitized stream unchanged") {
    const auto tone = ToneProgram::single(20000.5, 1.0, 0.2);
    const auto shaped = shape_digital_amplitudes(tone, adc(), [](std::int64_t, double) { return true; }, {0.0, 5.0});
    const auto a = digitize(tone, adc(), 5.0), b = digitize(shaped, adc(), 5.0);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        REQUIRE(a.samples[i].value == b.samples[i].value);
}

TEST_CASE("gating on the carrier sign yields a one-sided stream") {
    const auto tone = ToneProgram::single(20000.5, 1.0, 0.0);
    const double q = quantization_step(16, 8.7);
    for (auto mode : {EnvelopeSwitching::zero_crossing, EnvelopeSwitching::instant}) {
        const auto shaped = shape_digital_amplitudes(
            tone, adc(), [](std::int64_t, double c) { return c > 0.0; }, {0.0, 10.0, mode});
        const auto tr = digitize(shaped, adc(), 10.0);
        const auto ref = digitize(tone, adc(), 10.0);
        double min_v = 0.0;
        for (std::size_t i = 0; i < tr.size(); ++i) {
            min_v = std::min(min_v, tr.samples[i].value);
            if (ref.samples[i].value > q)
                REQUIRE(tr.samples[i].value == doctest::Approx(ref.samples[i].value));
        }
        CHECK(min_v >= -q);
    }
}

TEST_CASE("per-sample levels follow the gate, not the neighbours") {
    const auto tone = ToneProgram::single(20000.5, 2.0, 0.0);
    const auto shaped = shape_digital_amplitudes(
        tone, adc(), [](std::int64_t i, double) { return i % 2 == 0; }, {0.5, 1.0});
    const auto tr = digitize(shaped, adc(), 1.0);
    const auto ref = digitize(tone, adc(), 1.0);
    const double q = quantization_step(16, 8.7);
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const double expect = ref.samples[i].value * (i % 2 == 0 ? 1.0 : 0.25);
        REQUIRE(std::abs(tr.samples[i].value - expect) <= 2.0 * q);
    }
}

TEST_CASE("shaping refuses carriers it cannot shape per sample") {
    auto gate = [](std::int64_t, double) { return true; };
    CHECK_THROWS_AS(shape_digital_amplitudes(ToneProgram::single(30.0, 1.0), adc(), gate, {}), UnsupportedError);
    CHECK_THROWS_AS(shape_digital_amplitudes(ToneProgram::single(1000.0, 1.0), adc(), gate, {}), UnsupportedError);
    CHECK_THROWS_AS(
        shape_digital_amplitudes(ToneProgram({{0.0, 20000.0, 1.0}, {1.0, 20001.0, 1.0}}), adc(), gate, {}),
        UnsupportedError);
    CHECK_THROWS_AS(shape_digital_amplitudes(ToneProgram::single(20000.0, 1.0), adc(), gate, {-1.0, 1.0}),
                    DomainError);
}
