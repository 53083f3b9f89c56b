#include "ooblab/channel/acoustic.hpp"
#include "ooblab/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace ooblab;
using namespace ooblab::channel;

TEST_CASE("coherent sources add in pressure") {
    const std::vector<double> eight(8, 110.0);
    CHECK(combine_coherent_sources(eight) - 110.0 == doctest::Approx(18.0618).epsilon(1e-4));
    const std::vector<double> two{80.0, 80.0};
    CHECK(combine_coherent_sources(two) == doctest::Approx(86.0206).epsilon(1e-6));
    const std::vector<double> one{93.0};
    CHECK(combine_coherent_sources(one) == doctest::Approx(93.0));
    CHECK_THROWS_AS(combine_coherent_sources(std::vector<double>{}), DomainError);
}

TEST_CASE("combining is order independent and monotone") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> l_d(60.0, 140.0);
    for (int k = 0; k < 200; ++k) {
        std::vector<double> levels(1 + k % 9);
        for (auto& l : levels)
            l = l_d(rng);
        const double total = combine_coherent_sources(levels);
        auto shuffled = levels;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        REQUIRE(combine_coherent_sources(shuffled) == doctest::Approx(total).epsilon(1e-12));
        REQUIRE(total >= *std::max_element(levels.begin(), levels.end()));
        levels.push_back(l_d(rng));
        REQUIRE(combine_coherent_sources(levels) > total);
    }
}

TEST_CASE("spherical spreading and source count") {
    SoundSource s;
    s.spl_ref_db = 110.0;
    s.reference_distance_m = 0.1;
    const double near = spl_at_distance(s, 20000.0, 0.5);
    CHECK(spl_at_distance(s, 20000.0, 1.0) - near == doctest::Approx(-6.0206).epsilon(1e-4));
    CHECK(spl_at_distance(s, 20000.0, 0.1) == doctest::Approx(110.0));
    s.n_sources = 8;
    CHECK(spl_at_distance(s, 20000.0, 0.5) - near == doctest::Approx(18.0618).epsilon(1e-4));
    CHECK_THROWS_AS(spl_at_distance(s, 20000.0, 0.0), DomainError);
    s.n_sources = 0;
    CHECK_THROWS_AS(spl_at_distance(s, 20000.0, 1.0), DomainError);
}

TEST_CASE("SPL and pascal conversions round-trip") {
    CHECK(spl_to_pascal(93.9794) == doctest::Approx(1.0).epsilon(1e-5));
    for (double l : {0.0, 40.0, 94.0, 120.0, 150.0})
        CHECK(pascal_to_spl(spl_to_pascal(l)) == doctest::Approx(l).epsilon(1e-12));
    CHECK_THROWS_AS(pascal_to_spl(0.0), DomainError);
}

TEST_CASE("the response table interpolates and refuses to extrapolate") {
    FrequencyResponse r({{19000.0, -2.0}, {21000.0, 2.0}});
    CHECK(r.offset_db(20000.0) == doctest::Approx(0.0));
    CHECK(r.offset_db(19500.0) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(r.offset_db(18000.0), RangeError);
    CHECK_THROWS_AS(r.offset_db(22000.0), RangeError);
    CHECK(FrequencyResponse().offset_db(123.0) == 0.0);
}

TEST_CASE("the resonant band peaks at its center and falls to a tenth at the edge") {
    const auto r = ResonantFront::from_band(19900.0, 20100.0);
    CHECK(r.gain(r.f0) == doctest::Approx(1.0));
    const double edge = std::max(r.gain(19900.0), r.gain(20100.0));
    CHECK(edge == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(r.gain(19899.0) == 0.0);
    CHECK(r.gain(20101.0) == 0.0);
    for (double f = 19900.0; f < r.f0; f += 5.0)
        REQUIRE(r.gain(f) < r.gain(f + 5.0));
    CHECK_THROWS_AS(ResonantFront::from_band(100.0, 50.0), DomainError);
}

TEST_CASE("solved sensitivity reproduces the calibration target") {
    SoundSource s;
    s.spl_ref_db = 110.0;
    const auto front = ResonantFront::from_band(19900.0, 20100.0);
    const double ks = solve_sensitivity(s, 0.5, 19976.0, front, 4.73);
    auto calibrated = front;
    calibrated.sensitivity = ks;
    CHECK(induced_amplitude(s, 0.5, 19976.0, calibrated) == doctest::Approx(4.73));
    CHECK(induced_amplitude(s, 0.5, 25000.0, calibrated) == 0.0);
    CHECK_THROWS_AS(solve_sensitivity(s, 0.5, 25000.0, front, 1.0), DomainError);
}

TEST_CASE("vibration drive scales linearly with coupling") {
    VibrationChannel v;
    v.coupling_gain = 10.08;
    CHECK(vibration_drive(v, 19.6, 0.5).amplitude == doctest::Approx(5.04));
    CHECK(vibration_drive(v, 19.6, 0.5).frequency_hz == 19.6);
    CHECK_THROWS_AS(vibration_drive(v, 0.0, 1.0), DomainError);
}
