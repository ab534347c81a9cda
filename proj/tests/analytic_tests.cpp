#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pqt/analytic.hpp"
#include "pqt/protocol.hpp"

using namespace pqt;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("concurrence round trip") {
    for (int i = 0; i <= 100; ++i) {
        double chi = 1e-3 + (kPi / 4.0 - 1e-3) * i / 100.0;
        double c = concurrence_from_chi(chi).c;
        CHECK(chi_from_concurrence(c) == doctest::Approx(chi).epsilon(1e-12));
    }
    CHECK_THROWS_AS(chi_from_concurrence(1.5), OutOfRangeError);
    CHECK_THROWS_AS(concurrence_from_chi(1.0), OutOfRangeError);
}

TEST_CASE("closed-form values at the endpoints") {
    CHECK(p_success(0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p_success(1, 1.0) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(p_success(2, 1.0) == doctest::Approx(0.875).epsilon(1e-14));
    CHECK(p_success(3, 1.0) == doctest::Approx(0.9375).epsilon(1e-14));
    for (int n = 0; n <= 3; ++n) CHECK(p_success(n, 0.0) == 0.0);
    CHECK_THROWS_AS(p_success(4, 0.5), UnsupportedDepthError);
    CHECK_THROWS_AS(increment(4, 0.5), UnsupportedDepthError);
    CHECK_THROWS_AS(increment(0, 0.5), UnsupportedDepthError);
}

TEST_CASE("increments agree with cumulative differences") {
    for (int i = 0; i <= 50; ++i) {
        double c = static_cast<double>(i) / 50.0;
        for (int n = 1; n <= 3; ++n) {
            CHECK(increment(n, c) ==
                  doctest::Approx(p_success(n, c) - p_success(n - 1, c)).epsilon(1e-12));
        }
        if (c > 0.0) CHECK(increment(2, c) <= increment(1, c) + 1e-15);
        if (c > 0.0) CHECK(increment(3, c) <= increment(2, c) + 1e-15);
    }
    // at maximal entanglement the first increment is exactly 1/4
    CHECK(increment(1, 1.0) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("trigonometric and polynomial routes agree") {
    for (int i = 0; i <= 200; ++i) {
        double chi = 1e-3 + (kPi / 4.0 - 1e-3) * i / 200.0;
        double c = std::sin(2.0 * chi);
        for (int n = 0; n <= 3; ++n) {
            CHECK(std::abs(p_success_trig(n, chi) - p_success(n, c)) < 1e-12);
        }
        auto [trig, poly] = trig_identity_check(chi);
        CHECK(std::abs(trig - poly) < 1e-12);
    }
    auto [trig, poly] = trig_identity_check(kPi / 4.0);
    CHECK(trig == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(poly == doctest::Approx(0.75).epsilon(1e-14));
    CHECK_THROWS_AS(trig_identity_check(1e-4), OutOfRangeError);
}

TEST_CASE("strict monotonicity in the concurrence") {
    for (int n = 0; n <= 3; ++n) {
        double prev = 0.0;
        for (int i = 1; i <= 200; ++i) {
            double c = static_cast<double>(i) / 200.0;
            double p = p_success(n, c);
            CHECK(p > prev);
            prev = p;
        }
    }
}

TEST_CASE("alternative third-increment transcription deviates") {
    // the variant bracket disagrees with the enumeration-confirmed form;
    // at C=1 it loses exactly 2/128
    CHECK(increment3_alt(1.0) == doctest::Approx(increment(3, 1.0) - 1.0 / 64.0).epsilon(1e-12));
    double max_dev = 0.0;
    for (int i = 0; i <= 100; ++i) {
        double c = static_cast<double>(i) / 100.0;
        max_dev = std::max(max_dev, std::abs(increment3_alt(c) - increment(3, c)));
    }
    CHECK(max_dev > 1e-4);
}

TEST_CASE("central cross-validation against the enumeration") {
    InfoQubit info{0.6, 0.8};
    for (int n = 0; n <= 3; ++n) {
        for (int i = 0; i <= 40; ++i) {
            double chi = 1e-3 + (kPi / 4.0 - 1e-3) * i / 40.0;
            ProtocolConfig config;
            config.max_repetitions = n;
            ProtocolTrace trace = run_enumeration(info, GhzResource{chi}, config);
            CHECK(std::abs(trace.per_attempt_success.back() -
                           p_success(n, std::sin(2.0 * chi))) < 1e-10);
        }
    }
}

TEST_CASE("baseline fidelity") {
    CHECK(baseline_fidelity(1.0) == doctest::Approx(1.0));
    CHECK(baseline_fidelity(0.0) == doctest::Approx(2.0 / 3.0));
    CHECK(baseline_fidelity(0.5) == doctest::Approx(5.0 / 6.0));
}

TEST_CASE("success curve sampling") {
    SuccessCurve curve = success_curve(2, {0.0, 0.5, 1.0});
    REQUIRE(curve.samples.size() == 3);
    CHECK(curve.samples[0].second == 0.0);
    CHECK(curve.samples[2].second == doctest::Approx(0.875).epsilon(1e-14));
    CHECK(curve.samples[1].second == doctest::Approx(p_success(2, 0.5)));
}
