#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "iad/errors.hpp"
#include "iad/running_stats.hpp"
#include "test_support.hpp"

using iad::RunningStats;

TEST_CASE("running stats: empty and single-sample behaviour") {
    RunningStats s;
    CHECK(s.count() == 0);
    CHECK(s.mean() == 0.0);
    CHECK_THROWS_AS(s.variance(), iad::InsufficientHistoryError);

    s.push(42.0);
    CHECK(s.count() == 1);
    CHECK(s.mean() == 42.0);
    CHECK_THROWS_AS(s.stddev(), iad::InsufficientHistoryError);
}

TEST_CASE("running stats: non-finite samples are rejected") {
    RunningStats s;
    CHECK_THROWS_AS(s.push(std::numeric_limits<double>::quiet_NaN()), iad::InvalidSampleError);
    CHECK_THROWS_AS(s.push(std::numeric_limits<double>::infinity()), iad::InvalidSampleError);
    CHECK(s.count() == 0);
}

TEST_CASE("running stats: known fold") {
    const std::vector<double> xs{2, 4, 4, 4, 5, 5, 7, 9};
    RunningStats s;
    for (double x : xs) s.push(x);
    CHECK(s.count() == 8);
    CHECK(s.mean() == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(s.variance() == doctest::Approx(32.0 / 7.0).epsilon(1e-15));
    CHECK(s.stddev() == doctest::Approx(std::sqrt(32.0 / 7.0)).epsilon(1e-15));
}

TEST_CASE("running stats: agrees with two-pass computation on random sequences") {
    oracle::TestRng rng(20260814);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = rng.integer(2, 400);
        // Mix of magnitudes, including an offset regime where naive
        // sum-of-squares formulas lose precision.
        const double offset = trial % 3 == 0 ? 1e6 : 0.0;
        std::vector<double> xs = rng.uniform_vector(n, 0.0, 100.0);
        for (double& x : xs) x += offset;

        RunningStats s;
        for (double x : xs) s.push(x);

        const double om = oracle::two_pass_mean(xs);
        const double os = oracle::two_pass_sample_std(xs);
        CHECK(std::abs(s.mean() - om) <= 1e-9 * std::max(1.0, std::abs(om)));
        CHECK(std::abs(s.stddev() - os) <= 1e-9 * std::max(1.0, std::abs(os)));
    }
}

TEST_CASE("running stats: order of arrival does not matter") {
    oracle::TestRng rng(7);
    std::vector<double> xs = rng.uniform_vector(257, 10.0, 90.0);
    RunningStats forward;
    for (double x : xs) forward.push(x);

    std::vector<double> reversed(xs.rbegin(), xs.rend());
    RunningStats backward;
    for (double x : reversed) backward.push(x);

    CHECK(forward.count() == backward.count());
    CHECK(forward.mean() == doctest::Approx(backward.mean()).epsilon(1e-12));
    CHECK(forward.stddev() == doctest::Approx(backward.stddev()).epsilon(1e-12));
}

TEST_CASE("running stats: constant input has zero variance") {
    RunningStats s;
    for (int i = 0; i < 1000; ++i) s.push(73.25);
    CHECK(s.mean() == doctest::Approx(73.25).epsilon(1e-15));
    CHECK(s.variance() >= 0.0);
    CHECK(s.variance() == doctest::Approx(0.0));
}

TEST_CASE("windowed mean") {
    const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
    CHECK(iad::windowed_mean(xs) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK_THROWS_AS(iad::windowed_mean(std::span<const double>{}), iad::InvalidWindowError);
}
