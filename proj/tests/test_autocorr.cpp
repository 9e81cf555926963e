#include <doctest.h>

#include <cmath>
#include <random>

#include "armafield/autocorr.hpp"
#include "armafield/error.hpp"
#include "armafield/synthesis.hpp"
#include "oracles.hpp"

using namespace armafield;

namespace {

Field white_field(std::size_t size, std::uint64_t seed) {
    SynthesisConfig c;
    c.order = {0, 0, 0, 0, 1, 1};
    c.params = ArmaParams::zeros(c.order);
    c.rows = size;
    c.cols = size;
    c.seed = seed;
    return zero_mean(synthesize(c)).field;
}

Field random_field(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<double> v(rows * cols);
    for (double& x : v) x = g(rng);
    return Field(rows, cols, v);
}

// Direct double loop over the definition, one lag at a time.
double direct_lag(const Field& x, int k, int l) {
    const auto n1 = static_cast<long>(x.rows()), n2 = static_cast<long>(x.cols());
    long double sum = 0;
    long count = 0;
    for (long i = 0; i < n1; ++i)
        for (long j = 0; j < n2; ++j) {
            const long a = i + k, b = j + l;
            if (a < 0 || a >= n1 || b < 0 || b >= n2) continue;
            sum += static_cast<long double>(x(static_cast<std::size_t>(i), static_cast<std::size_t>(j))) *
                   x(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
            ++count;
        }
    return static_cast<double>(sum / count);
}

}  // namespace

TEST_SUITE("autocorr") {

TEST_CASE("2x2 checkerboard by hand") {
    const Field f(2, 2, std::vector<double>{1, -1, -1, 1});
    const LagGrid r = estimate_lags(f, 1, 1);
    CHECK(r.at(0, 0) == 1.0);
    CHECK(r.at(1, 1) == 1.0);
    CHECK(r.at(1, 0) == -1.0);
    CHECK(r.at(0, 1) == -1.0);
    CHECK(r.at(1, -1) == 1.0);
    CHECK(r.at(-1, 0) == -1.0);
}

TEST_CASE("white noise lags") {
    const LagGrid r = estimate_lags(white_field(256, 2), 2, 2);
    CHECK(std::abs(r.at(0, 0) - 1.0) <= 0.05);
    for (int k = -2; k <= 2; ++k)
        for (int l = -2; l <= 2; ++l)
            if (k != 0 || l != 0) CHECK(std::abs(r.at(k, l)) <= 0.05);
}

TEST_CASE("white noise correlations vanish at 512x512") {
    const LagGrid r = estimate_lags(white_field(512, 5), 3, 3);
    double worst = 0.0;
    for (int k = -3; k <= 3; ++k)
        for (int l = -3; l <= 3; ++l)
            if (k != 0 || l != 0) worst = std::max(worst, std::abs(r.at(k, l)) / r.at(0, 0));
    CHECK(worst < 0.05);
}

TEST_CASE("separable AR(1,1) diagonal correlation") {
    SynthesisConfig c;
    c.order = ModelOrder::with_default_ar(1, 1, 0, 0);
    c.params = ArmaParams::zeros(c.order);
    c.params.a.set(1, 0, -0.5);
    c.params.a.set(0, 1, -0.5);
    c.params.a.set(1, 1, 0.25);
    c.seed = 3;
    const LagGrid r = estimate_lags(zero_mean(synthesize(c)).field, 2, 2);
    for (int k = -2; k <= 2; ++k)
        for (int l = -2; l <= 2; ++l)
            CHECK(std::abs(r.at(k, l) / r.at(0, 0) - oracle::separable_correlation(0.5, k, l)) <= 0.05);
}

TEST_CASE("lags match the direct definition for every sign combination") {
    const Field f = random_field(9, 7, 11);
    const LagGrid r = estimate_lags(f, 3, 4);
    for (int k = -3; k <= 3; ++k)
        for (int l = -4; l <= 4; ++l) CHECK(r.at(k, l) == doctest::Approx(direct_lag(f, k, l)).epsilon(1e-12));
}

TEST_CASE("lag estimates are even in x and quadratic in scale") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Field f = random_field(20, 24, seed);
        Field neg = f, scaled = f;
        for (std::size_t k = 0; k < f.size(); ++k) {
            neg.values()[k] = -f.values()[k];
            scaled.values()[k] = 4.0 * f.values()[k];
        }
        const LagGrid r = estimate_lags(f, 3, 3);
        const LagGrid rn = estimate_lags(neg, 3, 3);
        const LagGrid rs = estimate_lags(scaled, 3, 3);
        for (int k = -3; k <= 3; ++k)
            for (int l = -3; l <= 3; ++l) {
                CHECK(rn.at(k, l) == r.at(k, l));
                CHECK(rs.at(k, l) == 16.0 * r.at(k, l));
                CHECK(r.at(-k, -l) == r.at(k, l));
            }
    }
}

TEST_CASE("lag bounds") {
    const Field f = random_field(4, 5, 1);
    CHECK_THROWS_AS(estimate_lags(f, 4, 1), InvalidArgument);
    CHECK_THROWS_AS(estimate_lags(f, 1, 5), InvalidArgument);
    CHECK_NOTHROW(estimate_lags(f, 3, 4));
    const LagGrid r = estimate_lags(f, 1, 1);
    CHECK_THROWS(r.at(2, 0));
}

}  // TEST_SUITE
