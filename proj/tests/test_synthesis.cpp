#include <doctest.h>

#include <cmath>

#include "armafield/autocorr.hpp"
#include "armafield/error.hpp"
#include "armafield/synthesis.hpp"
#include "oracles.hpp"

using namespace armafield;

namespace {

SynthesisConfig separable_config(std::size_t size, std::uint64_t seed) {
    SynthesisConfig c;
    c.order = ModelOrder::with_default_ar(1, 1, 0, 0);
    c.params = ArmaParams::zeros(c.order);
    c.params.a.set(1, 0, -0.5);
    c.params.a.set(0, 1, -0.5);
    c.params.a.set(1, 1, 0.25);
    c.rows = size;
    c.cols = size;
    c.burn_in = 64;
    c.seed = seed;
    return c;
}

SynthesisConfig white_config(std::size_t size, std::uint64_t seed) {
    SynthesisConfig c;
    c.order = {0, 0, 0, 0, 1, 1};
    c.params = ArmaParams::zeros(c.order);
    c.rows = size;
    c.cols = size;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_SUITE("synthesis") {

TEST_CASE("white noise has the innovation variance") {
    const Field f = synthesize(white_config(256, 0));
    CHECK(f.rows() == 256);
    CHECK(f.cols() == 256);
    CHECK(sample_variance(f.values()) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("separable AR(1,1) matches the 1D AR oracle") {
    const SynthesisConfig config = separable_config(512, 1);
    const Field field = synthesize(config);

    // Oracle: 1D AR(1) filters along each axis applied to the same noise.
    const Field noise = innovations(config);
    const Field reference = oracle::separable_ar(noise, 0.5).crop(64, 64, 512, 512);
    double worst = 0.0;
    for (std::size_t k = 0; k < field.size(); ++k)
        worst = std::max(worst, std::abs(field.values()[k] - reference.values()[k]));
    CHECK(worst < 1e-9);

    const LagGrid r = estimate_lags(zero_mean(field).field, 1, 1);
    CHECK(r.at(1, 0) / r.at(0, 0) == doctest::Approx(0.5).epsilon(0.1));
    CHECK(std::abs(r.at(1, 0) / r.at(0, 0) - 0.5) <= 0.05);
    CHECK(std::abs(r.at(0, 1) / r.at(0, 0) - 0.5) <= 0.05);
    // Stationary variance of the separable field: product of two AR(1) gains.
    CHECK(r.at(0, 0) == doctest::Approx(oracle::ar1_variance(0.5, 1.0) * oracle::ar1_variance(0.5, 1.0)).epsilon(0.1));
}

TEST_CASE("synthesis is deterministic for a fixed seed") {
    SynthesisConfig c = separable_config(64, 9);
    c.order = ModelOrder::with_default_ar(1, 1, 1, 1);
    const ArmaParams a = c.params;
    c.params = ArmaParams::zeros(c.order);
    c.params.a = a.a;
    c.params.b.set(1, 1, 0.3);
    const Field first = synthesize(c);
    const Field second = synthesize(c);
    CHECK(first == second);
    c.seed = 10;
    CHECK_FALSE(synthesize(c) == first);
}

TEST_CASE("pure AR synthesis equals the direct recursion bit for bit") {
    SynthesisConfig c = separable_config(96, 4);
    c.params.a.set(1, 1, 0.1);
    const Field full_noise = innovations(c);
    const Field expected = oracle::pure_ar(full_noise, c.params.a).crop(64, 64, 96, 96);
    CHECK(synthesize(c) == expected);
}

TEST_CASE("sample mean stays within three standard errors") {
    int outside = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Field f = synthesize(white_config(64, seed));
        double sum = 0.0;
        for (double v : f.values()) sum += v;
        const double mean = sum / static_cast<double>(f.size());
        if (std::abs(mean) >= 3.0 * 1.0 / std::sqrt(static_cast<double>(f.size()))) ++outside;
    }
    CHECK(outside <= 2);
}

TEST_CASE("stability_check") {
    const ModelOrder ar11 = ModelOrder::with_default_ar(1, 1, 0, 0);
    CHECK(stability_check(ar11, ArmaParams::zeros(ar11)));
    CHECK(stability_check(ar11, separable_config(8, 0).params));

    // 1D root check: 1 + a10 z^-1 has its root at z = -a10.
    ArmaParams unstable = ArmaParams::zeros(ar11);
    unstable.a.set(1, 0, -1.2);
    CHECK(std::abs(1.2) > 1.0);
    CHECK_FALSE(stability_check(ar11, unstable));

    // A 1D pole rho puts a fraction rho^64 of the impulse-response energy
    // outside the leading 32x32 quadrant.
    for (double rho : {0.3, 0.75, 0.8, 0.82, 0.9, 0.99}) {
        ArmaParams p = ArmaParams::zeros(ar11);
        p.a.set(0, 1, -rho);
        CHECK(stability_check(ar11, p) == (std::pow(rho, 64) < 1e-6));
    }

    // MA part never matters.
    const ModelOrder arma = ModelOrder::with_default_ar(1, 1, 1, 1);
    ArmaParams big_ma = ArmaParams::zeros(arma);
    big_ma.b.set(1, 1, 5.0);
    CHECK(stability_check(arma, big_ma));
}

TEST_CASE("unstable parameters raise an instability error") {
    SynthesisConfig c = separable_config(256, 0);
    c.params = ArmaParams::zeros(c.order);
    c.params.a.set(1, 0, -1.2);
    CHECK_THROWS_AS(synthesize(c), InstabilityError);
}

TEST_CASE("synthesis preconditions") {
    SynthesisConfig c = separable_config(16, 0);
    c.burn_in = 0;
    CHECK_THROWS_AS(synthesize(c), InvalidArgument);
    c.burn_in = 4;
    c.params.sigma2 = 0.0;
    CHECK_THROWS_AS(synthesize(c), InvalidArgument);
    c.params.sigma2 = 1.0;
    c.order = ModelOrder::with_default_ar(2, 1, 0, 0);
    CHECK_THROWS_AS(synthesize(c), InvalidArgument);
}

}  // TEST_SUITE
