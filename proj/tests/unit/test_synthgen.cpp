#include <doctest.h>

#include <cmath>
#include <limits>

#include "rankagg/synthgen.hpp"

using namespace rankagg;

TEST_CASE("sigmoid") {
    CHECK(sigmoid(0.0) == 0.5);
    CHECK(sigmoid(std::sqrt(2.0)) == doctest::Approx(0.8044).epsilon(1e-4));
    CHECK(sigmoid(-1000.0) == 0.0);
    CHECK(sigmoid(1000.0) == 1.0);
}

TEST_CASE("sigmoid pair generator") {
    const SigmoidSynthConfig c{.n = 400, .tau = 2.0, .rho = 0.3, .seed = 5};
    const auto d = gen_sigmoid_pair(c);
    REQUIRE(d.eta.has_value());
    CHECK(d.n() == 400);
    CHECK(d.K() == 2);
    for (std::size_t i = 0; i < d.n(); ++i) {
        const auto x = d.features.row(i);
        CHECK(std::abs(x[0]) <= 1.0);
        CHECK((*d.eta)(i, 0) == doctest::Approx(sigmoid(2.0 * (x[0] + x[1]) / std::sqrt(2.0))));
        CHECK((*d.eta)(i, 1) == doctest::Approx(sigmoid(2.0 * (x[1] - 0.3))));
    }
    CHECK(d.labels == sample_labels(*d.eta, c.seed));
    CHECK(sigmoid_eta(d.features, c) == *d.eta);
}

TEST_CASE("generators are deterministic and prefix-stable") {
    const auto a = gen_sigmoid_pair({.n = 100, .seed = 3});
    const auto b = gen_sigmoid_pair({.n = 100, .seed = 3});
    CHECK(a.features == b.features);
    CHECK(a.labels == b.labels);
    const auto big = gen_sigmoid_pair({.n = 150, .seed = 3});
    CHECK(big.features.row(99)[1] == a.features.row(99)[1]);
    CHECK(big.labels(42, 1) == a.labels(42, 1));
    CHECK_FALSE(gen_sigmoid_pair({.n = 100, .seed = 4}).features == a.features);
}

TEST_CASE("second prior is one half at zero offset") {
    const auto d = gen_sigmoid_pair({.n = 20000, .tau = 1.0, .rho = 0.0, .seed = 11});
    double m = 0.0;
    for (std::size_t i = 0; i < d.n(); ++i) m += d.labels(i, 1);
    CHECK(m / d.n() == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(gen_sigmoid_pair({.n = 0}), InvalidArgument);
    CHECK_THROWS_AS(gen_sigmoid_pair({.n = 10, .tau = std::numeric_limits<double>::infinity()}), InvalidArgument);
}

TEST_CASE("gaussian bi-level data") {
    const auto d = gen_gaussian_bilevel(300, 2);
    REQUIRE(d.eta.has_value());
    CHECK(d.eta->deterministic());
    for (std::size_t i = 0; i < d.n(); ++i)
        for (std::size_t k = 0; k < 2; ++k) CHECK((*d.eta)(i, k) == d.labels(i, k));
    // Non-negative mixing makes the two labels positively correlated.
    std::size_t agree = 0;
    for (std::size_t i = 0; i < d.n(); ++i) agree += d.labels(i, 0) == d.labels(i, 1);
    CHECK(agree > d.n() / 2);
}

TEST_CASE("d3 training pair") {
    const auto d = gen_d3_training_pair(200, 8, 3.0);
    CHECK(d.n() == 200);
    CHECK(d.features.d() == 2);
    CHECK(d.eta.has_value());
}

TEST_CASE("resampling to a target skew") {
    const auto d = gen_sigmoid_pair({.n = 1000, .tau = 2.0, .seed = 6});
    for (double target : {0.8, 0.9, 0.1}) {
        const auto r = resample_to_skew(d, 0, target, 1);
        CHECK(r.n() == d.n());
        std::size_t pos = 0;
        for (std::size_t i = 0; i < r.n(); ++i) pos += r.labels(i, 0);
        CHECK(pos == static_cast<std::size_t>(std::lround(target * 1000)));
        CHECK(r.eta.has_value());
    }
    CHECK(resample_to_skew(d, 0, 0.9, 1).features == resample_to_skew(d, 0, 0.9, 1).features);
    CHECK_THROWS_AS(resample_to_skew(d, 0, 1.0, 1), DegenerateLabel);
}
