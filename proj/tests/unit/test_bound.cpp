#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "rankagg/bound.hpp"
#include "rankagg/oracle.hpp"

using namespace rankagg;

TEST_CASE("psi") {
    CHECK(psi(0.0) == 0.0);
    CHECK(psi(0.5) == doctest::Approx(2.0));
    CHECK(std::isinf(psi(1.0)));
    CHECK(std::isinf(psi(3.0)));
    double prev = 0.0;
    for (double t = 0.01; t < 1.0; t += 0.01) {
        CHECK(psi(t) > prev);
        prev = psi(t);
    }
}

TEST_CASE("bound argument closed form for constant eta and equal weights") {
    // eta = 1/2 everywhere: argument = K * v / (K v)^{3/2} = 1/sqrt(K v), v = 1/2.
    for (std::size_t K : {8u, 200u}) {
        const EtaTable eta(Matrix<double>(3, K, 0.5));
        const std::vector<double> a(K, 1.0);
        const auto r = gap_bound(eta, a);
        CHECK(r.argument == doctest::Approx(1.0 / std::sqrt(K * 0.5)));
        CHECK(r.bound_value == doctest::Approx(psi(r.argument)));
        CHECK(r.K == K);
    }
    const EtaTable e8(Matrix<double>(2, 8, 0.5));
    CHECK(gap_bound(e8, std::vector<double>(8, 1.0)).argument == doctest::Approx(0.5));
    CHECK(gap_bound(e8, std::vector<double>(8, 1.0)).bound_value == doctest::Approx(2.0));
    const EtaTable e200(Matrix<double>(2, 200, 0.5));
    const auto r200 = gap_bound(e200, std::vector<double>(200, 1.0));
    CHECK(r200.argument == doctest::Approx(0.1));
    CHECK(r200.bound_value == doctest::Approx(0.2 / 0.9));
}

TEST_CASE("bound argument against a direct pair loop") {
    const EtaTable eta = oracle_ref::random_eta(5, 4, 3, 0.1, 0.9);
    const std::vector<double> a{1.0, 2.0, 0.5, 1.5};
    double total = 0.0;
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
            double num = 0.0, den = 0.0;
            for (std::size_t k = 0; k < 4; ++k) {
                const double v = eta(i, k) * (1 - eta(i, k)) + eta(j, k) * (1 - eta(j, k));
                num += a[k] * a[k] * a[k] * v;
                den += a[k] * a[k] * v;
            }
            total += num / std::pow(den, 1.5);
        }
    CHECK(gap_bound(eta, a).argument == doctest::Approx(total / 25).epsilon(1e-12));
}

TEST_CASE("degenerate variance") {
    const EtaTable eta(Matrix<double>(2, 2, std::vector<double>{0, 1, 1, 0}));
    CHECK_THROWS_AS(gap_bound(eta, std::vector<double>{1.0, 1.0}), DegenerateVariance);
}

TEST_CASE("measured gap is non-negative and below the bound") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const EtaTable eta = oracle_ref::random_eta(5, 4, seed, 0.2, 0.8);
        const std::vector<double> a(4, 1.0);
        const auto r = bound_report(eta, a);
        CHECK(r.empirical_gap >= -1e-12);
        CHECK(r.empirical_gap <= r.bound_value);
        const auto best = optimal_weak_order(JointLabelModel::independent(eta), gap_objective(a));
        CHECK(r.empirical_gap <= best.value + 1e-12);
    }
}
