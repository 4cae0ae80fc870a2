#include <doctest.h>

#include <algorithm>
#include <map>

#include "oracles.hpp"
#include "rankagg/metrics.hpp"
#include "rankagg/oracle.hpp"
#include "rankagg/synthgen.hpp"

using namespace rankagg;

namespace {

SampledLabels bilevel(std::initializer_list<std::uint8_t> flat) {
    return SampledLabels(Matrix<std::uint8_t>(flat.size() / 2, 2, std::vector<std::uint8_t>(flat)));
}

}  // namespace

TEST_CASE("hypothesis space layout") {
    const auto y = bilevel({0, 0, 1, 0, 0, 1, 1, 1, 1, 0});
    const HypothesisSpace h(y, 3);
    CHECK(h.M() == 3);
    CHECK(h.total() == 27);
    CHECK(h.free_rows() == std::vector<std::size_t>{1, 2, 4});
    CHECK(h.scores(0) == std::vector<double>{0, 1, 1, 3, 1});
    CHECK(h.scores(26) == std::vector<double>{0, 3, 3, 3, 3});
    CHECK(h.scores(1) == std::vector<double>{0, 1, 1, 3, 2});
    std::uint64_t visits = 0, last = 0;
    enumerate_hypotheses(h, [&](std::uint64_t i, std::span<const double> s) {
        CHECK(std::vector<double>(s.begin(), s.end()) == h.scores(i));
        last = i;
        ++visits;
    });
    CHECK(visits == 27);
    CHECK(last == 26);
}

TEST_CASE("hypothesis budget") {
    Matrix<std::uint8_t> m(30, 2);
    for (std::size_t i = 0; i < 30; ++i) m(i, 0) = 1;
    try {
        HypothesisSpace h(SampledLabels(m), 3);
        FAIL("expected BudgetExceeded");
    } catch (const BudgetExceeded& e) {
        CHECK(e.requested() == 205891132094649ULL);  // 3^30
    }
    Matrix<std::uint8_t> big(70, 2);
    for (std::size_t i = 0; i < 70; ++i) big(i, 0) = 1;
    try {
        HypothesisSpace h(SampledLabels(big), 3);
        FAIL("expected BudgetExceeded");
    } catch (const BudgetExceeded& e) {
        CHECK(e.requested() == UINT64_MAX);
    }
}

TEST_CASE("pair counts against the AUC routines") {
    const auto d = gen_gaussian_bilevel(14, 3);
    const HypothesisSpace h(d.labels, 3);
    for (std::uint64_t idx = 0; idx < h.total(); idx += std::max<std::uint64_t>(1, h.total() / 37)) {
        const auto s = h.scores(idx);
        const auto c = pair_counts(h, s);
        for (std::size_t k = 0; k < 2; ++k) {
            const auto y = d.labels.column(k);
            std::size_t pos = 0;
            for (auto v : y) pos += v;
            const double pairs = double(pos) * double(y.size() - pos);
            CHECK(c.label[k] == doctest::Approx(2 * pairs * oracle_ref::auc_pairs(s, y)));
        }
        std::vector<int> sum(14), prod(14);
        for (std::size_t i = 0; i < 14; ++i) {
            sum[i] = d.labels(i, 0) + d.labels(i, 1);
            prod[i] = d.labels(i, 0) * d.labels(i, 1);
        }
        double wins = 0.0;
        for (std::size_t i = 0; i < 14; ++i)
            for (std::size_t j = 0; j < 14; ++j)
                if (sum[i] > sum[j]) wins += 2 * oracle_ref::H(s[i], s[j]);
        CHECK(c.sum_uniform == doctest::Approx(wins));
        double pw = 0.0;
        for (std::size_t i = 0; i < 14; ++i)
            for (std::size_t j = 0; j < 14; ++j)
                if (prod[i] > prod[j]) pw += 2 * oracle_ref::H(s[i], s[j]);
        CHECK(c.product == doctest::Approx(pw));
    }
}

TEST_CASE("maximizer sets agree with a naive scan") {
    const auto d = gen_gaussian_bilevel(16, 0);
    const HypothesisSpace h(d.labels, 3);
    const auto sets = maximizer_sets(h, 3, 2);
    const auto single = maximizer_sets(h, 3, 1);
    CHECK(sets.label_agg == single.label_agg);
    CHECK(sets.front == single.front);
    std::int64_t best = -1;
    std::vector<std::uint64_t> arg;
    for (std::uint64_t i = 0; i < h.total(); ++i) {
        const auto c = pair_counts(h, h.scores(i));
        if (c.sum_uniform > best) best = c.sum_uniform, arg.clear();
        if (c.sum_uniform == best) arg.push_back(i);
    }
    CHECK(sets.label_agg == arg);
    for (const auto& wp : sets.loss_agg) {
        std::int64_t b = -1;
        std::vector<std::uint64_t> am;
        for (std::uint64_t i = 0; i < h.total(); ++i) {
            const auto c = pair_counts(h, h.scores(i));
            const std::int64_t v = wp.a[0] * c.label[0] * sets.denominators[1] + wp.a[1] * c.label[1] * sets.denominators[0];
            if (v > b) b = v, am.clear();
            if (v == b) am.push_back(i);
        }
        CHECK(wp.argmax == am);
    }
    CHECK(std::any_of(sets.loss_agg.begin(), sets.loss_agg.end(), [](const WeightPoint& w) { return w.balanced; }));
}

TEST_CASE("relations on gaussian bi-level data") {
    const auto d = gen_gaussian_bilevel(18, 1);
    const HypothesisSpace h(d.labels, 3);
    const auto r = check_relations(h, maximizer_sets(h, 5));
    CHECK(r.less_in_equal);
    CHECK(r.greater_in_equal);
    CHECK(r.label_agg_in_product);
    CHECK(r.maximizers_on_front);
    CHECK(r.front_linear);
}

TEST_CASE("weak-order search matches brute force") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const std::size_t n = 2 + seed % 4;
        RandomStream r(seed, Stream::Eval);
        Matrix<double> w(n, n);
        for (double& v : w.data()) v = r.uniform(-1, 1);
        const auto res = optimal_weak_order(w);
        CHECK(res.value == doctest::Approx(oracle_ref::brute_force_max(w)).epsilon(1e-12));
        CHECK(pairwise_objective(res.scores, w) == res.value);
    }
}

TEST_CASE("weak-order counts are Fubini numbers") {
    const std::map<std::size_t, std::uint64_t> fubini{{1, 1}, {3, 13}, {5, 541}, {8, 545835}};
    for (const auto& [n, count] : fubini) {
        const auto res = optimal_weak_order(Matrix<double>(n, n, 0.0));
        CHECK(res.orders_visited == count);
    }
    CHECK_THROWS_AS(optimal_weak_order(Matrix<double>(9, 9, 0.0)), TooLarge);
}

TEST_CASE("certification detects a sub-optimal scorer") {
    const EtaTable eta(Matrix<double>(3, 1, std::vector<double>{0.9, 0.1, 0.5}));
    const auto model = JointLabelModel::independent(eta);
    CHECK(certify_bayes(eta.column(0), model, ObjectiveSpec::per_label(0)).optimal);
    const auto bad = certify_bayes(std::vector<double>{0, 1, 2}, model, ObjectiveSpec::per_label(0));
    CHECK_FALSE(bad.optimal);
    CHECK(bad.gap > 0.1);
    CHECK(bad.best == doctest::Approx(bad.value + bad.gap));
}
