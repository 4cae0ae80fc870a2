#include "rankagg/bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "rankagg/metrics.hpp"
#include "rankagg/oracle.hpp"

namespace rankagg {

namespace {

void check_weights(const EtaTable& eta, std::span<const double> weights) {
    if (weights.size() != eta.K()) throw InvalidArgument("one weight per label is required");
    for (double a : weights)
        if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("weights must be finite and > 0");
}

}  // namespace

double psi(double t) noexcept {
    return t < 1.0 ? 2.0 * t / (1.0 - t) : std::numeric_limits<double>::infinity();
}

BoundReport gap_bound(const EtaTable& eta, std::span<const double> weights) {
    check_weights(eta, weights);
    const std::size_t n = eta.n(), K = eta.K();
    if (n == 0) throw InvalidArgument("need at least one instance");
    Matrix<double> var(n, K);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < K; ++k) var(i, k) = eta(i, k) * (1.0 - eta(i, k));
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double third = 0.0, second = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                const double v = var(i, k) + var(j, k);
                const double a2 = weights[k] * weights[k];
                second += a2 * v;
                third += a2 * weights[k] * v;
            }
            if (!(second > 0.0))
                throw DegenerateVariance("instances " + std::to_string(i) + " and " + std::to_string(j) +
                                         " have deterministic labels");
            sum += third / std::pow(second, 1.5);
        }
    BoundReport r;
    r.K = K;
    r.argument = sum / static_cast<double>(n * n);
    r.bound_value = psi(r.argument);
    return r;
}

ObjectiveSpec gap_objective(std::span<const double> weights) {
    return ObjectiveSpec::label_agg(Aggregator::weighted_sum(std::vector<double>(weights.begin(), weights.end())),
                                    CostMatrix::uniform(1));
}

double measure_gap(const EtaTable& eta, std::span<const double> weights) {
    check_weights(eta, weights);
    if (eta.n() > kMaxWeakOrderSize)
        throw TooLarge("gap measurement supports at most " + std::to_string(kMaxWeakOrderSize) + " instances");
    std::vector<double> f(eta.n(), 0.0);
    for (std::size_t i = 0; i < eta.n(); ++i)
        for (std::size_t k = 0; k < eta.K(); ++k) f[i] += weights[k] * eta(i, k);
    const JointLabelModel model = JointLabelModel::independent(eta);
    const Matrix<double> w = population_pair_weights(model, gap_objective(weights));
    const WeakOrderResult best = optimal_weak_order(w);
    return std::max(0.0, best.value - pairwise_objective(f, w));
}

BoundReport bound_report(const EtaTable& eta, std::span<const double> weights) {
    BoundReport r = gap_bound(eta, weights);
    r.empirical_gap = measure_gap(eta, weights);
    return r;
}

}  // namespace rankagg
