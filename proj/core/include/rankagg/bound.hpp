#pragma once

// Normal-approximation upper bound on the label-aggregated AUC gap of the
// weighted-eta scorer, and its exact measurement on small instance sets.

#include <cstddef>
#include <span>

#include "rankagg/core.hpp"

namespace rankagg {

/// psi(t) = 2t / (1 - t) for t < 1, +infinity otherwise.
double psi(double t) noexcept;

struct BoundReport {
    std::size_t K = 0;
    double argument = 0.0;
    /// +infinity when argument >= 1.
    double bound_value = 0.0;
    double empirical_gap = 0.0;
};

/// argument = mean over ordered row pairs (i, j), i = j included, of
///   sum_k a_k^3 v_k / (sum_k a_k^2 v_k)^{3/2},  v_k = sum_{x in {i,j}} eta_k(x)(1 - eta_k(x)).
/// Throws DegenerateVariance when some pair has zero variance.
BoundReport gap_bound(const EtaTable& eta, std::span<const double> weights);

/// Label-aggregated objective used for the gap: weighted Sum aggregation with
/// uniform costs over the aggregate alphabet, labels conditionally independent.
ObjectiveSpec gap_objective(std::span<const double> weights);

/// Best weak-order value minus the value of f(x) = sum_k a_k eta_k(x). n <= 8.
double measure_gap(const EtaTable& eta, std::span<const double> weights);

/// gap_bound with empirical_gap filled in.
BoundReport bound_report(const EtaTable& eta, std::span<const double> weights);

}  // namespace rankagg
