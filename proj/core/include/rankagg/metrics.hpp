#pragma once

// AUC objectives in empirical (sampled labels) and population (class
// probability) form, Pareto dominance, and the Diff/Min balance diagnostics.
//
// Conventions:
//  * H(z) = 1(z > 0) + 1/2 * 1(z == 0), evaluated by comparing scores
//    directly so +inf sentinels tie with each other.
//  * Empirical sums skip i == j. Population sums run over all ordered row
//    pairs including i == j, matching two i.i.d. draws from the rows.
//  * Multipartite AUC is normalised by the total cost mass of discordant
//    pairs, so it lies in [0, 1].
//  * Loss-aggregated AUC is the unnormalised sum of a_k * AUC_k.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rankagg/core.hpp"

namespace rankagg {

/// H(a - b) without forming the difference.
constexpr double heaviside(double a, double b) noexcept {
    return a > b ? 1.0 : (a == b ? 0.5 : 0.0);
}

double bipartite_auc_empirical(std::span<const double> scores, std::span<const std::uint8_t> labels);

/// Population AUC against per-instance probabilities `eta`; prior is mean(eta).
double bipartite_auc_population(std::span<const double> scores, std::span<const double> eta);

/// Empirical multipartite AUC; `costs` must cover labels.levels.
double multipartite_auc(std::span<const double> scores, const OrdinalLabels& labels, const CostMatrix& costs);

/// Population multipartite AUC against a per-instance class-probability table.
double multipartite_auc_population(std::span<const double> scores, const Matrix<double>& class_probs,
                                   const CostMatrix& costs);

std::vector<double> per_label_auc(std::span<const double> scores, const SampledLabels& labels);
std::vector<double> per_label_auc(std::span<const double> scores, const EtaTable& eta);

double loss_agg_auc(std::span<const double> scores, const SampledLabels& labels, std::span<const double> weights);
double loss_agg_auc(std::span<const double> scores, const EtaTable& eta, std::span<const double> weights);

/// `costs` is resized to the aggregate alphabet when it is Uniform or AbsDiff.
double label_agg_auc(std::span<const double> scores, const SampledLabels& labels, const Aggregator& aggregator,
                     const CostMatrix& costs);
double label_agg_auc(std::span<const double> scores, const JointLabelModel& model, const Aggregator& aggregator,
                     const CostMatrix& costs);

struct AucReport {
    std::vector<double> per_label;
    /// |AUC_1 - AUC_2| for K = 2; max - min for other K.
    double diff = 0.0;
    double min = 0.0;

    static AucReport from(std::vector<double> per_label);
};

AucReport auc_report(std::span<const double> scores, const SampledLabels& labels);
AucReport auc_report(std::span<const double> scores, const EtaTable& eta);

/// g >= f componentwise and g > f somewhere.
bool pareto_dominates(std::span<const double> g, std::span<const double> f);

/// Indices of candidates not dominated by any other candidate, ascending.
std::vector<std::size_t> pareto_front(const std::vector<std::vector<double>>& candidates);

/// Pair weights W such that the population objective of a scorer f equals
/// sum_{i,j} W(i,j) * H(f_i - f_j), the sum running over all ordered pairs.
/// PerLabel and LossAgg read only the label marginals.
Matrix<double> population_pair_weights(const JointLabelModel& model, const ObjectiveSpec& objective);

/// sum_{i,j} W(i,j) * H(f_i - f_j).
double pairwise_objective(std::span<const double> scores, const Matrix<double>& weights);

/// Population value of `objective` for `scores`, evaluated without pair weights.
double population_objective(std::span<const double> scores, const JointLabelModel& model,
                            const ObjectiveSpec& objective);

/// Empirical value of `objective` for `scores` against sampled labels.
double empirical_objective(std::span<const double> scores, const SampledLabels& labels,
                           const ObjectiveSpec& objective);

}  // namespace rankagg
