#pragma once

// Closed-form Bayes-optimal scorers for the per-label, loss-aggregated and
// label-aggregated objectives, plus the label-dictatorship diagnostics.
//
// Ratio scorers whose denominator vanishes return +infinity, which ranks
// above every finite score and ties with other +infinity scores.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rankagg/core.hpp"

namespace rankagg {

/// alpha_k = a_k / (pi_k (1 - pi_k)); effective per-label weight in the loss-aggregated optimum.
struct AlphaVector {
    std::vector<double> alpha;

    static AlphaVector from(const PriorVector& priors, std::span<const double> weights);
    std::size_t K() const noexcept { return alpha.size(); }
};

/// gamma(x) = (1/K) sum_k alpha_k eta_k(x).
Scorer loss_agg_bayes_scorer(const EtaTable& eta, const PriorVector& priors, std::span<const double> weights);

/// gamma(x) = sum_k eta_k(x); optimal for Sum aggregation with |y - y'| costs.
Scorer label_agg_bayes_scorer_sum(const EtaTable& eta);

/// gamma(x) = sum_k alpha_k eta_k(x).
Scorer label_agg_bayes_scorer_weighted(const EtaTable& eta, std::span<const double> alphas);

/// Uniform-cost Sum aggregation of two conditionally independent labels:
/// (eta1 + eta2 - eta1 eta2) / (1 - eta1 eta2).
Scorer label_agg_uniform_cost_scorer_k2(const EtaTable& eta);

/// True when costs over the alphabet admit c(y, y') = w_y w_y' (s_y - s_y'),
/// checked to relative tolerance 1e-8. Alphabets of size <= 3 always pass.
bool satisfies_scale_condition(const CostMatrix& costs);

/// Ratio scorer for the multipartite AUC: class_probs is n x levels over the
/// ordinal alphabet {0, ..., L}. Throws InvalidCosts when L + 1 > 3 and the
/// costs violate the scale condition.
Scorer multipartite_bayes_scorer(const Matrix<double>& class_probs, const CostMatrix& costs);

/// gamma(x) = P(all labels positive | x).
Scorer product_agg_bayes_scorer(const JointLabelModel& model);

/// Label combination for K = 2: {y1, y2}.
using Combo = std::array<int, 2>;

struct DictatorshipReport {
    /// 0 for label 1, 1 for label 2; empty on an exact tie.
    std::optional<std::size_t> dictator;
    /// Instance pairs (i, j) where i is dictator-positive, j dictator-negative,
    /// and the loss-aggregated scorer fails to rank i strictly above j.
    std::vector<std::pair<std::size_t, std::size_t>> violations;
};

DictatorshipReport dictatorship_analysis(const AlphaVector& alphas);

/// Also verifies the ordering the dictator imposes on a deterministic eta table.
DictatorshipReport dictatorship_analysis(const AlphaVector& alphas, const EtaTable& deterministic_eta);

struct ComboMethod {
    enum class Kind { LossAgg, LabelAggSum, LabelAggProduct };
    Kind kind;
    std::array<double, 2> alpha{1.0, 1.0};  // LossAgg only

    static ComboMethod loss_agg(double alpha1, double alpha2) { return {Kind::LossAgg, {alpha1, alpha2}}; }
    static ComboMethod label_agg_sum() { return {Kind::LabelAggSum, {}}; }
    static ComboMethod label_agg_product() { return {Kind::LabelAggProduct, {}}; }
};

/// Strict relation "lower ranked below upper".
struct ComboRelation {
    Combo lower;
    Combo upper;
    friend auto operator<=>(const ComboRelation&, const ComboRelation&) = default;
};

/// Strict-order pairs among the four K = 2 label combinations induced by the
/// method's Bayes scorer, sorted.
std::vector<ComboRelation> partial_order_over_combos(const ComboMethod& method);

/// Score the method's Bayes scorer assigns to a deterministic combination.
double combo_score(const ComboMethod& method, const Combo& combo);

}  // namespace rankagg
