#pragma once

// Pairwise surrogate objectives for the per-label, loss-aggregated and
// label-aggregated AUC families, their analytic gradients, and a small
// deterministic trainer for linear and MLP scorers.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rankagg/core.hpp"
#include "rankagg/metrics.hpp"

namespace rankagg {

enum class SurrogateKind {
    Logistic,  // log(1 + exp(-z))
    Hinge,     // max(0, 1 - z)
};

double surrogate_loss(SurrogateKind kind, double z) noexcept;
/// d/dz of the surrogate; the hinge uses 0 at the kink z = 1.
double surrogate_derivative(SurrogateKind kind, double z) noexcept;

/// Weighted blocks of (higher, lower) instance pairs. The surrogate objective
/// is sum_b weight_b * mean_{i in higher_b, j in lower_b} phi(f_i - f_j).
struct PairBlock {
    std::vector<std::size_t> higher;
    std::vector<std::size_t> lower;
    double weight = 0.0;

    std::uint64_t pair_count() const noexcept {
        return static_cast<std::uint64_t>(higher.size()) * static_cast<std::uint64_t>(lower.size());
    }
};

/// Pair blocks for `objective` on sampled labels. Throws DegenerateLabel when
/// the objective has no discordant pair.
std::vector<PairBlock> objective_pairs(const SampledLabels& labels, const ObjectiveSpec& objective);

double surrogate_objective(const Scorer& scorer, const Dataset& data, const ObjectiveSpec& objective,
                           SurrogateKind kind);

/// Gradient of surrogate_objective with respect to scorer.parameters().
std::vector<double> surrogate_gradient(const Scorer& scorer, const Dataset& data, const ObjectiveSpec& objective,
                                       SurrogateKind kind);

/// Backpropagates per-instance score gradients dL/df_i to parameter space.
std::vector<double> backprop_scores(const Scorer& scorer, const InstanceSet& x, std::span<const double> score_grad);

struct ModelSpec {
    enum class Kind { Linear, Mlp };
    Kind kind = Kind::Linear;
    std::vector<std::size_t> hidden;  // Mlp only

    static ModelSpec linear() { return {Kind::Linear, {}}; }
    static ModelSpec mlp(std::vector<std::size_t> hidden) { return {Kind::Mlp, std::move(hidden)}; }
};

struct TrainConfig {
    enum class Optimizer { Sgd, Adam };

    Optimizer optimizer = Optimizer::Adam;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    /// lr == 0 is accepted and leaves the scorer untouched.
    double learning_rate = 0.01;
    std::size_t epochs = 100;
    std::size_t steps_per_epoch = 1;
    /// Steps use every pair when the objective has at most this many, else a uniform subsample of this size.
    std::uint64_t pair_budget = std::uint64_t{1} << 20;
    std::uint64_t seed = 0;
    ObjectiveSpec objective = ObjectiveSpec::per_label(0);
    SurrogateKind surrogate = SurrogateKind::Logistic;
    ModelSpec model = ModelSpec::linear();

    void validate() const;
};

struct EpochRecord {
    std::size_t epoch = 0;
    double loss = 0.0;
    AucReport train;
    std::optional<AucReport> eval;
};

struct TrainResult {
    Scorer scorer;
    std::vector<EpochRecord> trace;
};

/// Trains a freshly initialised model (config.model, config.seed).
TrainResult train(const Dataset& data, const TrainConfig& config, const Dataset* eval = nullptr);

/// Trains starting from `initial`, which must be Linear or Mlp.
TrainResult train(const Dataset& data, const TrainConfig& config, Scorer initial, const Dataset* eval = nullptr);

}  // namespace rankagg
