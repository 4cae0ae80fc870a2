#pragma once

// Experiment drivers shared by the command-line harness and the acceptance
// suite. Every driver is deterministic in its seed and returns sorted rows.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rankagg/bound.hpp"
#include "rankagg/oracle.hpp"
#include "rankagg/surrogate.hpp"
#include "rankagg/synthgen.hpp"
#include "rankagg_cli/csv.hpp"

namespace rankagg::cli {

/// Accepts label1, label2 (or labelK), lossagg:a1,a2, labelagg:uniform, labelagg:absdiff.
ObjectiveSpec parse_objective(const std::string& text, std::size_t K = 2);
/// Accepts linear or mlp:h1,h2,...
ModelSpec parse_model(const std::string& text);
SurrogateKind parse_surrogate(const std::string& text);

struct SkewSweepConfig {
    std::vector<double> taus{1.0, 5.0};
    /// Exactly one of rhos and pi2s is used; pi2s wins when both are set.
    std::vector<double> rhos;
    std::vector<double> pi2s;
    std::size_t n = 100000;
    std::uint64_t seed = 0;
};

/// Shift rho at which the empirical prior of label 2 on the sweep sample is
/// closest to `target`, found by bisection.
double solve_rho_for_pi2(const InstanceSet& x, double tau, double target, std::uint64_t seed);

/// Rows per (tau, point, method) with params tau, rho, pi2 (empirical) and
/// per-label empirical AUCs of the loss-aggregated (a = 1) and Sum
/// label-aggregated Bayes scorers on n fresh samples.
std::vector<ResultRow> run_skew_sweep(const SkewSweepConfig& config);

struct TrainExperimentConfig {
    std::vector<std::string> objectives{"label1", "label2", "lossagg:1,1", "labelagg:absdiff"};
    SurrogateKind surrogate = SurrogateKind::Logistic;
    ModelSpec model = ModelSpec::linear();
    std::size_t epochs = 100;
    double learning_rate = 0.01;
    std::size_t steps_per_epoch = 1;
    std::uint64_t pair_budget = std::uint64_t{1} << 20;
    std::uint64_t seed = 0;
    /// (label index, target prior) applied to the whole dataset before splitting.
    std::optional<std::pair<std::size_t, double>> resample;
    std::size_t trials = 25;
    double test_fraction = 0.3;
};

/// One row per objective with means and standard errors over trials. Every
/// objective sees the same resampled split in a given trial.
std::vector<ResultRow> run_train(const Dataset& data, const TrainExperimentConfig& config);

struct OracleOutcome {
    HypothesisSpace space;
    MaximizerSets sets;
    RelationReport report;
    std::vector<ResultRow> rows;
};

/// `data` must carry deterministic K = 2 labels; `seed` only labels the rows.
OracleOutcome run_oracle(const Dataset& data, std::size_t P, std::int64_t grid_max, std::uint64_t seed = 0,
                         std::uint64_t budget = kDefaultHypothesisBudget);

/// (name, holds) per checked relation, in a fixed order.
std::vector<std::pair<std::string, bool>> relation_lines(const RelationReport& report);

struct BoundRow {
    std::size_t K = 0;
    std::size_t table = 0;
    double argument = 0.0;
    double bound = 0.0;
    double gap = 0.0;
};

/// `tables` random eta tables per K with entries uniform on [c, 1 - c] and a = 1.
std::vector<BoundRow> run_bound(const std::vector<std::size_t>& Ks, std::size_t n, double c, std::uint64_t seed,
                                std::size_t tables);

EtaTable random_eta(std::size_t n, std::size_t K, double lo, double hi, std::uint64_t seed);

}  // namespace rankagg::cli
