#pragma once

// Exhaustive certification: hypothesis enumeration over bi-level data,
// maximizer-set relations between the aggregation objectives, and exact
// population maximizers over all weak orders of a small instance set.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rankagg/core.hpp"

namespace rankagg {

inline constexpr std::uint64_t kDefaultHypothesisBudget = 10'000'000;

/// Scores over a deterministic K = 2 dataset. Rows with y1 = y2 are pinned to
/// 0 (both negative) or P (both positive); the M disagreeing rows range over
/// {1, ..., P}, giving P^M hypotheses.
class HypothesisSpace {
public:
    HypothesisSpace(const SampledLabels& labels, std::size_t P,
                    std::uint64_t budget = kDefaultHypothesisBudget);

    std::size_t P() const noexcept { return P_; }
    std::size_t M() const noexcept { return free_rows_.size(); }
    std::size_t n() const noexcept { return combo_.size(); }
    std::uint64_t total() const noexcept { return total_; }

    /// Row indices of the disagreeing rows, ascending; the first is the most significant digit.
    const std::vector<std::size_t>& free_rows() const noexcept { return free_rows_; }
    /// Label combination per row, bit k = y_k.
    const std::vector<std::uint8_t>& combos() const noexcept { return combo_; }

    /// Scores of hypothesis `index` in lexicographic order.
    std::vector<double> scores(std::uint64_t index) const;
    void scores(std::uint64_t index, std::span<double> out) const;

private:
    std::size_t P_;
    std::vector<std::uint8_t> combo_;
    std::vector<std::size_t> free_rows_;
    std::uint64_t total_;
};

/// Calls `visit(index, scores)` for every hypothesis in lexicographic order.
void enumerate_hypotheses(const HypothesisSpace& space,
                          const std::function<void(std::uint64_t, std::span<const double>)>& visit);

/// Doubled pair counts (2 wins + ties) of a hypothesis: per label, for the
/// Sum aggregate with uniform costs, and for the Product aggregate.
struct PairCounts {
    std::array<std::int64_t, 2> label{};
    std::int64_t sum_uniform = 0;
    std::int64_t product = 0;
};

PairCounts pair_counts(const HypothesisSpace& space, std::span<const double> scores);

/// A grid weight point (a1, a2) and its class by alpha = a / (n+ n-).
struct WeightPoint {
    std::array<std::int64_t, 2> a{};
    /// -1 when alpha1 < alpha2, 0 when equal, +1 when alpha1 > alpha2.
    int cls = 0;
    /// Added to the grid to represent the equal-alpha class.
    bool balanced = false;
    std::vector<std::uint64_t> argmax;
};

struct MaximizerSets {
    /// Positive-negative pair counts n+_k n-_k per label.
    std::array<std::int64_t, 2> denominators{};
    std::vector<WeightPoint> loss_agg;
    std::vector<std::uint64_t> label_agg;
    std::vector<std::uint64_t> product;

    /// Distinct doubled per-label counts over the hypothesis space, ascending, and the Pareto-optimal ones.
    std::vector<std::array<std::int64_t, 2>> scatter;
    std::vector<std::array<std::int64_t, 2>> front;

    /// Union of loss-aggregated argmax sets over grid points of one class.
    std::vector<std::uint64_t> loss_agg_class(int cls) const;
};

/// Argmax sets over the whole hypothesis space for every grid point
/// {1..grid_max}^2 plus the balanced point (n+_1 n-_1, n+_2 n-_2).
/// Comparisons use exact integer pair counts.
MaximizerSets maximizer_sets(const HypothesisSpace& space, std::int64_t grid_max, unsigned threads = 0);

/// Verdict on the containment chain between the aggregation objectives.
struct RelationReport {
    bool less_in_equal = false;      // Y*_{LoA,<} subset of Y*_{LoA,=}
    bool greater_in_equal = false;   // Y*_{LoA,>} subset of Y*_{LoA,=}
    bool equal_is_label_agg = false; // every equal-class argmax equals Y*_LaA
    bool label_agg_in_product = false;
    /// Y*_{LoA,<} is one hypothesis scoring the (0,1) rows 2 and the (1,0) rows 1; mirrored for ">".
    bool less_singleton = false;
    bool greater_singleton = false;
    bool maximizers_on_front = false;
    bool endpoints_match = false;
    bool front_linear = false;

    bool all() const noexcept;
};

RelationReport check_relations(const HypothesisSpace& space, const MaximizerSets& sets);

struct WeakOrderResult {
    /// Rank per instance; higher ranks score higher.
    std::vector<double> scores;
    double value = 0.0;
    std::uint64_t orders_visited = 0;
};

inline constexpr std::size_t kMaxWeakOrderSize = 8;

/// Maximizes sum_{i,j} W(i,j) H(f_i - f_j) over all weak orders. Rank vectors
/// are visited in lexicographic order and the first maximizer is kept.
WeakOrderResult optimal_weak_order(const Matrix<double>& weights);
WeakOrderResult optimal_weak_order(const JointLabelModel& model, const ObjectiveSpec& objective);

inline constexpr double kCertifyTolerance = 1e-12;

struct Certificate {
    bool optimal = false;
    double gap = 0.0;
    double value = 0.0;
    double best = 0.0;
};

Certificate certify_bayes(const Scorer& scorer, const JointLabelModel& model, const ObjectiveSpec& objective);
Certificate certify_bayes(std::span<const double> scores, const JointLabelModel& model,
                          const ObjectiveSpec& objective);

}  // namespace rankagg
