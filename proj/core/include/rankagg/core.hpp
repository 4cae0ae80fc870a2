#pragma once

// Domain types shared by every module: instance sets, label models,
// costs over an ordinal alphabet, scorers and objective descriptions.
//
// The empirical measure over the rows of an InstanceSet stands in for the
// instance marginal; population expectations are averages over row pairs.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "rankagg/error.hpp"
#include "rankagg/matrix.hpp"

namespace rankagg {

inline constexpr double kProbabilityTolerance = 1e-9;

/// n x d real feature matrix, all entries finite.
class InstanceSet {
public:
    explicit InstanceSet(Matrix<double> features);

    std::size_t n() const noexcept { return features_.rows(); }
    std::size_t d() const noexcept { return features_.cols(); }
    const Matrix<double>& features() const noexcept { return features_; }
    std::span<const double> row(std::size_t i) const noexcept { return features_.row(i); }

    friend bool operator==(const InstanceSet&, const InstanceSet&) = default;

private:
    Matrix<double> features_;
};

/// n x K binary label matrix.
class SampledLabels {
public:
    explicit SampledLabels(Matrix<std::uint8_t> labels);

    std::size_t n() const noexcept { return labels_.rows(); }
    std::size_t K() const noexcept { return labels_.cols(); }
    std::uint8_t operator()(std::size_t i, std::size_t k) const noexcept { return labels_(i, k); }
    const Matrix<std::uint8_t>& matrix() const noexcept { return labels_; }
    std::vector<std::uint8_t> column(std::size_t k) const { return labels_.column(k); }

    friend bool operator==(const SampledLabels&, const SampledLabels&) = default;

private:
    Matrix<std::uint8_t> labels_;
};

/// n x K table of marginal class probabilities eta_k(x_i) in [0, 1].
class EtaTable {
public:
    explicit EtaTable(Matrix<double> eta);

    std::size_t n() const noexcept { return eta_.rows(); }
    std::size_t K() const noexcept { return eta_.cols(); }
    double operator()(std::size_t i, std::size_t k) const noexcept { return eta_(i, k); }
    const Matrix<double>& matrix() const noexcept { return eta_; }
    std::vector<double> column(std::size_t k) const { return eta_.column(k); }

    /// True when every entry is exactly 0 or 1.
    bool deterministic() const noexcept;

    friend bool operator==(const EtaTable&, const EtaTable&) = default;

private:
    Matrix<double> eta_;
};

/// Joint conditional law of the K labels given each instance.
///
/// The explicit form is an n x 2^K table; column c holds P(Y = y | x_i)
/// where bit k of c is y_k.
class JointLabelModel {
public:
    struct ConditionallyIndependent {
        EtaTable eta;
    };
    struct Explicit {
        std::size_t K;
        Matrix<double> table;
    };

    static JointLabelModel independent(EtaTable eta);
    static JointLabelModel explicit_table(std::size_t K, Matrix<double> table);

    std::size_t n() const noexcept;
    std::size_t K() const noexcept;
    bool is_independent() const noexcept {
        return std::holds_alternative<ConditionallyIndependent>(mode_);
    }

    /// Probability of label combination `combo` (bit k = y_k) at instance i.
    double probability(std::size_t i, std::uint32_t combo) const noexcept;

    /// Expands to the explicit n x 2^K table.
    Matrix<double> expand() const;

    /// Per-label marginals eta_k(x_i).
    EtaTable marginals() const;

    const std::variant<ConditionallyIndependent, Explicit>& mode() const noexcept { return mode_; }

private:
    explicit JointLabelModel(std::variant<ConditionallyIndependent, Explicit> mode)
        : mode_(std::move(mode)) {}

    std::variant<ConditionallyIndependent, Explicit> mode_;
};

/// Class priors pi_k.
struct PriorVector {
    std::vector<double> pi;

    std::size_t K() const noexcept { return pi.size(); }
    double operator[](std::size_t k) const noexcept { return pi[k]; }

    static PriorVector of(const SampledLabels& labels);
    static PriorVector of(const EtaTable& eta);
};

/// Misranking costs c(hi, lo) over the ordinal alphabet {0, ..., L}.
/// Only entries with hi > lo are meaningful.
class CostMatrix {
public:
    static CostMatrix uniform(std::size_t L);
    static CostMatrix abs_diff(std::size_t L);
    /// `costs` must be (L+1) x (L+1) with non-negative entries; only the strictly lower triangle is read.
    static CostMatrix custom(Matrix<double> costs);

    /// Alphabet size L + 1.
    std::size_t levels() const noexcept { return costs_.rows(); }
    std::size_t L() const noexcept { return costs_.rows() - 1; }

    double operator()(std::size_t hi, std::size_t lo) const noexcept {
        return hi > lo ? costs_(hi, lo) : 0.0;
    }

    enum class Kind { Uniform, AbsDiff, Custom };
    Kind kind() const noexcept { return kind_; }

    /// Same construction rule over a different alphabet size; Custom cannot be resized.
    CostMatrix resized(std::size_t L) const;

private:
    CostMatrix(Matrix<double> costs, Kind kind) : costs_(std::move(costs)), kind_(kind) {}

    Matrix<double> costs_;
    Kind kind_;
};

/// Fully connected network with ReLU hidden layers and a single linear output.
struct MlpLayer {
    Matrix<double> weights;  // out x in
    std::vector<double> bias;
};

class Scorer {
public:
    struct Linear {
        std::vector<double> weights;
        double bias = 0.0;
    };
    struct Mlp {
        std::vector<MlpLayer> layers;
    };
    struct Table {
        std::vector<double> scores;
    };

    Scorer(Linear linear);
    Scorer(Mlp mlp);
    Scorer(Table table);

    /// Zero-initialised linear scorer.
    static Scorer linear(std::size_t d);
    /// MLP with hidden widths `hidden`, weights uniform in +-1/sqrt(fan_in).
    static Scorer mlp(std::size_t d, std::span<const std::size_t> hidden, std::uint64_t seed);
    static Scorer table(std::vector<double> scores) { return Scorer(Table{std::move(scores)}); }

    std::vector<double> score(const InstanceSet& x) const;

    bool trainable() const noexcept { return !std::holds_alternative<Table>(variant_); }
    std::size_t parameter_count() const noexcept;
    std::vector<double> parameters() const;
    void set_parameters(std::span<const double> params);

    const std::variant<Linear, Mlp, Table>& variant() const noexcept { return variant_; }

private:
    std::variant<Linear, Mlp, Table> variant_;
};

/// How K binary labels are fused into one ordinal label.
struct Aggregator {
    enum class Kind { Sum, Product, WeightedSum };
    Kind kind = Kind::Sum;
    std::vector<double> alpha;  // WeightedSum only, strictly positive

    static Aggregator sum() { return {Kind::Sum, {}}; }
    static Aggregator product() { return {Kind::Product, {}}; }
    static Aggregator weighted_sum(std::vector<double> alpha);
};

struct ObjectiveSpec {
    struct PerLabel {
        std::size_t k;
    };
    struct LossAgg {
        std::vector<double> weights;
    };
    struct LabelAgg {
        Aggregator aggregator;
        CostMatrix costs;  // resized to the aggregate alphabet when evaluated
    };

    std::variant<PerLabel, LossAgg, LabelAgg> variant;

    static ObjectiveSpec per_label(std::size_t k) { return {PerLabel{k}}; }
    static ObjectiveSpec loss_agg(std::vector<double> weights);
    static ObjectiveSpec label_agg(Aggregator aggregator, CostMatrix costs);
};

/// Ordinal labels on the dense alphabet {0, ..., levels-1}.
struct OrdinalLabels {
    std::vector<std::uint32_t> values;
    std::size_t levels = 0;
    /// Aggregate value represented by each level (ascending).
    std::vector<double> alphabet;
};

OrdinalLabels aggregate_labels(const SampledLabels& labels, const Aggregator& aggregator);

/// Per-instance distribution of the aggregated label.
struct AggregateDistribution {
    Matrix<double> probs;  // n x levels
    std::vector<double> alphabet;
    std::size_t levels() const noexcept { return probs.cols(); }
};

AggregateDistribution aggregate_distribution(const JointLabelModel& model,
                                             const Aggregator& aggregator);

/// Features plus sampled labels, with the generating eta table when known.
struct Dataset {
    InstanceSet features;
    SampledLabels labels;
    std::optional<EtaTable> eta;

    std::size_t n() const noexcept { return features.n(); }
    std::size_t K() const noexcept { return labels.K(); }

    /// Throws InvalidArgument unless row counts of features, labels and eta agree.
    void validate() const;

    /// Rows in `rows`, in order; duplicates allowed.
    Dataset select(std::span<const std::size_t> rows) const;
};

/// Column k of a label model as per-label weights in [0,1].
std::vector<double> label_column(const SampledLabels& labels, std::size_t k);

}  // namespace rankagg
