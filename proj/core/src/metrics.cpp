#include "rankagg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace rankagg {

namespace {

template <typename... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};
template <typename... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(what);
}

struct PairCount {
    std::uint64_t wins = 0;
    std::uint64_t ties = 0;
};

/// Counts (h, l) pairs with h > l and h == l; both inputs sorted ascending.
PairCount count_pairs(std::span<const double> hi, std::span<const double> lo) {
    PairCount out;
    std::size_t below = 0, not_above = 0;
    for (double h : hi) {
        while (below < lo.size() && lo[below] < h) ++below;
        if (not_above < below) not_above = below;
        while (not_above < lo.size() && lo[not_above] <= h) ++not_above;
        out.wins += below;
        out.ties += not_above - below;
    }
    return out;
}

void check_scores(std::span<const double> scores) {
    for (double s : scores) require(!std::isnan(s), "scores must not be NaN");
}

/// Indices sorted by score, grouped into runs of equal score.
std::vector<std::size_t> score_order(std::span<const double> scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    return order;
}

CostMatrix fit_costs(const CostMatrix& costs, std::size_t levels) {
    if (costs.levels() == levels) return costs;
    return costs.resized(levels - 1);
}

}  // namespace

double bipartite_auc_empirical(std::span<const double> scores, std::span<const std::uint8_t> labels) {
    require(scores.size() == labels.size(), "scores and labels differ in length");
    check_scores(scores);
    std::vector<double> pos, neg;
    for (std::size_t i = 0; i < scores.size(); ++i) (labels[i] ? pos : neg).push_back(scores[i]);
    if (pos.empty() || neg.empty()) throw DegenerateLabel("AUC needs at least one positive and one negative label");
    std::ranges::sort(pos);
    std::ranges::sort(neg);
    const PairCount c = count_pairs(pos, neg);
    const double twice_hits = static_cast<double>(2 * c.wins + c.ties);
    const double twice_pairs = 2.0 * static_cast<double>(pos.size()) * static_cast<double>(neg.size());
    return twice_hits / twice_pairs;
}

double bipartite_auc_population(std::span<const double> scores, std::span<const double> eta) {
    require(scores.size() == eta.size(), "scores and eta differ in length");
    check_scores(scores);
    double pos_mass = 0.0, neg_mass = 0.0;
    for (double e : eta) {
        pos_mass += e;
        neg_mass += 1.0 - e;
    }
    if (pos_mass <= 0.0 || neg_mass <= 0.0) throw DegenerateLabel("population prior is 0 or 1");
    const auto order = score_order(scores);
    double num = 0.0, neg_below = 0.0;
    for (std::size_t g = 0; g < order.size();) {
        std::size_t end = g;
        double pos_g = 0.0, neg_g = 0.0;
        while (end < order.size() && scores[order[end]] == scores[order[g]]) {
            pos_g += eta[order[end]];
            neg_g += 1.0 - eta[order[end]];
            ++end;
        }
        num += pos_g * neg_below + 0.5 * pos_g * neg_g;
        neg_below += neg_g;
        g = end;
    }
    return num / (pos_mass * neg_mass);
}

double multipartite_auc(std::span<const double> scores, const OrdinalLabels& labels, const CostMatrix& costs) {
    require(scores.size() == labels.values.size(), "scores and labels differ in length");
    require(costs.levels() >= labels.levels, "cost matrix smaller than the label alphabet");
    check_scores(scores);
    std::vector<std::vector<double>> by_level(labels.levels);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        require(labels.values[i] < labels.levels, "ordinal label outside its alphabet");
        by_level[labels.values[i]].push_back(scores[i]);
    }
    for (auto& v : by_level) std::ranges::sort(v);
    double num = 0.0, den = 0.0;
    for (std::size_t hi = 1; hi < labels.levels; ++hi)
        for (std::size_t lo = 0; lo < hi; ++lo) {
            const double c = costs(hi, lo);
            if (c <= 0.0 || by_level[hi].empty() || by_level[lo].empty()) continue;
            const PairCount pc = count_pairs(by_level[hi], by_level[lo]);
            num += c * (static_cast<double>(pc.wins) + 0.5 * static_cast<double>(pc.ties));
            den += c * static_cast<double>(by_level[hi].size()) * static_cast<double>(by_level[lo].size());
        }
    if (den <= 0.0) throw DegenerateLabel("no discordant pair with positive cost");
    return num / den;
}

double multipartite_auc_population(std::span<const double> scores, const Matrix<double>& class_probs,
                                   const CostMatrix& costs) {
    require(scores.size() == class_probs.rows(), "scores and class-probability rows differ");
    const std::size_t levels = class_probs.cols();
    require(costs.levels() >= levels, "cost matrix smaller than the label alphabet");
    check_scores(scores);
    const auto order = score_order(scores);
    std::vector<double> below(levels, 0.0), total(levels, 0.0), group(levels);
    double num = 0.0;
    for (std::size_t g = 0; g < order.size();) {
        std::size_t end = g;
        std::ranges::fill(group, 0.0);
        while (end < order.size() && scores[order[end]] == scores[order[g]]) {
            for (std::size_t m = 0; m < levels; ++m) group[m] += class_probs(order[end], m);
            ++end;
        }
        for (std::size_t hi = 1; hi < levels; ++hi) {
            if (group[hi] == 0.0) continue;
            for (std::size_t lo = 0; lo < hi; ++lo) {
                const double c = costs(hi, lo);
                if (c > 0.0) num += c * group[hi] * (below[lo] + 0.5 * group[lo]);
            }
        }
        for (std::size_t m = 0; m < levels; ++m) below[m] += group[m];
        g = end;
    }
    total = below;
    double den = 0.0;
    for (std::size_t hi = 1; hi < levels; ++hi)
        for (std::size_t lo = 0; lo < hi; ++lo) den += costs(hi, lo) * total[hi] * total[lo];
    if (den <= 0.0) throw DegenerateLabel("no discordant pair with positive cost");
    return num / den;
}

std::vector<double> per_label_auc(std::span<const double> scores, const SampledLabels& labels) {
    require(scores.size() == labels.n(), "scores and labels differ in length");
    std::vector<double> out(labels.K());
    for (std::size_t k = 0; k < labels.K(); ++k) {
        const auto col = labels.column(k);
        try {
            out[k] = bipartite_auc_empirical(scores, col);
        } catch (const DegenerateLabel&) {
            throw DegenerateLabel("label " + std::to_string(k) + " has a single class", k);
        }
    }
    return out;
}

std::vector<double> per_label_auc(std::span<const double> scores, const EtaTable& eta) {
    require(scores.size() == eta.n(), "scores and eta differ in length");
    std::vector<double> out(eta.K());
    for (std::size_t k = 0; k < eta.K(); ++k) {
        const auto col = eta.column(k);
        try {
            out[k] = bipartite_auc_population(scores, col);
        } catch (const DegenerateLabel&) {
            throw DegenerateLabel("label " + std::to_string(k) + " has prior 0 or 1", k);
        }
    }
    return out;
}

namespace {

double weighted_sum(std::span<const double> aucs, std::span<const double> weights) {
    require(weights.size() == aucs.size(), "one weight per label is required");
    double s = 0.0;
    for (std::size_t k = 0; k < aucs.size(); ++k) s += weights[k] * aucs[k];
    return s;
}

}  // namespace

double loss_agg_auc(std::span<const double> scores, const SampledLabels& labels, std::span<const double> weights) {
    require(weights.size() == labels.K(), "one weight per label is required");
    return weighted_sum(per_label_auc(scores, labels), weights);
}

double loss_agg_auc(std::span<const double> scores, const EtaTable& eta, std::span<const double> weights) {
    require(weights.size() == eta.K(), "one weight per label is required");
    return weighted_sum(per_label_auc(scores, eta), weights);
}

double label_agg_auc(std::span<const double> scores, const SampledLabels& labels, const Aggregator& aggregator,
                     const CostMatrix& costs) {
    require(scores.size() == labels.n(), "scores and labels differ in length");
    const OrdinalLabels agg = aggregate_labels(labels, aggregator);
    return multipartite_auc(scores, agg, fit_costs(costs, agg.levels));
}

double label_agg_auc(std::span<const double> scores, const JointLabelModel& model, const Aggregator& aggregator,
                     const CostMatrix& costs) {
    require(scores.size() == model.n(), "scores and label model differ in length");
    const AggregateDistribution dist = aggregate_distribution(model, aggregator);
    return multipartite_auc_population(scores, dist.probs, fit_costs(costs, dist.levels()));
}

AucReport AucReport::from(std::vector<double> per_label) {
    require(!per_label.empty(), "AUC report needs at least one label");
    AucReport r;
    const auto [lo, hi] = std::ranges::minmax_element(per_label);
    r.min = *lo;
    r.diff = per_label.size() == 2 ? std::abs(per_label[0] - per_label[1]) : *hi - *lo;
    r.per_label = std::move(per_label);
    return r;
}

AucReport auc_report(std::span<const double> scores, const SampledLabels& labels) {
    return AucReport::from(per_label_auc(scores, labels));
}

AucReport auc_report(std::span<const double> scores, const EtaTable& eta) {
    return AucReport::from(per_label_auc(scores, eta));
}

bool pareto_dominates(std::span<const double> g, std::span<const double> f) {
    require(g.size() == f.size(), "dominance needs equal-length vectors");
    bool strict = false;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (g[k] < f[k]) return false;
        if (g[k] > f[k]) strict = true;
    }
    return strict;
}

std::vector<std::size_t> pareto_front(const std::vector<std::vector<double>>& candidates) {
    require(!candidates.empty(), "pareto front of an empty candidate list");
    const std::size_t dim = candidates.front().size();
    for (const auto& c : candidates) require(c.size() == dim, "candidates differ in dimension");

    // A dominator is lexicographically larger and has a sum at least as large
    // (floating addition is monotone), so after this sort every dominator of a
    // point precedes it. Dominance is transitive, so checking against the
    // front built so far is enough.
    std::vector<double> sums(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i)
        sums[i] = std::accumulate(candidates[i].begin(), candidates[i].end(), 0.0);
    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) {
        if (sums[a] != sums[b]) return sums[a] > sums[b];
        return std::ranges::lexicographical_compare(candidates[b], candidates[a]);
    });

    std::vector<std::size_t> front;
    for (std::size_t idx : order) {
        const bool dominated = std::ranges::any_of(
            front, [&](std::size_t f) { return pareto_dominates(candidates[f], candidates[idx]); });
        if (!dominated) front.push_back(idx);
    }
    std::ranges::sort(front);
    return front;
}

namespace {

void add_label_weights(Matrix<double>& w, const EtaTable& eta, std::size_t k, double scale) {
    double pos = 0.0, neg = 0.0;
    for (std::size_t i = 0; i < eta.n(); ++i) {
        pos += eta(i, k);
        neg += 1.0 - eta(i, k);
    }
    if (pos <= 0.0 || neg <= 0.0) throw DegenerateLabel("label " + std::to_string(k) + " has prior 0 or 1", k);
    const double norm = scale / (pos * neg);
    for (std::size_t i = 0; i < eta.n(); ++i)
        for (std::size_t j = 0; j < eta.n(); ++j) w(i, j) += norm * eta(i, k) * (1.0 - eta(j, k));
}

}  // namespace

Matrix<double> population_pair_weights(const JointLabelModel& model, const ObjectiveSpec& objective) {
    const std::size_t n = model.n();
    Matrix<double> w(n, n);
    std::visit(Overloaded{
                   [&](const ObjectiveSpec::PerLabel& o) {
                       require(o.k < model.K(), "label index out of range");
                       add_label_weights(w, model.marginals(), o.k, 1.0);
                   },
                   [&](const ObjectiveSpec::LossAgg& o) {
                       require(o.weights.size() == model.K(), "one weight per label is required");
                       const EtaTable eta = model.marginals();
                       for (std::size_t k = 0; k < model.K(); ++k) add_label_weights(w, eta, k, o.weights[k]);
                   },
                   [&](const ObjectiveSpec::LabelAgg& o) {
                       const AggregateDistribution dist = aggregate_distribution(model, o.aggregator);
                       const std::size_t levels = dist.levels();
                       // lower(j, hi) = sum_{lo < hi} c(hi, lo) * p_j(lo)
                       Matrix<double> lower(n, levels);
                       if (o.costs.kind() == CostMatrix::Kind::Custom) {
                           const CostMatrix costs = fit_costs(o.costs, levels);
                           for (std::size_t j = 0; j < n; ++j)
                               for (std::size_t hi = 1; hi < levels; ++hi) {
                                   double s = 0.0;
                                   for (std::size_t lo = 0; lo < hi; ++lo) s += costs(hi, lo) * dist.probs(j, lo);
                                   lower(j, hi) = s;
                               }
                       } else {
                           // Prefix sums; large aggregate alphabets never materialise the cost matrix.
                           const bool abs_diff = o.costs.kind() == CostMatrix::Kind::AbsDiff;
                           for (std::size_t j = 0; j < n; ++j) {
                               double mass = 0.0, moment = 0.0;
                               for (std::size_t hi = 1; hi < levels; ++hi) {
                                   mass += dist.probs(j, hi - 1);
                                   moment += static_cast<double>(hi - 1) * dist.probs(j, hi - 1);
                                   lower(j, hi) = abs_diff ? static_cast<double>(hi) * mass - moment : mass;
                               }
                           }
                       }
                       double total = 0.0;
                       for (std::size_t i = 0; i < n; ++i)
                           for (std::size_t j = 0; j < n; ++j) {
                               double s = 0.0;
                               for (std::size_t hi = 1; hi < levels; ++hi) s += dist.probs(i, hi) * lower(j, hi);
                               w(i, j) = s;
                               total += s;
                           }
                       if (total <= 0.0) throw DegenerateLabel("aggregated label has no discordant pair");
                       for (auto& v : w.data()) v /= total;
                   }},
               objective.variant);
    return w;
}

double pairwise_objective(std::span<const double> scores, const Matrix<double>& weights) {
    require(weights.rows() == scores.size() && weights.cols() == scores.size(), "pair weight shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i)
        for (std::size_t j = 0; j < scores.size(); ++j) {
            const double w = weights(i, j);
            if (w != 0.0) s += w * heaviside(scores[i], scores[j]);
        }
    return s;
}

double population_objective(std::span<const double> scores, const JointLabelModel& model,
                            const ObjectiveSpec& objective) {
    return std::visit(Overloaded{[&](const ObjectiveSpec::PerLabel& o) {
                                     require(o.k < model.K(), "label index out of range");
                                     const auto col = model.marginals().column(o.k);
                                     return bipartite_auc_population(scores, col);
                                 },
                                 [&](const ObjectiveSpec::LossAgg& o) {
                                     return loss_agg_auc(scores, model.marginals(), o.weights);
                                 },
                                 [&](const ObjectiveSpec::LabelAgg& o) {
                                     return label_agg_auc(scores, model, o.aggregator, o.costs);
                                 }},
                      objective.variant);
}

double empirical_objective(std::span<const double> scores, const SampledLabels& labels,
                           const ObjectiveSpec& objective) {
    return std::visit(Overloaded{[&](const ObjectiveSpec::PerLabel& o) {
                                     require(o.k < labels.K(), "label index out of range");
                                     const auto col = labels.column(o.k);
                                     try {
                                         return bipartite_auc_empirical(scores, col);
                                     } catch (const DegenerateLabel&) {
                                         throw DegenerateLabel("label " + std::to_string(o.k) + " has a single class",
                                                               o.k);
                                     }
                                 },
                                 [&](const ObjectiveSpec::LossAgg& o) {
                                     return loss_agg_auc(scores, labels, o.weights);
                                 },
                                 [&](const ObjectiveSpec::LabelAgg& o) {
                                     return label_agg_auc(scores, labels, o.aggregator, o.costs);
                                 }},
                      objective.variant);
}

}  // namespace rankagg
