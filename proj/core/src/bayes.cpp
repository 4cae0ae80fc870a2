#include "rankagg/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rankagg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kScaleTolerance = 1e-8;

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(what);
}

std::vector<double> weighted_eta_sum(const EtaTable& eta, std::span<const double> alphas, double scale) {
    require(alphas.size() == eta.K(), "one weight per label is required");
    std::vector<double> out(eta.n());
    for (std::size_t i = 0; i < eta.n(); ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < eta.K(); ++k) s += alphas[k] * eta(i, k);
        out[i] = scale * s;
    }
    return out;
}

}  // namespace

AlphaVector AlphaVector::from(const PriorVector& priors, std::span<const double> weights) {
    require(weights.size() == priors.K(), "one weight per label is required");
    AlphaVector out{std::vector<double>(priors.K())};
    for (std::size_t k = 0; k < priors.K(); ++k) {
        const double p = priors[k];
        if (!(p > 0.0 && p < 1.0))
            throw DegenerateLabel("label " + std::to_string(k) + " has prior " + std::to_string(p), k);
        require(weights[k] > 0.0, "loss aggregation weights must be > 0");
        out.alpha[k] = weights[k] / (p * (1.0 - p));
    }
    return out;
}

Scorer loss_agg_bayes_scorer(const EtaTable& eta, const PriorVector& priors, std::span<const double> weights) {
    require(priors.K() == eta.K(), "prior count must equal K");
    const AlphaVector alpha = AlphaVector::from(priors, weights);
    return Scorer::table(weighted_eta_sum(eta, alpha.alpha, 1.0 / static_cast<double>(eta.K())));
}

Scorer label_agg_bayes_scorer_sum(const EtaTable& eta) {
    const std::vector<double> ones(eta.K(), 1.0);
    return Scorer::table(weighted_eta_sum(eta, ones, 1.0));
}

Scorer label_agg_bayes_scorer_weighted(const EtaTable& eta, std::span<const double> alphas) {
    for (double a : alphas) require(a > 0.0, "aggregation weights must be > 0");
    return Scorer::table(weighted_eta_sum(eta, alphas, 1.0));
}

Scorer label_agg_uniform_cost_scorer_k2(const EtaTable& eta) {
    require(eta.K() == 2, "the uniform-cost closed form needs exactly two labels");
    std::vector<double> out(eta.n());
    for (std::size_t i = 0; i < eta.n(); ++i) {
        const double e1 = eta(i, 0), e2 = eta(i, 1);
        const double den = 1.0 - e1 * e2;
        out[i] = den > 0.0 ? (e1 + e2 - e1 * e2) / den : kInf;
    }
    return Scorer::table(std::move(out));
}

bool satisfies_scale_condition(const CostMatrix& costs) {
    const std::size_t levels = costs.levels();
    if (levels <= 3) return true;
    // Fix w_0 = 1, s_0 = 0. Then w_y s_y = c(y,0), and the (y,1) equations fix
    // w_y up to a free w_1. What remains is, for every y > y' >= 2,
    //   c(y,y') c(1,0) = c(y,1) c(y',0) - c(y',1) c(y,0).
    for (std::size_t y = 1; y < levels; ++y)
        if (!(costs(y, 0) > 0.0)) return false;
    const double c10 = costs(1, 0);
    for (std::size_t y = 3; y < levels; ++y)
        for (std::size_t yp = 2; yp < y; ++yp) {
            const double lhs = costs(y, yp) * c10;
            const double rhs = costs(y, 1) * costs(yp, 0) - costs(yp, 1) * costs(y, 0);
            const double scale = std::max({std::abs(lhs), std::abs(rhs), std::numeric_limits<double>::min()});
            if (std::abs(lhs - rhs) > kScaleTolerance * scale) return false;
        }
    return true;
}

Scorer multipartite_bayes_scorer(const Matrix<double>& class_probs, const CostMatrix& costs) {
    const std::size_t levels = class_probs.cols();
    require(levels >= 2, "multipartite scorer needs at least two classes");
    require(costs.levels() == levels, "cost matrix must match the class alphabet");
    if (!satisfies_scale_condition(costs))
        throw InvalidCosts("costs over " + std::to_string(levels) +
                           " classes do not satisfy the scale condition; no closed-form scorer");
    const std::size_t top = levels - 1;
    std::vector<double> out(class_probs.rows());
    for (std::size_t i = 0; i < class_probs.rows(); ++i) {
        double num = 0.0, den = 0.0;
        for (std::size_t m = 1; m < levels; ++m) num += costs(m, 0) * class_probs(i, m);
        for (std::size_t m = 0; m < top; ++m) den += costs(top, m) * class_probs(i, m);
        out[i] = den > 0.0 ? num / den : (num > 0.0 ? kInf : 0.0);
    }
    return Scorer::table(std::move(out));
}

Scorer product_agg_bayes_scorer(const JointLabelModel& model) {
    const auto all_ones = static_cast<std::uint32_t>((std::size_t{1} << model.K()) - 1);
    std::vector<double> out(model.n());
    for (std::size_t i = 0; i < model.n(); ++i) out[i] = model.probability(i, all_ones);
    return Scorer::table(std::move(out));
}

DictatorshipReport dictatorship_analysis(const AlphaVector& alphas) {
    require(alphas.K() == 2, "dictatorship analysis needs exactly two labels");
    DictatorshipReport r;
    if (alphas.alpha[0] > alphas.alpha[1]) r.dictator = 0;
    else if (alphas.alpha[1] > alphas.alpha[0]) r.dictator = 1;
    return r;
}

DictatorshipReport dictatorship_analysis(const AlphaVector& alphas, const EtaTable& deterministic_eta) {
    DictatorshipReport r = dictatorship_analysis(alphas);
    require(deterministic_eta.K() == 2, "dictatorship analysis needs exactly two labels");
    require(deterministic_eta.deterministic(), "dictatorship check needs a deterministic eta table");
    if (!r.dictator) return r;
    const std::size_t d = *r.dictator;
    const auto scores = weighted_eta_sum(deterministic_eta, alphas.alpha, 0.5);
    for (std::size_t i = 0; i < deterministic_eta.n(); ++i) {
        if (deterministic_eta(i, d) != 1.0) continue;
        for (std::size_t j = 0; j < deterministic_eta.n(); ++j)
            if (deterministic_eta(j, d) == 0.0 && !(scores[i] > scores[j])) r.violations.emplace_back(i, j);
    }
    return r;
}

double combo_score(const ComboMethod& method, const Combo& combo) {
    switch (method.kind) {
        case ComboMethod::Kind::LossAgg: return 0.5 * (method.alpha[0] * combo[0] + method.alpha[1] * combo[1]);
        case ComboMethod::Kind::LabelAggSum: return combo[0] + combo[1];
        case ComboMethod::Kind::LabelAggProduct: return combo[0] * combo[1];
    }
    return 0.0;
}

std::vector<ComboRelation> partial_order_over_combos(const ComboMethod& method) {
    if (method.kind == ComboMethod::Kind::LossAgg)
        require(method.alpha[0] > 0.0 && method.alpha[1] > 0.0, "alphas must be > 0");
    static constexpr std::array<Combo, 4> kCombos{{{0, 0}, {1, 0}, {0, 1}, {1, 1}}};
    std::vector<ComboRelation> out;
    for (const Combo& a : kCombos)
        for (const Combo& b : kCombos)
            if (combo_score(method, a) < combo_score(method, b)) out.push_back({a, b});
    std::ranges::sort(out);
    return out;
}

}  // namespace rankagg
