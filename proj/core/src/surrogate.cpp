#include "rankagg/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rankagg/rng.hpp"

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

PairBlock label_block(const SampledLabels& labels, std::size_t k, double weight) {
    require(k < labels.K(), "label index out of range");
    PairBlock b;
    b.weight = weight;
    for (std::size_t i = 0; i < labels.n(); ++i) (labels(i, k) ? b.higher : b.lower).push_back(i);
    if (b.higher.empty() || b.lower.empty())
        throw DegenerateLabel("label " + std::to_string(k) + " has a single class", k);
    return b;
}

}  // namespace

double surrogate_loss(SurrogateKind kind, double z) noexcept {
    switch (kind) {
        case SurrogateKind::Logistic:
            return z >= 0.0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
        case SurrogateKind::Hinge: return std::max(0.0, 1.0 - z);
    }
    return 0.0;
}

double surrogate_derivative(SurrogateKind kind, double z) noexcept {
    switch (kind) {
        case SurrogateKind::Logistic:
            if (z >= 0.0) {
                const double e = std::exp(-z);
                return -e / (1.0 + e);
            }
            return -1.0 / (1.0 + std::exp(z));
        case SurrogateKind::Hinge: return z < 1.0 ? -1.0 : 0.0;
    }
    return 0.0;
}

std::vector<PairBlock> objective_pairs(const SampledLabels& labels, const ObjectiveSpec& objective) {
    return std::visit(
        Overloaded{[&](const ObjectiveSpec::PerLabel& o) { return std::vector<PairBlock>{label_block(labels, o.k, 1.0)}; },
                   [&](const ObjectiveSpec::LossAgg& o) {
                       require(o.weights.size() == labels.K(), "one weight per label is required");
                       std::vector<PairBlock> out;
                       for (std::size_t k = 0; k < labels.K(); ++k) out.push_back(label_block(labels, k, o.weights[k]));
                       return out;
                   },
                   [&](const ObjectiveSpec::LabelAgg& o) {
                       const OrdinalLabels agg = aggregate_labels(labels, o.aggregator);
                       const CostMatrix costs =
                           o.costs.levels() == agg.levels ? o.costs : o.costs.resized(agg.levels - 1);
                       std::vector<std::vector<std::size_t>> groups(agg.levels);
                       for (std::size_t i = 0; i < labels.n(); ++i) groups[agg.values[i]].push_back(i);
                       std::vector<PairBlock> out;
                       double mass = 0.0;
                       for (std::size_t hi = 1; hi < agg.levels; ++hi)
                           for (std::size_t lo = 0; lo < hi; ++lo) {
                               const double c = costs(hi, lo);
                               if (c <= 0.0 || groups[hi].empty() || groups[lo].empty()) continue;
                               PairBlock b{groups[hi], groups[lo], 0.0};
                               b.weight = c * static_cast<double>(b.pair_count());
                               mass += b.weight;
                               out.push_back(std::move(b));
                           }
                       if (out.empty()) throw DegenerateLabel("aggregated label has no discordant pair");
                       for (auto& b : out) b.weight /= mass;
                       return out;
                   }},
        objective.variant);
}

namespace {

double blocks_loss(std::span<const double> f, const std::vector<PairBlock>& blocks, SurrogateKind kind) {
    double total = 0.0;
    for (const auto& b : blocks) {
        double s = 0.0;
        for (std::size_t i : b.higher)
            for (std::size_t j : b.lower) s += surrogate_loss(kind, f[i] - f[j]);
        total += b.weight * s / static_cast<double>(b.pair_count());
    }
    return total;
}

std::vector<double> blocks_score_grad(std::span<const double> f, const std::vector<PairBlock>& blocks,
                                      SurrogateKind kind) {
    std::vector<double> g(f.size(), 0.0);
    for (const auto& b : blocks) {
        const double w = b.weight / static_cast<double>(b.pair_count());
        for (std::size_t i : b.higher)
            for (std::size_t j : b.lower) {
                const double d = w * surrogate_derivative(kind, f[i] - f[j]);
                g[i] += d;
                g[j] -= d;
            }
    }
    return g;
}

/// Unbiased gradient estimate from `budget` pairs drawn with probability proportional to their weight.
std::vector<double> sampled_score_grad(std::span<const double> f, const std::vector<PairBlock>& blocks,
                                       SurrogateKind kind, std::uint64_t budget, RandomStream& rng) {
    std::vector<double> cumulative;
    double total = 0.0;
    for (const auto& b : blocks) {
        total += b.weight;
        cumulative.push_back(total);
    }
    std::vector<double> g(f.size(), 0.0);
    const double w = total / static_cast<double>(budget);
    for (std::uint64_t s = 0; s < budget; ++s) {
        const double u = rng.uniform() * total;
        std::size_t b = static_cast<std::size_t>(std::ranges::upper_bound(cumulative, u) - cumulative.begin());
        b = std::min(b, blocks.size() - 1);
        const auto& blk = blocks[b];
        const std::size_t i = blk.higher[rng.below(blk.higher.size())];
        const std::size_t j = blk.lower[rng.below(blk.lower.size())];
        const double d = w * surrogate_derivative(kind, f[i] - f[j]);
        g[i] += d;
        g[j] -= d;
    }
    return g;
}

}  // namespace

double surrogate_objective(const Scorer& scorer, const Dataset& data, const ObjectiveSpec& objective,
                           SurrogateKind kind) {
    data.validate();
    const auto blocks = objective_pairs(data.labels, objective);
    const auto f = scorer.score(data.features);
    return blocks_loss(f, blocks, kind);
}

std::vector<double> backprop_scores(const Scorer& scorer, const InstanceSet& x, std::span<const double> score_grad) {
    require(score_grad.size() == x.n(), "one score gradient per instance is required");
    return std::visit(
        Overloaded{
            [&](const Scorer::Linear& m) {
                std::vector<double> grad(m.weights.size() + 1, 0.0);
                for (std::size_t i = 0; i < x.n(); ++i) {
                    const double g = score_grad[i];
                    if (g == 0.0) continue;
                    const auto row = x.row(i);
                    for (std::size_t j = 0; j < row.size(); ++j) grad[j] += g * row[j];
                    grad.back() += g;
                }
                return grad;
            },
            [&](const Scorer::Mlp& m) {
                const std::size_t L = m.layers.size();
                std::vector<double> grad(scorer.parameter_count(), 0.0);
                std::vector<std::size_t> offset(L);
                for (std::size_t l = 0, pos = 0; l < L; ++l) {
                    offset[l] = pos;
                    pos += m.layers[l].weights.data().size() + m.layers[l].bias.size();
                }
                std::vector<std::vector<double>> act(L + 1);
                std::vector<double> delta, prev_delta;
                for (std::size_t i = 0; i < x.n(); ++i) {
                    const double g = score_grad[i];
                    if (g == 0.0) continue;
                    act[0].assign(x.row(i).begin(), x.row(i).end());
                    for (std::size_t l = 0; l < L; ++l) {
                        const auto& layer = m.layers[l];
                        auto& out = act[l + 1];
                        out.assign(layer.bias.begin(), layer.bias.end());
                        for (std::size_t o = 0; o < out.size(); ++o) {
                            const auto w = layer.weights.row(o);
                            for (std::size_t j = 0; j < act[l].size(); ++j) out[o] += w[j] * act[l][j];
                        }
                        if (l + 1 < L)
                            for (auto& v : out) v = std::max(v, 0.0);
                    }
                    delta.assign(1, g);
                    for (std::size_t l = L; l-- > 0;) {
                        const auto& layer = m.layers[l];
                        const auto& in = act[l];
                        const std::size_t w_off = offset[l];
                        const std::size_t b_off = w_off + layer.weights.data().size();
                        for (std::size_t o = 0; o < delta.size(); ++o) {
                            if (delta[o] == 0.0) continue;
                            for (std::size_t j = 0; j < in.size(); ++j) grad[w_off + o * in.size() + j] += delta[o] * in[j];
                            grad[b_off + o] += delta[o];
                        }
                        if (l == 0) break;
                        prev_delta.assign(in.size(), 0.0);
                        for (std::size_t o = 0; o < delta.size(); ++o) {
                            if (delta[o] == 0.0) continue;
                            const auto w = layer.weights.row(o);
                            for (std::size_t j = 0; j < in.size(); ++j) prev_delta[j] += delta[o] * w[j];
                        }
                        // ReLU: act[l] holds post-activation values of layer l-1.
                        for (std::size_t j = 0; j < in.size(); ++j)
                            if (in[j] <= 0.0) prev_delta[j] = 0.0;
                        delta.swap(prev_delta);
                    }
                }
                return grad;
            },
            [](const Scorer::Table&) -> std::vector<double> {
                throw NotTrainable("table scorers have no parameters to differentiate");
            }},
        scorer.variant());
}

std::vector<double> surrogate_gradient(const Scorer& scorer, const Dataset& data, const ObjectiveSpec& objective,
                                       SurrogateKind kind) {
    if (!scorer.trainable()) throw NotTrainable("table scorers have no parameters to differentiate");
    data.validate();
    const auto blocks = objective_pairs(data.labels, objective);
    const auto f = scorer.score(data.features);
    return backprop_scores(scorer, data.features, blocks_score_grad(f, blocks, kind));
}

void TrainConfig::validate() const {
    require(std::isfinite(learning_rate) && learning_rate >= 0.0, "learning rate must be finite and >= 0");
    require(epochs >= 1, "epochs must be >= 1");
    require(steps_per_epoch >= 1, "steps per epoch must be >= 1");
    require(pair_budget >= 1, "pair budget must be >= 1");
    require(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0, "Adam betas must lie in [0, 1)");
    require(epsilon > 0.0, "Adam epsilon must be > 0");
    if (model.kind == ModelSpec::Kind::Mlp)
        for (std::size_t h : model.hidden) require(h >= 1, "hidden widths must be >= 1");
}

TrainResult train(const Dataset& data, const TrainConfig& config, const Dataset* eval) {
    config.validate();
    Scorer init = config.model.kind == ModelSpec::Kind::Linear
                      ? Scorer::linear(data.features.d())
                      : Scorer::mlp(data.features.d(), config.model.hidden, config.seed);
    return train(data, config, std::move(init), eval);
}

TrainResult train(const Dataset& data, const TrainConfig& config, Scorer initial, const Dataset* eval) {
    config.validate();
    data.validate();
    if (!initial.trainable()) throw NotTrainable("table scorers cannot be trained");
    const auto blocks = objective_pairs(data.labels, config.objective);
    std::uint64_t total_pairs = 0;
    for (const auto& b : blocks) total_pairs += b.pair_count();
    const bool full_batch = total_pairs <= config.pair_budget;

    RandomStream rng(config.seed, Stream::Pairs);
    std::vector<double> params = initial.parameters();
    std::vector<double> m(params.size(), 0.0), v(params.size(), 0.0);
    std::uint64_t step = 0;

    TrainResult result{std::move(initial), {}};
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        for (std::size_t s = 0; s < config.steps_per_epoch; ++s) {
            const auto f = result.scorer.score(data.features);
            const auto score_grad = full_batch ? blocks_score_grad(f, blocks, config.surrogate)
                                               : sampled_score_grad(f, blocks, config.surrogate,
                                                                    config.pair_budget, rng);
            const auto grad = backprop_scores(result.scorer, data.features, score_grad);
            ++step;
            const double lr = config.learning_rate;
            if (config.optimizer == TrainConfig::Optimizer::Sgd) {
                for (std::size_t p = 0; p < params.size(); ++p) params[p] -= lr * grad[p];
            } else {
                const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
                const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
                for (std::size_t p = 0; p < params.size(); ++p) {
                    m[p] = config.beta1 * m[p] + (1.0 - config.beta1) * grad[p];
                    v[p] = config.beta2 * v[p] + (1.0 - config.beta2) * grad[p] * grad[p];
                    params[p] -= lr * (m[p] / c1) / (std::sqrt(v[p] / c2) + config.epsilon);
                }
            }
            if (lr != 0.0) result.scorer.set_parameters(params);
        }
        EpochRecord rec;
        rec.epoch = epoch + 1;
        const auto f = result.scorer.score(data.features);
        rec.loss = blocks_loss(f, blocks, config.surrogate);
        rec.train = auc_report(f, data.labels);
        if (eval) rec.eval = auc_report(result.scorer.score(eval->features), eval->labels);
        result.trace.push_back(std::move(rec));
    }
    return result;
}

}  // namespace rankagg
