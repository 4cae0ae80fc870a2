#include "rankagg/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "rankagg/rng.hpp"

namespace rankagg {

namespace {

constexpr std::size_t kMaxEnumeratedLabels = 20;

template <typename... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};
template <typename... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(what);
}

}  // namespace

InstanceSet::InstanceSet(Matrix<double> features) : features_(std::move(features)) {
    require(features_.rows() >= 1 && features_.cols() >= 1, "InstanceSet needs n >= 1 and d >= 1");
    for (double v : features_.data()) require(std::isfinite(v), "InstanceSet entries must be finite");
}

SampledLabels::SampledLabels(Matrix<std::uint8_t> labels) : labels_(std::move(labels)) {
    require(labels_.cols() >= 1, "SampledLabels needs K >= 1");
    for (auto v : labels_.data()) require(v <= 1, "labels must be 0 or 1");
}

EtaTable::EtaTable(Matrix<double> eta) : eta_(std::move(eta)) {
    require(eta_.cols() >= 1, "EtaTable needs K >= 1");
    for (double v : eta_.data())
        require(v >= 0.0 && v <= 1.0, "class probabilities must lie in [0, 1]");
}

bool EtaTable::deterministic() const noexcept {
    return std::ranges::all_of(eta_.data(), [](double v) { return v == 0.0 || v == 1.0; });
}

JointLabelModel JointLabelModel::independent(EtaTable eta) {
    return JointLabelModel(ConditionallyIndependent{std::move(eta)});
}

JointLabelModel JointLabelModel::explicit_table(std::size_t K, Matrix<double> table) {
    require(K >= 1 && K <= kMaxEnumeratedLabels, "explicit joint model needs 1 <= K <= 20");
    require(table.cols() == (std::size_t{1} << K), "explicit joint table needs 2^K columns");
    for (std::size_t i = 0; i < table.rows(); ++i) {
        double total = 0.0;
        for (double p : table.row(i)) {
            require(p >= 0.0, "joint probabilities must be non-negative");
            total += p;
        }
        require(std::abs(total - 1.0) <= kProbabilityTolerance,
                "joint probability row " + std::to_string(i) + " does not sum to 1");
    }
    return JointLabelModel(Explicit{K, std::move(table)});
}

std::size_t JointLabelModel::n() const noexcept {
    return std::visit(Overloaded{[](const ConditionallyIndependent& m) { return m.eta.n(); },
                                 [](const Explicit& m) { return m.table.rows(); }},
                      mode_);
}

std::size_t JointLabelModel::K() const noexcept {
    return std::visit(Overloaded{[](const ConditionallyIndependent& m) { return m.eta.K(); },
                                 [](const Explicit& m) { return m.K; }},
                      mode_);
}

double JointLabelModel::probability(std::size_t i, std::uint32_t combo) const noexcept {
    return std::visit(Overloaded{[&](const ConditionallyIndependent& m) {
                                     double p = 1.0;
                                     for (std::size_t k = 0; k < m.eta.K(); ++k) {
                                         const double e = m.eta(i, k);
                                         p *= ((combo >> k) & 1U) ? e : 1.0 - e;
                                     }
                                     return p;
                                 },
                                 [&](const Explicit& m) { return m.table(i, combo); }},
                      mode_);
}

Matrix<double> JointLabelModel::expand() const {
    if (const auto* e = std::get_if<Explicit>(&mode_)) return e->table;
    const std::size_t k = K();
    require(k <= kMaxEnumeratedLabels, "cannot expand more than 20 labels");
    const std::size_t combos = std::size_t{1} << k;
    Matrix<double> out(n(), combos);
    for (std::size_t i = 0; i < n(); ++i)
        for (std::uint32_t c = 0; c < combos; ++c) out(i, c) = probability(i, c);
    return out;
}

EtaTable JointLabelModel::marginals() const {
    if (const auto* m = std::get_if<ConditionallyIndependent>(&mode_)) return m->eta;
    const auto& e = std::get<Explicit>(mode_);
    Matrix<double> eta(e.table.rows(), e.K);
    for (std::size_t i = 0; i < e.table.rows(); ++i)
        for (std::uint32_t c = 0; c < e.table.cols(); ++c)
            for (std::size_t k = 0; k < e.K; ++k)
                if ((c >> k) & 1U) eta(i, k) += e.table(i, c);
    for (auto& v : eta.data()) v = std::clamp(v, 0.0, 1.0);
    return EtaTable(std::move(eta));
}

PriorVector PriorVector::of(const SampledLabels& labels) {
    PriorVector p{std::vector<double>(labels.K(), 0.0)};
    for (std::size_t k = 0; k < labels.K(); ++k) {
        std::size_t pos = 0;
        for (std::size_t i = 0; i < labels.n(); ++i) pos += labels(i, k);
        p.pi[k] = static_cast<double>(pos) / static_cast<double>(labels.n());
    }
    return p;
}

PriorVector PriorVector::of(const EtaTable& eta) {
    PriorVector p{std::vector<double>(eta.K(), 0.0)};
    for (std::size_t k = 0; k < eta.K(); ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < eta.n(); ++i) s += eta(i, k);
        p.pi[k] = s / static_cast<double>(eta.n());
    }
    return p;
}

CostMatrix CostMatrix::uniform(std::size_t L) {
    Matrix<double> c(L + 1, L + 1);
    for (std::size_t hi = 0; hi <= L; ++hi)
        for (std::size_t lo = 0; lo < hi; ++lo) c(hi, lo) = 1.0;
    return CostMatrix(std::move(c), Kind::Uniform);
}

CostMatrix CostMatrix::abs_diff(std::size_t L) {
    Matrix<double> c(L + 1, L + 1);
    for (std::size_t hi = 0; hi <= L; ++hi)
        for (std::size_t lo = 0; lo < hi; ++lo) c(hi, lo) = static_cast<double>(hi - lo);
    return CostMatrix(std::move(c), Kind::AbsDiff);
}

CostMatrix CostMatrix::custom(Matrix<double> costs) {
    require(costs.rows() >= 2 && costs.rows() == costs.cols(), "cost matrix must be square, size >= 2");
    for (std::size_t hi = 0; hi < costs.rows(); ++hi)
        for (std::size_t lo = 0; lo < costs.cols(); ++lo) {
            if (lo >= hi) {
                costs(hi, lo) = 0.0;
                continue;
            }
            require(std::isfinite(costs(hi, lo)) && costs(hi, lo) >= 0.0, "costs must be finite and >= 0");
        }
    return CostMatrix(std::move(costs), Kind::Custom);
}

CostMatrix CostMatrix::resized(std::size_t L) const {
    switch (kind_) {
        case Kind::Uniform: return uniform(L);
        case Kind::AbsDiff: return abs_diff(L);
        case Kind::Custom:
            if (L == this->L()) return *this;
            throw InvalidArgument("custom cost matrix of size " + std::to_string(levels()) +
                                  " does not match an alphabet of size " + std::to_string(L + 1));
    }
    return *this;
}

Scorer::Scorer(Linear linear) : variant_(std::move(linear)) {
    require(!std::get<Linear>(variant_).weights.empty(), "linear scorer needs d >= 1");
}

Scorer::Scorer(Mlp mlp) : variant_(std::move(mlp)) {
    const auto& layers = std::get<Mlp>(variant_).layers;
    require(!layers.empty(), "MLP needs at least one layer");
    for (std::size_t l = 0; l < layers.size(); ++l) {
        require(layers[l].bias.size() == layers[l].weights.rows(), "MLP bias size mismatch");
        if (l > 0)
            require(layers[l].weights.cols() == layers[l - 1].weights.rows(), "MLP layer shapes do not chain");
    }
    require(layers.back().weights.rows() == 1, "MLP output layer must have width 1");
}

Scorer::Scorer(Table table) : variant_(std::move(table)) {}

Scorer Scorer::linear(std::size_t d) { return Scorer(Linear{std::vector<double>(d, 0.0), 0.0}); }

Scorer Scorer::mlp(std::size_t d, std::span<const std::size_t> hidden, std::uint64_t seed) {
    RandomStream rng(seed, Stream::Init);
    std::vector<MlpLayer> layers;
    std::size_t fan_in = d;
    auto add_layer = [&](std::size_t width) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        MlpLayer layer{Matrix<double>(width, fan_in), std::vector<double>(width)};
        for (auto& w : layer.weights.data()) w = rng.uniform(-bound, bound);
        for (auto& b : layer.bias) b = rng.uniform(-bound, bound);
        layers.push_back(std::move(layer));
        fan_in = width;
    };
    for (std::size_t h : hidden) {
        require(h >= 1, "hidden widths must be >= 1");
        add_layer(h);
    }
    add_layer(1);
    return Scorer(Mlp{std::move(layers)});
}

std::vector<double> Scorer::score(const InstanceSet& x) const {
    return std::visit(
        Overloaded{
            [&](const Linear& m) {
                require(m.weights.size() == x.d(), "linear scorer dimension mismatch");
                std::vector<double> out(x.n());
                for (std::size_t i = 0; i < x.n(); ++i) {
                    double s = m.bias;
                    const auto row = x.row(i);
                    for (std::size_t j = 0; j < row.size(); ++j) s += m.weights[j] * row[j];
                    out[i] = s;
                }
                return out;
            },
            [&](const Mlp& m) {
                require(m.layers.front().weights.cols() == x.d(), "MLP input dimension mismatch");
                std::vector<double> out(x.n());
                std::vector<double> cur, next;
                for (std::size_t i = 0; i < x.n(); ++i) {
                    cur.assign(x.row(i).begin(), x.row(i).end());
                    for (std::size_t l = 0; l < m.layers.size(); ++l) {
                        const auto& layer = m.layers[l];
                        next.assign(layer.bias.begin(), layer.bias.end());
                        for (std::size_t o = 0; o < next.size(); ++o) {
                            const auto w = layer.weights.row(o);
                            for (std::size_t j = 0; j < cur.size(); ++j) next[o] += w[j] * cur[j];
                        }
                        if (l + 1 < m.layers.size())
                            for (auto& v : next) v = std::max(v, 0.0);
                        cur.swap(next);
                    }
                    out[i] = cur[0];
                }
                return out;
            },
            [&](const Table& m) {
                require(m.scores.size() == x.n(), "table scorer length must equal n");
                return m.scores;
            }},
        variant_);
}

std::size_t Scorer::parameter_count() const noexcept {
    return std::visit(Overloaded{[](const Linear& m) { return m.weights.size() + 1; },
                                 [](const Mlp& m) {
                                     std::size_t c = 0;
                                     for (const auto& l : m.layers) c += l.weights.data().size() + l.bias.size();
                                     return c;
                                 },
                                 [](const Table&) { return std::size_t{0}; }},
                      variant_);
}

std::vector<double> Scorer::parameters() const {
    std::vector<double> out;
    out.reserve(parameter_count());
    std::visit(Overloaded{[&](const Linear& m) {
                              out.insert(out.end(), m.weights.begin(), m.weights.end());
                              out.push_back(m.bias);
                          },
                          [&](const Mlp& m) {
                              for (const auto& l : m.layers) {
                                  out.insert(out.end(), l.weights.data().begin(), l.weights.data().end());
                                  out.insert(out.end(), l.bias.begin(), l.bias.end());
                              }
                          },
                          [](const Table&) { throw NotTrainable("table scorers have no parameters"); }},
               variant_);
    return out;
}

void Scorer::set_parameters(std::span<const double> params) {
    require(params.size() == parameter_count(), "parameter vector has the wrong length");
    std::size_t pos = 0;
    std::visit(Overloaded{[&](Linear& m) {
                              for (auto& w : m.weights) w = params[pos++];
                              m.bias = params[pos++];
                          },
                          [&](Mlp& m) {
                              for (auto& l : m.layers) {
                                  for (auto& w : l.weights.data()) w = params[pos++];
                                  for (auto& b : l.bias) b = params[pos++];
                              }
                          },
                          [](Table&) { throw NotTrainable("table scorers have no parameters"); }},
               variant_);
}

Aggregator Aggregator::weighted_sum(std::vector<double> alpha) {
    require(!alpha.empty(), "weighted sum needs at least one weight");
    for (double a : alpha) require(std::isfinite(a) && a > 0.0, "aggregation weights must be > 0");
    return {Kind::WeightedSum, std::move(alpha)};
}

ObjectiveSpec ObjectiveSpec::loss_agg(std::vector<double> weights) {
    require(!weights.empty(), "loss aggregation needs at least one weight");
    for (double a : weights) require(std::isfinite(a) && a > 0.0, "loss aggregation weights must be > 0");
    return {LossAgg{std::move(weights)}};
}

ObjectiveSpec ObjectiveSpec::label_agg(Aggregator aggregator, CostMatrix costs) {
    return {LabelAgg{std::move(aggregator), std::move(costs)}};
}

namespace {

/// Aggregate value of every label combination, summed in label order.
std::vector<double> combo_values(const Aggregator& agg, std::size_t K) {
    require(K <= kMaxEnumeratedLabels, "weighted aggregation supports at most 20 labels");
    require(agg.alpha.size() == K, "aggregation weight count must equal K");
    const std::size_t combos = std::size_t{1} << K;
    std::vector<double> values(combos);
    for (std::size_t c = 0; c < combos; ++c) {
        double v = 0.0;
        for (std::size_t k = 0; k < K; ++k)
            if ((c >> k) & 1U) v += agg.alpha[k];
        values[c] = v;
    }
    return values;
}

std::vector<double> sorted_distinct(std::vector<double> v) {
    std::ranges::sort(v);
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::uint32_t level_of(const std::vector<double>& alphabet, double v) {
    return static_cast<std::uint32_t>(std::ranges::lower_bound(alphabet, v) - alphabet.begin());
}

}  // namespace

OrdinalLabels aggregate_labels(const SampledLabels& labels, const Aggregator& aggregator) {
    const std::size_t n = labels.n(), K = labels.K();
    OrdinalLabels out;
    out.values.resize(n);
    switch (aggregator.kind) {
        case Aggregator::Kind::Sum:
            for (std::size_t i = 0; i < n; ++i) {
                std::uint32_t s = 0;
                for (std::size_t k = 0; k < K; ++k) s += labels(i, k);
                out.values[i] = s;
            }
            out.levels = K + 1;
            for (std::size_t m = 0; m <= K; ++m) out.alphabet.push_back(static_cast<double>(m));
            break;
        case Aggregator::Kind::Product:
            for (std::size_t i = 0; i < n; ++i) {
                std::uint32_t p = 1;
                for (std::size_t k = 0; k < K; ++k) p &= labels(i, k);
                out.values[i] = p;
            }
            out.levels = 2;
            out.alphabet = {0.0, 1.0};
            break;
        case Aggregator::Kind::WeightedSum: {
            require(aggregator.alpha.size() == K, "aggregation weight count must equal K");
            std::vector<double> raw(n);
            for (std::size_t i = 0; i < n; ++i) {
                double v = 0.0;
                for (std::size_t k = 0; k < K; ++k)
                    if (labels(i, k)) v += aggregator.alpha[k];
                raw[i] = v;
            }
            out.alphabet = sorted_distinct(raw);
            out.levels = out.alphabet.size();
            for (std::size_t i = 0; i < n; ++i) out.values[i] = level_of(out.alphabet, raw[i]);
            break;
        }
    }
    return out;
}

AggregateDistribution aggregate_distribution(const JointLabelModel& model, const Aggregator& aggregator) {
    const std::size_t n = model.n(), K = model.K();
    AggregateDistribution out;
    switch (aggregator.kind) {
        case Aggregator::Kind::Sum: {
            out.probs = Matrix<double>(n, K + 1);
            for (std::size_t m = 0; m <= K; ++m) out.alphabet.push_back(static_cast<double>(m));
            if (const auto* ind = std::get_if<JointLabelModel::ConditionallyIndependent>(&model.mode())) {
                // Poisson-binomial recursion over labels.
                std::vector<double> dist;
                for (std::size_t i = 0; i < n; ++i) {
                    dist.assign(K + 1, 0.0);
                    dist[0] = 1.0;
                    for (std::size_t k = 0; k < K; ++k) {
                        const double e = ind->eta(i, k);
                        for (std::size_t m = k + 1; m > 0; --m) dist[m] = dist[m] * (1.0 - e) + dist[m - 1] * e;
                        dist[0] *= 1.0 - e;
                    }
                    std::ranges::copy(dist, out.probs.row(i).begin());
                }
            } else {
                const auto& table = std::get<JointLabelModel::Explicit>(model.mode()).table;
                for (std::size_t i = 0; i < n; ++i)
                    for (std::uint32_t c = 0; c < table.cols(); ++c)
                        out.probs(i, static_cast<std::size_t>(std::popcount(c))) += table(i, c);
            }
            break;
        }
        case Aggregator::Kind::Product: {
            out.probs = Matrix<double>(n, 2);
            out.alphabet = {0.0, 1.0};
            const auto all_ones = static_cast<std::uint32_t>((std::size_t{1} << K) - 1);
            for (std::size_t i = 0; i < n; ++i) {
                const double p = model.probability(i, all_ones);
                out.probs(i, 1) = p;
                out.probs(i, 0) = 1.0 - p;
            }
            break;
        }
        case Aggregator::Kind::WeightedSum: {
            const auto values = combo_values(aggregator, K);
            out.alphabet = sorted_distinct(values);
            out.probs = Matrix<double>(n, out.alphabet.size());
            std::vector<std::uint32_t> level(values.size());
            for (std::size_t c = 0; c < values.size(); ++c) level[c] = level_of(out.alphabet, values[c]);
            for (std::size_t i = 0; i < n; ++i)
                for (std::uint32_t c = 0; c < values.size(); ++c) out.probs(i, level[c]) += model.probability(i, c);
            break;
        }
    }
    return out;
}

void Dataset::validate() const {
    require(labels.n() == features.n(), "label rows must match feature rows");
    if (eta) require(eta->n() == features.n() && eta->K() == labels.K(), "eta table shape must match labels");
}

Dataset Dataset::select(std::span<const std::size_t> rows) const {
    const std::size_t d = features.d(), K = labels.K();
    Matrix<double> x(rows.size(), d);
    Matrix<std::uint8_t> y(rows.size(), K);
    std::optional<Matrix<double>> e;
    if (eta) e.emplace(rows.size(), K);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::size_t src = rows[r];
        require(src < n(), "row index out of range");
        std::ranges::copy(features.row(src), x.row(r).begin());
        for (std::size_t k = 0; k < K; ++k) {
            y(r, k) = labels(src, k);
            if (e) (*e)(r, k) = (*eta)(src, k);
        }
    }
    Dataset out{InstanceSet(std::move(x)), SampledLabels(std::move(y)), std::nullopt};
    if (e) out.eta.emplace(std::move(*e));
    return out;
}

std::vector<double> label_column(const SampledLabels& labels, std::size_t k) {
    require(k < labels.K(), "label index out of range");
    std::vector<double> out(labels.n());
    for (std::size_t i = 0; i < labels.n(); ++i) out[i] = labels(i, k);
    return out;
}

}  // namespace rankagg
