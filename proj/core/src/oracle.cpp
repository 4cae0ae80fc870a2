#include "rankagg/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <thread>

#include "rankagg/metrics.hpp"

namespace rankagg {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(what);
}

constexpr std::size_t kChunks = 64;

bool is_subset(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    return std::ranges::includes(b, a);
}

}  // namespace

HypothesisSpace::HypothesisSpace(const SampledLabels& labels, std::size_t P, std::uint64_t budget) : P_(P) {
    require(labels.K() == 2, "hypothesis enumeration needs exactly two labels");
    require(P >= 2, "P must be >= 2");
    combo_.resize(labels.n());
    for (std::size_t i = 0; i < labels.n(); ++i) {
        combo_[i] = static_cast<std::uint8_t>(labels(i, 0) | (labels(i, 1) << 1));
        if (combo_[i] == 1 || combo_[i] == 2) free_rows_.push_back(i);
    }
    // P^M with saturation.
    std::uint64_t total = 1;
    bool overflow = false;
    for (std::size_t m = 0; m < free_rows_.size(); ++m) {
        if (total > std::numeric_limits<std::uint64_t>::max() / P) {
            overflow = true;
            break;
        }
        total *= P;
    }
    if (overflow || total > budget) {
        throw BudgetExceeded("P^M = " + std::to_string(P) + "^" + std::to_string(free_rows_.size()) +
                                 " hypotheses exceed the budget of " + std::to_string(budget),
                             overflow ? std::numeric_limits<std::uint64_t>::max() : total);
    }
    total_ = total;
}

void HypothesisSpace::scores(std::uint64_t index, std::span<double> out) const {
    require(index < total_, "hypothesis index out of range");
    require(out.size() == n(), "score buffer has the wrong length");
    for (std::size_t i = 0; i < n(); ++i) out[i] = combo_[i] == 3 ? static_cast<double>(P_) : 0.0;
    for (std::size_t m = free_rows_.size(); m-- > 0;) {
        out[free_rows_[m]] = static_cast<double>(1 + index % P_);
        index /= P_;
    }
}

std::vector<double> HypothesisSpace::scores(std::uint64_t index) const {
    std::vector<double> out(n());
    scores(index, out);
    return out;
}

namespace {

/// Visits hypotheses [begin, end) by odometer increments.
template <typename F>
void for_range(const HypothesisSpace& space, std::uint64_t begin, std::uint64_t end, F&& f) {
    if (begin >= end) return;
    std::vector<double> s(space.n());
    space.scores(begin, s);
    const auto& rows = space.free_rows();
    const double top = static_cast<double>(space.P());
    for (std::uint64_t idx = begin;;) {
        f(idx, std::span<const double>(s));
        if (++idx == end) break;
        for (std::size_t m = rows.size(); m-- > 0;) {
            double& v = s[rows[m]];
            if (v < top) {
                v += 1.0;
                break;
            }
            v = 1.0;
        }
    }
}

}  // namespace

void enumerate_hypotheses(const HypothesisSpace& space,
                          const std::function<void(std::uint64_t, std::span<const double>)>& visit) {
    for_range(space, 0, space.total(), visit);
}

PairCounts pair_counts(const HypothesisSpace& space, std::span<const double> scores) {
    require(scores.size() == space.n(), "score vector has the wrong length");
    const std::size_t levels = space.P() + 1;
    std::array<std::vector<std::int64_t>, 4> hist;
    for (auto& h : hist) h.assign(levels, 0);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const double v = scores[i];
        require(v >= 0.0 && v <= static_cast<double>(space.P()) && v == std::floor(v),
                "hypothesis scores must be integers in [0, P]");
        ++hist[space.combos()[i]][static_cast<std::size_t>(v)];
    }
    // q[c][d]: doubled count of c-rows ranked above d-rows.
    std::int64_t q[4][4] = {};
    for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
            if (c == d) continue;
            std::int64_t below = 0, total = 0;
            for (std::size_t s = 0; s < levels; ++s) {
                total += hist[c][s] * (2 * below + hist[d][s]);
                below += hist[d][s];
            }
            q[c][d] = total;
        }
    PairCounts out;
    for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
            if (c == d) continue;
            for (int k = 0; k < 2; ++k)
                if (((c >> k) & 1) && !((d >> k) & 1)) out.label[k] += q[c][d];
            if (std::popcount(static_cast<unsigned>(c)) > std::popcount(static_cast<unsigned>(d)))
                out.sum_uniform += q[c][d];
            if (c == 3) out.product += q[c][d];
        }
    return out;
}

namespace {

struct Argmax {
    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    std::vector<std::uint64_t> set;

    void offer(std::int64_t value, std::uint64_t idx) {
        if (value > best) {
            best = value;
            set.assign(1, idx);
        } else if (value == best) {
            set.push_back(idx);
        }
    }
    void merge(const Argmax& o) {
        if (o.best > best) *this = o;
        else if (o.best == best) set.insert(set.end(), o.set.begin(), o.set.end());
    }
};

struct ChunkState {
    std::vector<Argmax> loss_agg;
    Argmax label_agg;
    Argmax product;
    std::set<std::array<std::int64_t, 2>> scatter;
};

}  // namespace

std::vector<std::uint64_t> MaximizerSets::loss_agg_class(int cls) const {
    std::vector<std::uint64_t> out;
    for (const auto& p : loss_agg)
        if (p.cls == cls) out.insert(out.end(), p.argmax.begin(), p.argmax.end());
    std::ranges::sort(out);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

MaximizerSets maximizer_sets(const HypothesisSpace& space, std::int64_t grid_max, unsigned threads) {
    require(grid_max >= 1, "weight grid needs at least one value");
    MaximizerSets out;
    std::array<std::int64_t, 4> count{};
    for (auto c : space.combos()) ++count[c];
    for (int k = 0; k < 2; ++k) {
        std::int64_t pos = 0, neg = 0;
        for (int c = 0; c < 4; ++c) (((c >> k) & 1) ? pos : neg) += count[c];
        out.denominators[k] = pos * neg;
        if (out.denominators[k] == 0)
            throw DegenerateLabel("label " + std::to_string(k) + " has a single class", static_cast<std::size_t>(k));
    }
    const auto D = out.denominators;
    auto classify = [&](std::int64_t a1, std::int64_t a2) {
        const std::int64_t s = a1 * D[1] - a2 * D[0];
        return s < 0 ? -1 : (s > 0 ? 1 : 0);
    };
    for (std::int64_t a1 = 1; a1 <= grid_max; ++a1)
        for (std::int64_t a2 = 1; a2 <= grid_max; ++a2) out.loss_agg.push_back({{a1, a2}, classify(a1, a2), false, {}});
    out.loss_agg.push_back({{D[0], D[1]}, 0, true, {}});

    const std::uint64_t total = space.total();
    const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(kChunks, total));
    std::vector<ChunkState> states(chunks);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t c; (c = next.fetch_add(1)) < chunks;) {
            ChunkState& st = states[c];
            st.loss_agg.resize(out.loss_agg.size());
            const std::uint64_t begin = total * c / chunks, end = total * (c + 1) / chunks;
            for_range(space, begin, end, [&](std::uint64_t idx, std::span<const double> s) {
                const PairCounts pc = pair_counts(space, s);
                for (std::size_t g = 0; g < out.loss_agg.size(); ++g) {
                    const auto& a = out.loss_agg[g].a;
                    st.loss_agg[g].offer(a[0] * pc.label[0] * D[1] + a[1] * pc.label[1] * D[0], idx);
                }
                st.label_agg.offer(pc.sum_uniform, idx);
                st.product.offer(pc.product, idx);
                st.scatter.insert(pc.label);
            });
        }
    };
    unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, chunks));
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();

    // Chunks cover ascending index ranges, so merging in order keeps every set sorted.
    std::vector<Argmax> la(out.loss_agg.size());
    Argmax lab, prod;
    std::set<std::array<std::int64_t, 2>> scatter;
    for (auto& st : states) {
        for (std::size_t g = 0; g < la.size(); ++g) la[g].merge(st.loss_agg[g]);
        lab.merge(st.label_agg);
        prod.merge(st.product);
        scatter.merge(st.scatter);
    }
    for (std::size_t g = 0; g < la.size(); ++g) out.loss_agg[g].argmax = std::move(la[g].set);
    out.label_agg = std::move(lab.set);
    out.product = std::move(prod.set);
    out.scatter.assign(scatter.begin(), scatter.end());
    for (const auto& p : out.scatter) {
        bool dominated = false;
        for (const auto& q : out.scatter)
            if (q[0] >= p[0] && q[1] >= p[1] && q != p) {
                dominated = true;
                break;
            }
        if (!dominated) out.front.push_back(p);
    }
    return out;
}

bool RelationReport::all() const noexcept {
    return less_in_equal && greater_in_equal && equal_is_label_agg && label_agg_in_product && less_singleton &&
           greater_singleton && maximizers_on_front && endpoints_match && front_linear;
}

RelationReport check_relations(const HypothesisSpace& space, const MaximizerSets& sets) {
    RelationReport r;
    const auto less = sets.loss_agg_class(-1);
    const auto greater = sets.loss_agg_class(1);
    const auto& la = sets.label_agg;
    r.less_in_equal = is_subset(less, la);
    r.greater_in_equal = is_subset(greater, la);
    r.equal_is_label_agg = true;
    for (const auto& p : sets.loss_agg)
        if (p.cls == 0 && p.argmax != la) r.equal_is_label_agg = false;
    r.label_agg_in_product = is_subset(la, sets.product);
    // The single maximizer scores one disagreement group 1 and the other 2; the favoured label's group goes on top.
    auto split_groups = [&](const std::vector<std::uint64_t>& ids, std::uint8_t top_combo) {
        if (ids.size() != 1) return false;
        const auto s = space.scores(ids.front());
        for (std::size_t i : space.free_rows())
            if (s[i] != (space.combos()[i] == top_combo ? 2.0 : 1.0)) return false;
        return true;
    };
    r.less_singleton = split_groups(less, 2);
    r.greater_singleton = split_groups(greater, 1);

    auto counts_of = [&](std::uint64_t idx) { return pair_counts(space, space.scores(idx)).label; };
    r.maximizers_on_front = true;
    for (const auto& p : sets.loss_agg)
        for (auto idx : p.argmax)
            if (!std::ranges::binary_search(sets.front, counts_of(idx))) r.maximizers_on_front = false;

    if (!sets.front.empty()) {
        // front is ascending in the first coordinate, hence descending in the second.
        const auto hi1 = sets.front.back(), hi2 = sets.front.front();
        auto all_at = [&](const std::vector<std::uint64_t>& ids, const std::array<std::int64_t, 2>& pt) {
            return !ids.empty() && std::ranges::all_of(ids, [&](auto idx) { return counts_of(idx) == pt; });
        };
        r.endpoints_match = all_at(greater, hi1) && all_at(less, hi2);
        r.front_linear = true;
        for (const auto& p : sets.front) {
            const std::int64_t cross =
                (hi1[0] - hi2[0]) * (p[1] - hi2[1]) - (hi1[1] - hi2[1]) * (p[0] - hi2[0]);
            if (cross != 0) r.front_linear = false;
        }
    }
    return r;
}

namespace {

struct WeakOrderSearch {
    const Matrix<double>& w;
    std::size_t n;
    std::vector<int> rank;
    std::vector<int> used;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<int> best_rank;
    std::uint64_t visited = 0;

    void descend(std::size_t i, double partial) {
        if (i == n) {
            int top = -1;
            for (int v = 0; v < static_cast<int>(n); ++v)
                if (used[v]) top = v;
            for (int v = 0; v <= top; ++v)
                if (!used[v]) return;
            ++visited;
            if (partial > best) {
                best = partial;
                best_rank = rank;
            }
            return;
        }
        for (int v = 0; v < static_cast<int>(n); ++v) {
            rank[i] = v;
            ++used[v];
            // Values below the largest used one that are still missing must fit in the remaining slots.
            int top = -1, missing = 0;
            for (int u = 0; u < static_cast<int>(n); ++u)
                if (used[u]) top = u;
            for (int u = 0; u < top; ++u)
                if (!used[u]) ++missing;
            if (missing <= static_cast<int>(n - i - 1)) {
                double add = 0.0;
                for (std::size_t j = 0; j < i; ++j) {
                    const double h = rank[i] > rank[j] ? 1.0 : (rank[i] == rank[j] ? 0.5 : 0.0);
                    add += w(i, j) * h + w(j, i) * (1.0 - h);
                }
                descend(i + 1, partial + add);
            }
            --used[v];
        }
    }
};

}  // namespace

WeakOrderResult optimal_weak_order(const Matrix<double>& weights) {
    require(weights.rows() == weights.cols(), "pair weights must be square");
    const std::size_t n = weights.rows();
    require(n >= 1, "need at least one instance");
    if (n > kMaxWeakOrderSize)
        throw TooLarge("weak-order enumeration supports at most " + std::to_string(kMaxWeakOrderSize) +
                       " instances, got " + std::to_string(n));
    WeakOrderSearch s{weights, n, std::vector<int>(n, 0), std::vector<int>(n, 0), -std::numeric_limits<double>::infinity(), {}, 0};
    s.descend(0, 0.0);
    WeakOrderResult out;
    out.scores.assign(s.best_rank.begin(), s.best_rank.end());
    out.value = pairwise_objective(out.scores, weights);
    out.orders_visited = s.visited;
    return out;
}

WeakOrderResult optimal_weak_order(const JointLabelModel& model, const ObjectiveSpec& objective) {
    if (model.n() > kMaxWeakOrderSize)
        throw TooLarge("weak-order enumeration supports at most " + std::to_string(kMaxWeakOrderSize) +
                       " instances, got " + std::to_string(model.n()));
    return optimal_weak_order(population_pair_weights(model, objective));
}

Certificate certify_bayes(std::span<const double> scores, const JointLabelModel& model,
                          const ObjectiveSpec& objective) {
    require(scores.size() == model.n(), "one score per instance is required");
    if (model.n() > kMaxWeakOrderSize)
        throw TooLarge("certification supports at most " + std::to_string(kMaxWeakOrderSize) + " instances");
    const Matrix<double> w = population_pair_weights(model, objective);
    const WeakOrderResult best = optimal_weak_order(w);
    Certificate c;
    c.value = pairwise_objective(scores, w);
    c.best = best.value;
    c.gap = std::max(0.0, c.best - c.value);
    c.optimal = c.gap <= kCertifyTolerance;
    return c;
}

Certificate certify_bayes(const Scorer& scorer, const JointLabelModel& model, const ObjectiveSpec& objective) {
    const auto* table = std::get_if<Scorer::Table>(&scorer.variant());
    require(table != nullptr, "certification needs a table scorer over the instance set");
    return certify_bayes(table->scores, model, objective);
}

}  // namespace rankagg
