#include "rankagg_cli/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "rankagg/bayes.hpp"
#include "rankagg/metrics.hpp"
#include "rankagg/rng.hpp"
#include "rankagg_cli/pool.hpp"

namespace rankagg::cli {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(what);
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::istringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(cell, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        require(used == cell.size() && !cell.empty(), "'" + cell + "' is not a number");
        out.push_back(v);
    }
    return out;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& v) {
    MeanSe r;
    r.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - r.mean) * (x - r.mean);
        r.se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
    }
    return r;
}

}  // namespace

ObjectiveSpec parse_objective(const std::string& text, std::size_t K) {
    if (text.rfind("label", 0) == 0 && text.size() > 5 && text.find(':') == std::string::npos) {
        std::size_t used = 0;
        unsigned long k = 0;
        try {
            k = std::stoul(text.substr(5), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        require(used == text.size() - 5 && k >= 1 && k <= K, "unknown objective '" + text + "'");
        return ObjectiveSpec::per_label(k - 1);
    }
    if (text.rfind("lossagg:", 0) == 0) {
        auto w = parse_list(text.substr(8));
        require(w.size() == K, "lossagg needs one weight per label");
        return ObjectiveSpec::loss_agg(std::move(w));
    }
    if (text == "labelagg:uniform") return ObjectiveSpec::label_agg(Aggregator::sum(), CostMatrix::uniform(K));
    if (text == "labelagg:absdiff") return ObjectiveSpec::label_agg(Aggregator::sum(), CostMatrix::abs_diff(K));
    throw InvalidArgument("unknown objective '" + text + "'");
}

ModelSpec parse_model(const std::string& text) {
    if (text == "linear") return ModelSpec::linear();
    if (text.rfind("mlp:", 0) == 0) {
        std::vector<std::size_t> hidden;
        for (double h : parse_list(text.substr(4))) {
            require(h >= 1 && h == std::floor(h), "hidden widths must be positive integers");
            hidden.push_back(static_cast<std::size_t>(h));
        }
        require(!hidden.empty(), "mlp needs at least one hidden width");
        return ModelSpec::mlp(std::move(hidden));
    }
    throw InvalidArgument("unknown model '" + text + "'");
}

SurrogateKind parse_surrogate(const std::string& text) {
    if (text == "logistic") return SurrogateKind::Logistic;
    if (text == "hinge") return SurrogateKind::Hinge;
    throw InvalidArgument("unknown surrogate '" + text + "'");
}

double solve_rho_for_pi2(const InstanceSet& x, double tau, double target, std::uint64_t seed) {
    require(tau > 0.0 && std::isfinite(tau), "solving for pi2 needs tau > 0");
    require(target > 0.0 && target < 1.0, "target pi2 must lie in (0, 1)");
    require(x.d() == 2, "the sigmoid model needs two features");
    // Same uniforms the label sampler uses for label 2, so the solved rho reproduces the prior exactly.
    RandomStream rng = RandomStream(seed, Stream::Labels).fork(1);
    std::vector<double> u(x.n());
    for (double& v : u) v = rng.uniform();
    SigmoidSynthConfig c;
    auto prior = [&](double rho) {
        std::size_t pos = 0;
        for (std::size_t i = 0; i < x.n(); ++i) {
            const auto r = x.row(i);
            pos += u[i] < sigmoid(tau * (c.w2[0] * r[0] + c.w2[1] * r[1] - rho));
        }
        return static_cast<double>(pos) / static_cast<double>(x.n());
    };
    double lo = -1.0 - 60.0 / tau, hi = 1.0 + 60.0 / tau;  // prior(lo) ~ 1, prior(hi) ~ 0
    double best = 0.0, best_err = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double p = prior(mid);
        if (std::abs(p - target) < best_err) best_err = std::abs(p - target), best = mid;
        (p > target ? lo : hi) = mid;
    }
    return best;
}

std::vector<ResultRow> run_skew_sweep(const SkewSweepConfig& config) {
    require(!config.taus.empty(), "at least one tau is required");
    require(config.n >= 2, "n must be >= 2");
    const bool by_pi2 = !config.pi2s.empty();
    const auto& points = by_pi2 ? config.pi2s : config.rhos;
    require(!points.empty(), "either rho or pi2 values are required");
    struct Task {
        double tau, point;
    };
    std::vector<Task> tasks;
    for (double tau : config.taus)
        for (double p : points) tasks.push_back({tau, p});
    std::vector<std::vector<ResultRow>> out(tasks.size());
    parallel_for(tasks.size(), [&](std::size_t t) {
        const auto start = std::chrono::steady_clock::now();
        SigmoidSynthConfig c;
        c.n = config.n;
        c.tau = tasks[t].tau;
        c.seed = config.seed;
        if (by_pi2) {
            const Dataset probe = gen_sigmoid_pair(c);
            c.rho = solve_rho_for_pi2(probe.features, c.tau, tasks[t].point, config.seed);
        } else {
            c.rho = tasks[t].point;
        }
        const Dataset data = gen_sigmoid_pair(c);
        const EtaTable& eta = *data.eta;
        const double pi2 = PriorVector::of(data.labels)[1];
        const std::vector<double> ones{1.0, 1.0};
        const std::vector<std::pair<std::string, Scorer>> methods{
            {"loss-agg", loss_agg_bayes_scorer(eta, PriorVector::of(eta), ones)},
            {"label-agg", label_agg_bayes_scorer_sum(eta)}};
        for (const auto& [name, scorer] : methods) {
            const AucReport rep = auc_report(scorer.score(data.features), data.labels);
            ResultRow row;
            row.experiment = "skew-sweep";
            row.method = name;
            if (by_pi2) row.params = {{"tau", c.tau}, {"pi2_target", tasks[t].point}, {"rho", c.rho}, {"pi2", pi2}};
            else row.params = {{"tau", c.tau}, {"rho", c.rho}, {"pi2", pi2}};
            row.auc = rep.per_label;
            row.diff = rep.diff;
            row.min = rep.min;
            row.seed = config.seed;
            row.runtime_ms = elapsed_ms(start);
            out[t].push_back(std::move(row));
        }
    });
    std::vector<ResultRow> rows;
    for (auto& v : out) rows.insert(rows.end(), v.begin(), v.end());
    sort_rows(rows);
    return rows;
}

std::vector<ResultRow> run_train(const Dataset& data, const TrainExperimentConfig& config) {
    data.validate();
    require(data.K() == 2, "training experiments compare exactly two labels");
    require(config.trials >= 1, "trials must be >= 1");
    require(config.test_fraction > 0.0 && config.test_fraction < 1.0, "test fraction must lie in (0, 1)");
    require(!config.objectives.empty(), "at least one objective is required");
    std::vector<ObjectiveSpec> objectives;
    for (const auto& o : config.objectives) objectives.push_back(parse_objective(o, data.K()));
    const std::size_t n_test = static_cast<std::size_t>(std::llround(config.test_fraction * static_cast<double>(data.n())));
    require(n_test >= 2 && data.n() - n_test >= 2, "train and test splits need at least two rows each");

    const RandomStream trial_seeds(config.seed, Stream::Split);
    const std::size_t T = config.trials, O = objectives.size();
    std::vector<AucReport> reports(O * T);
    std::vector<double> runtimes(O * T);
    parallel_for(O * T, [&](std::size_t task) {
        const auto start = std::chrono::steady_clock::now();
        const std::size_t o = task / T, t = task % T;
        const std::uint64_t seed = trial_seeds.bits_at(t);
        const Dataset trial = config.resample
                                  ? resample_to_skew(data, config.resample->first, config.resample->second, seed)
                                  : data;
        std::vector<std::size_t> perm(trial.n());
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        RandomStream shuffle(seed, Stream::Shuffle);
        for (std::size_t r = perm.size(); r > 1; --r) std::swap(perm[r - 1], perm[shuffle.below(r)]);
        const std::span<const std::size_t> test_rows(perm.data(), n_test);
        const std::span<const std::size_t> train_rows(perm.data() + n_test, perm.size() - n_test);
        const Dataset train_set = trial.select(train_rows), test_set = trial.select(test_rows);

        TrainConfig tc;
        tc.objective = objectives[o];
        tc.surrogate = config.surrogate;
        tc.model = config.model;
        tc.epochs = config.epochs;
        tc.learning_rate = config.learning_rate;
        tc.steps_per_epoch = config.steps_per_epoch;
        tc.pair_budget = config.pair_budget;
        tc.seed = seed;
        const TrainResult res = train(train_set, tc);
        reports[task] = auc_report(res.scorer.score(test_set.features), test_set.labels);
        runtimes[task] = elapsed_ms(start);
    });

    const double pi = config.resample ? config.resample->second : PriorVector::of(data.labels)[0];
    std::vector<ResultRow> rows;
    for (std::size_t o = 0; o < O; ++o) {
        std::vector<double> a1, a2, diff, mn;
        double runtime = 0.0;
        for (std::size_t t = 0; t < T; ++t) {
            const auto& r = reports[o * T + t];
            a1.push_back(r.per_label[0]);
            a2.push_back(r.per_label[1]);
            diff.push_back(r.diff);
            mn.push_back(r.min);
            runtime += runtimes[o * T + t];
        }
        const auto m1 = mean_se(a1), m2 = mean_se(a2), md = mean_se(diff), mm = mean_se(mn);
        ResultRow row;
        row.experiment = "train";
        row.method = config.objectives[o];
        row.params = {{"pi", pi}, {"trials", static_cast<double>(T)}};
        row.auc = {m1.mean, m2.mean};
        row.auc_se = {m1.se, m2.se};
        row.diff = md.mean;
        row.diff_se = md.se;
        row.min = mm.mean;
        row.min_se = mm.se;
        row.seed = config.seed;
        row.runtime_ms = runtime;
        rows.push_back(std::move(row));
    }
    sort_rows(rows);
    return rows;
}

OracleOutcome run_oracle(const Dataset& data, std::size_t P, std::int64_t grid_max, std::uint64_t seed,
                         std::uint64_t budget) {
    data.validate();
    HypothesisSpace space(data.labels, P, budget);
    MaximizerSets sets = maximizer_sets(space, grid_max, worker_count());
    RelationReport report = check_relations(space, sets);

    const auto& D = sets.denominators;
    auto row_for = [&](std::string method, std::vector<std::pair<std::string, double>> params,
                       const std::vector<std::uint64_t>& argmax) {
        const PairCounts pc = pair_counts(space, space.scores(argmax.front()));
        ResultRow row;
        row.experiment = "oracle";
        row.method = std::move(method);
        row.params = std::move(params);
        row.params.emplace_back("argmax_size", static_cast<double>(argmax.size()));
        for (int k = 0; k < 2; ++k)
            row.auc.push_back(static_cast<double>(pc.label[k]) / (2.0 * static_cast<double>(D[k])));
        const AucReport r = AucReport::from(row.auc);
        row.diff = r.diff;
        row.min = r.min;
        row.seed = seed;
        return row;
    };
    std::vector<ResultRow> rows;
    for (const auto& p : sets.loss_agg)
        rows.push_back(row_for(p.balanced ? "loss-agg-balanced" : "loss-agg",
                               {{"a1", static_cast<double>(p.a[0])},
                                {"a2", static_cast<double>(p.a[1])},
                                {"class", static_cast<double>(p.cls)}},
                               p.argmax));
    rows.push_back(row_for("label-agg", {{"a1", 0.0}, {"a2", 0.0}, {"class", 0.0}}, sets.label_agg));
    rows.push_back(row_for("product", {{"a1", 0.0}, {"a2", 0.0}, {"class", 0.0}}, sets.product));
    sort_rows(rows);
    return OracleOutcome{std::move(space), std::move(sets), report, std::move(rows)};
}

std::vector<std::pair<std::string, bool>> relation_lines(const RelationReport& r) {
    return {{"Y*_LoA,< subset of Y*_LoA,=", r.less_in_equal},
            {"Y*_LoA,> subset of Y*_LoA,=", r.greater_in_equal},
            {"Y*_LoA,= equals Y*_LaA", r.equal_is_label_agg},
            {"Y*_LaA subset of Y*_LP", r.label_agg_in_product},
            {"Y*_LoA,< is the single assignment (1,2)", r.less_singleton},
            {"Y*_LoA,> is the single assignment (2,1)", r.greater_singleton},
            {"loss-agg maximizers lie on the Pareto front", r.maximizers_on_front},
            {"front endpoints are the extreme loss-agg maximizers", r.endpoints_match},
            {"Pareto front is a line segment", r.front_linear}};
}

EtaTable random_eta(std::size_t n, std::size_t K, double lo, double hi, std::uint64_t seed) {
    require(lo >= 0.0 && hi <= 1.0 && lo <= hi, "eta range must lie in [0, 1]");
    RandomStream rng(seed, Stream::Eval);
    Matrix<double> eta(n, K);
    for (double& v : eta.data()) v = rng.uniform(lo, hi);
    return EtaTable(std::move(eta));
}

std::vector<BoundRow> run_bound(const std::vector<std::size_t>& Ks, std::size_t n, double c, std::uint64_t seed,
                                std::size_t tables) {
    require(!Ks.empty(), "at least one K is required");
    require(c >= 0.0 && c <= 0.5, "c must lie in [0, 0.5]");
    require(tables >= 1, "tables must be >= 1");
    if (n > kMaxWeakOrderSize)
        throw TooLarge("gap measurement supports at most " + std::to_string(kMaxWeakOrderSize) + " instances");
    for (std::size_t K : Ks) require(K >= 1 && K <= 20, "K must lie in [1, 20]");
    std::vector<BoundRow> rows(Ks.size() * tables);
    parallel_for(rows.size(), [&](std::size_t task) {
        const std::size_t K = Ks[task / tables], t = task % tables;
        const std::uint64_t table_seed = RandomStream(seed, Stream::Eval).fork(K).bits_at(t);
        const EtaTable eta = random_eta(n, K, c, 1.0 - c, table_seed);
        const std::vector<double> a(K, 1.0);
        const BoundReport rep = bound_report(eta, a);
        rows[task] = {K, t, rep.argument, rep.bound_value, rep.empirical_gap};
    });
    std::ranges::stable_sort(rows, [](const BoundRow& a, const BoundRow& b) {
        return std::pair(a.K, a.table) < std::pair(b.K, b.table);
    });
    return rows;
}

}  // namespace rankagg::cli
