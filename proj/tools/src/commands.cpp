#include "rankagg_cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "rankagg/metrics.hpp"
#include "rankagg_cli/csv.hpp"
#include "rankagg_cli/experiments.hpp"
#include "rankagg_cli/svg.hpp"

namespace rankagg::cli {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

/// Pulls `--config FILE` out of args and injects its keys ahead of the user's flags.
std::vector<std::string> apply_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--config needs a file");
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (path.empty()) return args;
    auto given = [&](const std::string& key) {
        const std::string flag = "--" + key;
        return std::ranges::any_of(args, [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
    };
    std::vector<std::string> injected;
    for (const auto& [k, v] : read_config(path))
        if (!given(k)) injected.push_back("--" + k + "=" + v);
    // Insert right after the subcommand name.
    const std::size_t at = args.size() > 1 ? 2 : args.size();
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), injected.begin(), injected.end());
    return args;
}

std::vector<double> pi2_defaults() {
    std::vector<double> out;
    for (int i = 0; i <= 9; ++i) out.push_back(0.5 + 0.05 * i);
    return out;
}

void emit_rows(const fs::path& path, const std::vector<ResultRow>& rows, bool timing) {
    write_rows(path, rows, timing);
    std::cout << "wrote " << path.string() << " (" << rows.size() << " rows)\n";
}

std::size_t resolve_label(const std::string& text, const std::vector<std::string>& picked) {
    for (std::size_t i = 0; i < picked.size(); ++i)
        if (picked[i] == text) return i;
    std::size_t used = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || v < 1 || v > picked.size())
        throw InvalidArgument("--resample-pi label '" + text + "' is neither a selected column nor 1.." +
                              std::to_string(picked.size()));
    return v - 1;
}

Dataset pick_labels(const Dataset& data, const std::vector<std::string>& names) {
    if (names.size() != 2) throw InvalidArgument("--labels needs exactly two columns");
    std::vector<std::size_t> cols;
    for (const auto& name : names) {
        if (name.size() < 2 || name[0] != 'y') throw InvalidArgument("label columns are named y0..y{K-1}");
        std::size_t used = 0;
        unsigned long k = 0;
        try {
            k = std::stoul(name.substr(1), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != name.size() - 1) throw InvalidArgument("label columns are named y0..y{K-1}");
        if (k >= data.K()) throw DataError("dataset has no column " + name);
        cols.push_back(k);
    }
    Matrix<std::uint8_t> y(data.n(), 2);
    for (std::size_t i = 0; i < data.n(); ++i)
        for (std::size_t j = 0; j < 2; ++j) y(i, j) = data.labels(i, cols[j]);
    return Dataset{data.features, SampledLabels(std::move(y)), std::nullopt};
}

struct SweepFlags {
    std::vector<double> tau{1.0, 5.0}, rho, pi2;
    std::size_t n = 100000;
    std::uint64_t seed = 0;
    std::string out = "results";
    bool no_plot = false, timing = false;
};

int cmd_skew_sweep(const SweepFlags& f) {
    SkewSweepConfig c;
    c.taus = f.tau;
    c.rhos = f.rho;
    c.pi2s = f.pi2.empty() && f.rho.empty() ? pi2_defaults() : f.pi2;
    c.n = f.n;
    c.seed = f.seed;
    const auto rows = run_skew_sweep(c);
    const fs::path dir(f.out);
    emit_rows(dir / "skew_sweep.csv", rows, f.timing);
    if (!f.no_plot) {
        std::map<std::string, Series> diff, auc;
        for (const auto& r : rows) {
            double tau = 0.0, pi2 = 0.0;
            for (const auto& [k, v] : r.params) {
                if (k == "tau") tau = v;
                if (k == "pi2") pi2 = v;
            }
            const std::string key = r.method + " tau=" + format_double(tau);
            diff[key].name = key;
            diff[key].points.emplace_back(pi2, r.diff);
            for (std::size_t k = 0; k < r.auc.size(); ++k) {
                const std::string ak = key + " AUC" + std::to_string(k + 1);
                auc[ak].name = ak;
                auc[ak].points.emplace_back(pi2, r.auc[k]);
            }
        }
        auto collect = [](std::map<std::string, Series>& m) {
            std::vector<Series> v;
            for (auto& [_, s] : m) {
                std::ranges::sort(s.points);
                v.push_back(std::move(s));
            }
            return v;
        };
        write_svg(dir / "skew_sweep.svg", {"Diff AUC of Bayes scorers vs label-2 prior", "pi2", "|AUC1 - AUC2|"},
                  collect(diff));
        write_svg(dir / "skew_sweep_auc.svg", {"Per-label AUC of Bayes scorers", "pi2", "AUC"}, collect(auc));
    }
    return kExitOk;
}

struct TrainFlags {
    std::string data;
    std::vector<std::string> labels{"y0", "y1"};
    std::vector<std::string> objectives{"label1", "label2", "lossagg:1,1", "labelagg:absdiff"};
    std::string surrogate = "logistic", model = "linear", resample, optimizer = "adam";
    std::size_t epochs = 100, steps = 1, trials = 25;
    double lr = 0.01, test_fraction = 0.3;
    std::uint64_t seed = 0, pair_budget = std::uint64_t{1} << 20;
    std::string out = "results";
    bool timing = false;
};

int cmd_train(const TrainFlags& f) {
    TrainExperimentConfig c;
    c.objectives = f.objectives;
    c.surrogate = parse_surrogate(f.surrogate);
    c.model = parse_model(f.model);
    c.epochs = f.epochs;
    c.learning_rate = f.lr;
    c.steps_per_epoch = f.steps;
    c.pair_budget = f.pair_budget;
    c.seed = f.seed;
    c.trials = f.trials;
    c.test_fraction = f.test_fraction;
    if (f.optimizer != "adam") throw InvalidArgument("only the adam optimizer is exposed on the command line");
    if (!f.resample.empty()) {
        const auto colon = f.resample.find(':');
        if (colon == std::string::npos) throw InvalidArgument("--resample-pi expects label:pi");
        const double pi = std::stod(f.resample.substr(colon + 1));
        c.resample = std::pair{resolve_label(f.resample.substr(0, colon), f.labels), pi};
    }
    // Validate flags before touching the file.
    for (const auto& o : c.objectives) parse_objective(o, 2);
    const Dataset data = pick_labels(read_dataset(fs::path(f.data)), f.labels);
    emit_rows(fs::path(f.out) / "train.csv", run_train(data, c), f.timing);
    return kExitOk;
}

struct OracleFlags {
    std::size_t n = 20, P = 3;
    std::uint64_t seed = 0, budget = kDefaultHypothesisBudget;
    std::int64_t grid = 5;
    std::string out = "results";
    bool no_plot = false;
};

int cmd_oracle(const OracleFlags& f) {
    const Dataset data = gen_gaussian_bilevel(f.n, f.seed);
    const OracleOutcome res = run_oracle(data, f.P, f.grid, f.seed, f.budget);
    const fs::path dir(f.out);
    emit_rows(dir / "oracle.csv", res.rows, false);
    std::vector<std::vector<std::string>> scatter;
    Series all{"hypotheses", {}, false}, front{"Pareto front", {}, true};
    const auto& D = res.sets.denominators;
    for (const auto& p : res.sets.scatter) {
        const double a1 = static_cast<double>(p[0]) / (2.0 * static_cast<double>(D[0]));
        const double a2 = static_cast<double>(p[1]) / (2.0 * static_cast<double>(D[1]));
        const bool on = std::ranges::binary_search(res.sets.front, p);
        scatter.push_back({format_double(a1), format_double(a2), on ? "1" : "0"});
        all.points.emplace_back(a1, a2);
        if (on) front.points.emplace_back(a1, a2);
    }
    write_table(dir / "oracle_scatter.csv", {"auc1", "auc2", "on_front"}, scatter);
    if (!f.no_plot)
        write_svg(dir / "oracle_scatter.svg", {"Per-label AUC over the hypothesis space", "AUC1", "AUC2"},
                  {all, front});
    std::cout << "n=" << f.n << " P=" << f.P << " M=" << res.space.M() << " hypotheses=" << res.space.total()
              << "\n";
    for (const auto& [name, ok] : relation_lines(res.report)) std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
    return kExitOk;
}

struct BoundFlags {
    std::vector<std::size_t> K{2, 4, 8, 16};
    std::size_t n = 5, tables = 20;
    double c = 0.2;
    std::uint64_t seed = 0;
    std::string out = "results";
    bool no_plot = false;
};

int cmd_bound(const BoundFlags& f) {
    const auto rows = run_bound(f.K, f.n, f.c, f.seed, f.tables);
    const fs::path dir(f.out);
    std::vector<std::vector<std::string>> table;
    for (const auto& r : rows)
        table.push_back({std::to_string(r.K), std::to_string(r.table), format_double(r.argument),
                         format_double(r.bound), format_double(r.gap)});
    write_table(dir / "bound.csv", {"K", "table", "argument", "bound", "gap"}, table);
    std::cout << "wrote " << (dir / "bound.csv").string() << " (" << rows.size() << " rows)\n";
    if (!f.no_plot) {
        Series bound{"median bound", {}, true}, gap{"median gap", {}, true};
        for (std::size_t K : f.K) {
            std::vector<double> b, g;
            for (const auto& r : rows)
                if (r.K == K) b.push_back(r.bound), g.push_back(r.gap);
            std::ranges::sort(b);
            std::ranges::sort(g);
            bound.points.emplace_back(static_cast<double>(K), b[b.size() / 2]);
            gap.points.emplace_back(static_cast<double>(K), g[g.size() / 2]);
        }
        write_svg(dir / "bound.svg", {"Gap bound vs number of labels", "K", "value", true, true}, {bound, gap});
    }
    return kExitOk;
}

struct GenFlags {
    std::string kind = "sigmoid", out = "data.csv";
    std::size_t n = 1000;
    std::uint64_t seed = 0;
    double tau = 1.0, rho = 0.0;
    std::optional<double> tau2;
    std::vector<double> w1, w2;
};

int cmd_gen(const GenFlags& f) {
    Dataset data = [&] {
        if (f.kind == "gaussian") return gen_gaussian_bilevel(f.n, f.seed);
        if (f.kind == "d3") return gen_d3_training_pair(f.n, f.seed, f.tau);
        if (f.kind != "sigmoid") throw InvalidArgument("unknown dataset kind '" + f.kind + "'");
        SigmoidSynthConfig c;
        c.n = f.n;
        c.tau = f.tau;
        c.tau2 = f.tau2;
        c.rho = f.rho;
        c.seed = f.seed;
        if (!f.w1.empty()) {
            if (f.w1.size() != 2) throw InvalidArgument("--w1 needs two values");
            c.w1 = {f.w1[0], f.w1[1]};
        }
        if (!f.w2.empty()) {
            if (f.w2.size() != 2) throw InvalidArgument("--w2 needs two values");
            c.w2 = {f.w2[0], f.w2[1]};
        }
        return gen_sigmoid_pair(c);
    }();
    write_dataset(fs::path(f.out), data);
    std::cout << "wrote " << f.out << " (" << data.n() << " rows)\n";
    return kExitOk;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::FileError::Missing(path);
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw CLI::ConversionError(path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        if (key.rfind("--", 0) == 0) key = key.substr(2);
        out.emplace_back(key, trim(line.substr(eq + 1)));
    }
    return out;
}

int run_cli(std::vector<std::string> args) {
    CLI::App app{"Bipartite ranking from multiple binary labels: sweeps, training, oracle and bound experiments"};
    app.name("rankagg");
    app.require_subcommand(1);
    app.footer("Every subcommand accepts --config FILE with key=value lines; command-line flags take precedence.");

    SweepFlags sweep;
    auto* s = app.add_subcommand("skew-sweep", "Diff AUC of the Bayes scorers as label 2 becomes skewed");
    s->add_option("--tau", sweep.tau, "Sigmoid scales")->delimiter(',');
    auto* rho = s->add_option("--rho", sweep.rho, "Label-2 shifts")->delimiter(',');
    s->add_option("--pi2", sweep.pi2, "Target label-2 priors, solved by bisection over rho")
        ->delimiter(',')
        ->excludes(rho);
    s->add_option("--n", sweep.n, "Evaluation samples per point");
    s->add_option("--seed", sweep.seed);
    s->add_option("--out", sweep.out, "Output directory");
    s->add_flag("--no-plot", sweep.no_plot);
    s->add_flag("--timing", sweep.timing, "Add a runtime_ms column (not reproducible)");

    TrainFlags train_f;
    auto* t = app.add_subcommand("train", "Train scorers per objective over seeded trials");
    t->add_option("--data", train_f.data, "Dataset CSV")->required();
    t->add_option("--labels", train_f.labels, "Two label columns")->delimiter(',');
    t->add_option("--objective", train_f.objectives,
                  "label1|label2|lossagg:a1,a2|labelagg:uniform|labelagg:absdiff (repeatable)");
    t->add_option("--surrogate", train_f.surrogate)->check(CLI::IsMember({"logistic", "hinge"}));
    t->add_option("--model", train_f.model, "linear or mlp:h1,h2,...");
    t->add_option("--epochs", train_f.epochs);
    t->add_option("--steps-per-epoch", train_f.steps);
    t->add_option("--lr", train_f.lr);
    t->add_option("--pair-budget", train_f.pair_budget, "Pairs per step before subsampling");
    t->add_option("--seed", train_f.seed);
    t->add_option("--resample-pi", train_f.resample, "label:pi, label given as column name or 1-based position");
    t->add_option("--trials", train_f.trials);
    t->add_option("--test-fraction", train_f.test_fraction);
    t->add_option("--out", train_f.out, "Output directory");
    t->add_flag("--timing", train_f.timing, "Add a runtime_ms column (not reproducible)");

    OracleFlags oracle_f;
    auto* o = app.add_subcommand("oracle", "Exhaustive maximizer sets on thresholded Gaussian data");
    o->add_option("--n", oracle_f.n);
    o->add_option("--P", oracle_f.P, "Image size of the hypothesis class");
    o->add_option("--seed", oracle_f.seed);
    o->add_option("--weights-grid", oracle_f.grid, "Loss-agg weights range over {1..max}^2");
    o->add_option("--budget", oracle_f.budget, "Maximum number of hypotheses");
    o->add_option("--out", oracle_f.out, "Output directory");
    o->add_flag("--no-plot", oracle_f.no_plot);

    BoundFlags bound_f;
    auto* b = app.add_subcommand("bound", "Measured label-agg gap against its normal-approximation bound");
    b->add_option("--K", bound_f.K, "Label counts")->delimiter(',');
    b->add_option("--n", bound_f.n, "Instances per table (at most 8)");
    b->add_option("--c", bound_f.c, "eta entries are uniform on [c, 1-c]");
    b->add_option("--tables", bound_f.tables, "Random tables per K");
    b->add_option("--seed", bound_f.seed);
    b->add_option("--out", bound_f.out, "Output directory");
    b->add_flag("--no-plot", bound_f.no_plot);

    GenFlags gen_f;
    auto* g = app.add_subcommand("gen", "Write a synthetic dataset as CSV");
    g->add_option("--kind", gen_f.kind)->check(CLI::IsMember({"sigmoid", "gaussian", "d3"}));
    g->add_option("--n", gen_f.n);
    g->add_option("--seed", gen_f.seed);
    g->add_option("--tau", gen_f.tau);
    g->add_option("--tau2", gen_f.tau2, "Scale of label 2 (sigmoid only)");
    g->add_option("--rho", gen_f.rho);
    g->add_option("--w1", gen_f.w1)->delimiter(',');
    g->add_option("--w2", gen_f.w2)->delimiter(',');
    g->add_option("--out", gen_f.out, "Output CSV");

    try {
        args = apply_config(std::move(args));
        std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitFlags;
    }

    try {
        if (*s) return cmd_skew_sweep(sweep);
        if (*t) return cmd_train(train_f);
        if (*o) return cmd_oracle(oracle_f);
        if (*b) return cmd_bound(bound_f);
        if (*g) return cmd_gen(gen_f);
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const TooLarge& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const InvalidArgument& e) {
        std::cerr << "flag error: " << e.what() << "\n";
        return kExitFlags;
    } catch (const Error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "flag error: " << e.what() << "\n";
        return kExitFlags;
    }
    return kExitFlags;
}

}  // namespace rankagg::cli
