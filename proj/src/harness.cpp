#include "rvfl/harness.hpp"

#include "rvfl/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>
#include <tuple>

namespace rvfl {

// ---------------------------------------------------------------------------
// Grids and config

GridSpec GridSpec::paper(std::size_t n) {
    GridSpec g;
    for (std::size_t m = 1; m <= 10; ++m) g.m_values.push_back(m);
    for (std::size_t m = 20; m <= 100; m += 10) g.m_values.push_back(m);
    for (std::size_t m = 200; m <= 1000; m += 100) g.m_values.push_back(m);
    if (n == 2) {
        for (int u = 1; u <= 10; ++u) g.u_values.push_back(u);
        g.u_values.insert(g.u_values.end(), {20.0, 50.0, 100.0});
    } else {
        for (int k = 1; k <= 10; ++k) g.u_values.push_back(k / 10.0);
        g.u_values.insert(g.u_values.end(), {2.0, 3.0, 4.0, 5.0});
    }
    g.alpha_min_values = {0.0, 15.0, 30.0, 45.0, 60.0, 75.0};
    g.alpha_step = 15.0;
    return g;
}

GridSpec GridSpec::desk(std::size_t n) {
    GridSpec g = paper(n);
    g.m_values = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 20, 50, 100, 200, 500};
    return g;
}

std::vector<std::pair<double, double>> GridSpec::alpha_ranges() const {
    std::vector<std::pair<double, double>> out;
    for (double lo : alpha_min_values) {
        for (int k = 1;; ++k) {
            const double hi = lo + k * alpha_step;
            if (hi > 90.0 + 1e-9) break;
            out.emplace_back(lo, std::min(hi, 90.0));
        }
    }
    return out;
}

ExperimentConfig ExperimentConfig::desk(TargetFunction target, std::size_t n) {
    ExperimentConfig c;
    c.target = target;
    c.n = n;
    c.grid = GridSpec::desk(n);
    return c;
}

void ExperimentConfig::apply_paper_scale() {
    trials = 100;
    if (n == 2) n_train = 5000;
    if (n == 5) n_train = 20000;
    if (n == 10) n_train = 50000;
    grid.m_values = GridSpec::paper(n).m_values;
}

void ExperimentConfig::validate() const {
    if (n < 1) throw InvalidParameter("n must be >= 1");
    if (n_train < 1) throw InvalidParameter("n_train must be >= 1");
    if (n_test < 1) throw InvalidParameter("n_test must be >= 1");
    if (trials < 1) throw InvalidParameter("trials must be >= 1");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
        throw InvalidParameter("noise_sigma must be finite and >= 0");
    }
    if (configurations.empty()) throw InvalidParameter("at least one configuration is required");
    if (strategies.empty()) throw InvalidParameter("at least one strategy is required");
    if (parallelism < 1) throw InvalidParameter("parallelism must be >= 1");
    if (!(significance_level > 0.0 && significance_level < 1.0)) {
        throw InvalidParameter("significance_level must lie in (0, 1)");
    }
    if (grid.m_values.empty()) throw InvalidParameter("grid.m_values is empty");
    for (std::size_t m : grid.m_values) {
        if (m < 1) throw InvalidParameter("grid.m_values entries must be >= 1");
    }
    for (StrategyKind k : strategies) {
        if (k == StrategyKind::GAlpha) {
            if (!(grid.alpha_step > 0.0)) throw InvalidParameter("grid.alpha_step must be > 0");
            for (double a : grid.alpha_min_values) {
                if (!(a >= 0.0 && a < 90.0)) {
                    throw InvalidParameter("grid.alpha_min_values entries must lie in [0, 90)");
                }
            }
            if (grid.alpha_ranges().empty()) {
                throw InvalidParameter("grid yields no slope-angle ranges");
            }
        } else {
            if (grid.u_values.empty()) throw InvalidParameter("grid.u_values is empty");
            for (double u : grid.u_values) {
                if (!(u > 0.0)) throw InvalidParameter("grid.u_values entries must be > 0");
            }
        }
    }
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return std::tie(a.target, a.n, a.n_train, a.n_test, a.trials, a.noise_sigma,
                    a.configurations, a.strategies, a.grid, a.master_seed,
                    a.significance_level, a.record_timing) ==
           std::tie(b.target, b.n, b.n_train, b.n_test, b.trials, b.noise_sigma,
                    b.configurations, b.strategies, b.grid, b.master_seed,
                    b.significance_level, b.record_timing);
}

// ---------------------------------------------------------------------------
// Grid search

std::vector<InitStrategy> strategy_settings(const GridSpec& grid, StrategyKind kind) {
    std::vector<InitStrategy> out;
    switch (kind) {
        case StrategyKind::Gs:
            for (double u : grid.u_values) out.emplace_back(StandardInit{u});
            break;
        case StrategyKind::Gu:
            for (double u : grid.u_values) out.emplace_back(AnchoredInit{u});
            break;
        case StrategyKind::GAlpha:
            for (auto [lo, hi] : grid.alpha_ranges()) out.emplace_back(SlopeAngleInit{lo, hi});
            break;
    }
    return out;
}

namespace {

// Lexicographic preference key among equally scored cells; smaller wins.
std::tuple<std::size_t, double, double> simplicity(const Hyperparameters& h) {
    if (const auto* s = std::get_if<StandardInit>(&h.init)) return {h.m, s->u, 0.0};
    if (const auto* s = std::get_if<AnchoredInit>(&h.init)) return {h.m, s->u, 0.0};
    const auto& s = std::get<SlopeAngleInit>(h.init);
    return {h.m, -s.alpha_min_deg, s.alpha_max_deg};
}

std::size_t configuration_code(Configuration c) {
    return (c.direct_links ? 2 : 0) + (c.output_bias ? 1 : 0);
}

RngStream trial_root(const ExperimentConfig& config, std::size_t trial_index) {
    return RngStream(config.master_seed).child("trial", trial_index);
}

}  // namespace

const GridCellScore& select_best(const std::vector<GridCellScore>& cells) {
    if (cells.empty()) throw InvalidInput("select_best: no scored cells");
    const GridCellScore* best = &cells.front();
    for (const GridCellScore& c : cells) {
        if (c.validation_rmse < best->validation_rmse ||
            (c.validation_rmse == best->validation_rmse &&
             simplicity(c.params) < simplicity(best->params))) {
            best = &c;
        }
    }
    return *best;
}

TrialData make_trial_data(const ExperimentConfig& config, std::size_t trial_index) {
    const RngStream root = trial_root(config, trial_index);
    return {sample_dataset(config.target, config.n, config.n_train, config.noise_sigma,
                           root.child("train")),
            make_test_set(config.target, config.n, config.n_test, root.child("validation")),
            make_test_set(config.target, config.n, config.n_test, root.child("test"))};
}

RngStream init_stream(const ExperimentConfig& config, Configuration configuration,
                      StrategyKind strategy, std::size_t trial_index, std::size_t setting_index) {
    return trial_root(config, trial_index)
        .child("init")
        .child("strategy", static_cast<std::uint64_t>(strategy))
        .child("configuration", configuration_code(configuration))
        .child("setting", setting_index);
}

GridSearchResult grid_search(const ExperimentConfig& config, Configuration configuration,
                             StrategyKind strategy, std::size_t trial_index,
                             const Dataset& train, const Dataset& validation) {
    std::vector<std::size_t> ms = config.grid.m_values;
    if (ms.empty()) throw InvalidParameter("grid search needs at least one m value");
    std::sort(ms.begin(), ms.end());
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
    const std::size_t m_max = ms.back();
    const Topology widest(config.n, m_max, configuration);
    const std::size_t fixed_cols = widest.width() - m_max;

    const std::vector<InitStrategy> settings = strategy_settings(config.grid, strategy);
    if (settings.empty()) throw InvalidParameter("grid search needs at least one setting");

    GridSearchResult result;
    for (std::size_t s = 0; s < settings.size(); ++s) {
        try {
            Rng rng = init_stream(config, configuration, strategy, trial_index, s).engine();
            const HiddenLayer hidden = init_hidden(widest, settings[s], train.x, rng);
            const NestedLeastSquares solver(
                assemble_design(widest, train.x, hidden_output(hidden, train.x)), train.y);
            const Matrix val_fixed = assemble_design(
                Topology(config.n, 0, configuration), validation.x, Matrix(validation.x.rows(), 0));
            const Matrix val_hidden = hidden_output(hidden, validation.x);
            const auto f = static_cast<Eigen::Index>(fixed_cols);
            for (std::size_t m : ms) {
                const auto mm = static_cast<Eigen::Index>(m);
                const Vector beta = solver.solve(fixed_cols + m);
                Vector pred = val_hidden.leftCols(mm) * beta.tail(mm);
                if (f > 0) pred += val_fixed * beta.head(f);
                const double score = rmse(pred, validation.y);
                if (!std::isfinite(score)) throw NumericFailure("non-finite validation score");
                result.cells.push_back({{m, settings[s]}, s, score});
            }
        } catch (const NumericFailure&) {
            ++result.failed_settings;
        }
    }
    if (result.cells.empty()) {
        throw NumericFailure("every grid cell failed numerically");
    }
    result.best = select_best(result.cells);
    return result;
}

// ---------------------------------------------------------------------------
// Trials and experiments

TrialResult run_trial(const ExperimentConfig& config, Configuration configuration,
                      StrategyKind strategy, std::size_t trial_index) {
    const auto start = std::chrono::steady_clock::now();
    TrialResult r;
    r.configuration = configuration;
    r.strategy = strategy;
    r.trial = trial_index;
    try {
        const TrialData data = make_trial_data(config, trial_index);
        const GridSearchResult search =
            grid_search(config, configuration, strategy, trial_index, data.train, data.validation);
        r.chosen = search.best.params;
        r.validation_rmse = search.best.validation_rmse;

        // Same stream as the winning setting: the retrained hidden layer is
        // the leading m nodes of the one that was scored.
        Rng rng = init_stream(config, configuration, strategy, trial_index,
                              search.best.setting_index)
                      .engine();
        const TrainedModel model =
            train(Topology(config.n, r.chosen.m, configuration), r.chosen.init, data.train, rng);
        r.test_rmse = rmse(predict(model, data.test.x), data.test.y);
        if (!std::isfinite(r.test_rmse)) throw NumericFailure("non-finite test RMSE");
    } catch (const NumericFailure& e) {
        r.failed = true;
        r.error = e.what();
        r.test_rmse = 0.0;
    }
    r.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<CellResult> summarize(const ExperimentConfig& config,
                                  const std::vector<TrialResult>& trials) {
    constexpr Configuration kBaseline{false, false};
    std::vector<CellResult> cells;
    for (StrategyKind s : config.strategies) {
        auto trials_of = [&](Configuration c) {
            std::vector<const TrialResult*> out;
            for (const TrialResult& t : trials) {
                if (t.strategy == s && t.configuration == c) out.push_back(&t);
            }
            std::sort(out.begin(), out.end(),
                      [](const TrialResult* a, const TrialResult* b) { return a->trial < b->trial; });
            return out;
        };
        const bool has_baseline =
            std::find(config.configurations.begin(), config.configurations.end(), kBaseline) !=
            config.configurations.end();
        const auto baseline_trials = trials_of(kBaseline);

        for (Configuration c : config.configurations) {
            CellResult cell;
            cell.strategy = s;
            cell.configuration = c;
            cell.baseline = c == kBaseline;
            const auto mine = trials_of(c);
            cell.trials = mine.size();
            std::vector<double> rmses;
            std::vector<double> ms;
            for (const TrialResult* t : mine) {
                if (t->failed) {
                    ++cell.failed;
                    continue;
                }
                rmses.push_back(t->test_rmse);
                ms.push_back(static_cast<double>(t->chosen.m));
            }
            cell.incomplete = cell.failed * 10 > cell.trials;
            if (!rmses.empty()) {
                cell.test_rmse = aggregate(rmses);
                cell.chosen_m = aggregate(ms);
            }

            if (has_baseline && !cell.baseline) {
                // Pair by trial index over trials where both succeeded.
                std::vector<double> base;
                std::vector<double> variant;
                for (const TrialResult* t : mine) {
                    for (const TrialResult* b : baseline_trials) {
                        if (b->trial == t->trial && !b->failed && !t->failed) {
                            base.push_back(b->test_rmse);
                            variant.push_back(t->test_rmse);
                        }
                    }
                }
                if (!base.empty()) {
                    const auto flags =
                        significance_flags(base, {{"v", variant}}, config.significance_level);
                    cell.p_value = flags.at("v").p_value;
                    cell.significant = flags.at("v").significant;
                }
            }
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

ExperimentResults run_experiment(const ExperimentConfig& config, const ProgressFn& progress) {
    config.validate();

    struct Unit {
        StrategyKind strategy;
        Configuration configuration;
        std::size_t trial;
    };
    std::vector<Unit> units;
    for (StrategyKind s : config.strategies) {
        for (Configuration c : config.configurations) {
            for (std::size_t t = 0; t < config.trials; ++t) units.push_back({s, c, t});
        }
    }

    std::vector<TrialResult> results(units.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < units.size(); i = next++) {
            const Unit& u = units[i];
            results[i] = run_trial(config, u.configuration, u.strategy, u.trial);
            if (!config.record_timing) results[i].wall_seconds = 0.0;
            const std::size_t finished = ++done;
            if (progress) {
                std::lock_guard lock(progress_mutex);
                progress(finished, units.size());
            }
        }
    };
    const std::size_t threads = std::min(config.parallelism, units.size());
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    }

    ExperimentResults out;
    out.config = config;
    out.trials = std::move(results);
    out.cells = summarize(config, out.trials);
    return out;
}

const CellResult& ExperimentResults::cell(StrategyKind s, Configuration c) const {
    for (const CellResult& cell : cells) {
        if (cell.strategy == s && cell.configuration == c) return cell;
    }
    throw InvalidInput("no cell for " + std::string(to_string(s)) + " " + to_string(c));
}

std::vector<double> ExperimentResults::test_rmses(StrategyKind s, Configuration c) const {
    std::vector<const TrialResult*> mine;
    for (const TrialResult& t : trials) {
        if (t.strategy == s && t.configuration == c && !t.failed) mine.push_back(&t);
    }
    std::sort(mine.begin(), mine.end(),
              [](const TrialResult* a, const TrialResult* b) { return a->trial < b->trial; });
    std::vector<double> out;
    for (const TrialResult* t : mine) out.push_back(t->test_rmse);
    return out;
}

}  // namespace rvfl
