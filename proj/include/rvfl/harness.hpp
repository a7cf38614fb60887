#pragma once

// Ablation runner: for every (strategy, configuration, trial) draw a training
// set, grid-search the hyperparameters against a noise-free validation set,
// retrain the winner and score it on a noise-free test set. Cells aggregate
// the trials and are compared against the -dl-b configuration of the same
// strategy with a paired Wilcoxon signed-rank test.

#include "rvfl/model.hpp"
#include "rvfl/rng.hpp"
#include "rvfl/stats.hpp"
#include "rvfl/synthdata.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rvfl {

struct GridSpec {
    std::vector<std::size_t> m_values;
    std::vector<double> u_values;
    std::vector<double> alpha_min_values;
    // alpha_max runs over alpha_min + step, alpha_min + 2 step, ... up to 90.
    double alpha_step = 15.0;

    /// Full grids: m in {1..10, 20..100, 200..1000}; u in {1..10, 20, 50, 100}
    /// for n = 2 and {0.1..1, 2..5} otherwise; alpha_min in {0, 15, ..., 75}.
    static GridSpec paper(std::size_t n);
    /// Same u/alpha grids, m in {1..10, 20, 50, 100, 200, 500}.
    static GridSpec desk(std::size_t n);

    std::vector<std::pair<double, double>> alpha_ranges() const;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct ExperimentConfig {
    TargetFunction target = TargetFunction::NL;
    std::size_t n = 2;
    std::size_t n_train = 2000;
    std::size_t n_test = 10000;
    std::size_t trials = 30;
    double noise_sigma = 0.05;
    std::vector<Configuration> configurations{
        {true, true}, {true, false}, {false, true}, {false, false}};
    std::vector<StrategyKind> strategies{StrategyKind::Gs, StrategyKind::Gu,
                                         StrategyKind::GAlpha};
    GridSpec grid = GridSpec::desk(2);
    std::uint64_t master_seed = 42;
    std::size_t parallelism = 1;  // never affects results
    double significance_level = 0.05;
    bool record_timing = false;  // wall times in the JSON break byte-identical reruns

    /// Desk-scale defaults for a target and input dimension.
    static ExperimentConfig desk(TargetFunction target, std::size_t n);

    /// 100 trials, training-set size of the original study for n = 2/5/10,
    /// full m grid.
    void apply_paper_scale();

    /// Throws InvalidParameter on any inconsistent field.
    void validate() const;

    /// Compares everything that can change results (parallelism excluded).
    friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);
};

/// Errors in a config file; the message carries source, line and field.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Parses a TOML experiment description. Missing keys take desk defaults
/// (grids follow `n`); unknown keys are errors.
ExperimentConfig parse_config(std::string_view toml_text, std::string_view source_name = "config");
ExperimentConfig load_config(const std::string& path);

/// Hidden-parameter settings of one strategy in grid order.
std::vector<InitStrategy> strategy_settings(const GridSpec& grid, StrategyKind kind);

struct Hyperparameters {
    std::size_t m = 1;
    InitStrategy init;

    friend bool operator==(const Hyperparameters&, const Hyperparameters&) = default;
};

/// Validation score of one grid cell.
struct GridCellScore {
    Hyperparameters params;
    std::size_t setting_index = 0;  // position in strategy_settings()
    double validation_rmse = 0.0;
};

/// Minimal validation RMSE; ties go to smaller m, then smaller u (Gs/Gu) or
/// larger alpha_min and then smaller alpha_max (Galpha).
const GridCellScore& select_best(const std::vector<GridCellScore>& cells);

struct TrialData {
    Dataset train;
    Dataset validation;
    Dataset test;
};

/// Per-trial datasets, shared by every (strategy, configuration) of a trial.
TrialData make_trial_data(const ExperimentConfig& config, std::size_t trial_index);

/// Stream that seeds the hidden layer for one grid setting.
RngStream init_stream(const ExperimentConfig& config, Configuration configuration,
                      StrategyKind strategy, std::size_t trial_index, std::size_t setting_index);

struct GridSearchResult {
    GridCellScore best;
    std::vector<GridCellScore> cells;  // every scored cell
    std::size_t failed_settings = 0;
};

/// Scores every (setting, m) cell. One hidden layer with max(m) nodes is
/// drawn per setting; smaller m use its leading nodes, so a single
/// factorization of the design serves the whole m axis.
GridSearchResult grid_search(const ExperimentConfig& config, Configuration configuration,
                             StrategyKind strategy, std::size_t trial_index,
                             const Dataset& train, const Dataset& validation);

struct TrialResult {
    Configuration configuration;
    StrategyKind strategy = StrategyKind::Gs;
    std::size_t trial = 0;
    bool failed = false;
    std::string error;
    Hyperparameters chosen;
    double validation_rmse = 0.0;
    double test_rmse = 0.0;
    double wall_seconds = 0.0;

    friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

TrialResult run_trial(const ExperimentConfig& config, Configuration configuration,
                      StrategyKind strategy, std::size_t trial_index);

struct CellResult {
    StrategyKind strategy = StrategyKind::Gs;
    Configuration configuration;
    std::optional<AggregateResult> test_rmse;  // empty when every trial failed
    std::optional<AggregateResult> chosen_m;
    std::size_t trials = 0;
    std::size_t failed = 0;
    bool incomplete = false;  // more than 10% of trials failed
    bool baseline = false;    // the -dl-b cell of its strategy
    bool significant = false;
    std::optional<double> p_value;  // vs baseline, absent for the baseline itself

    friend bool operator==(const CellResult&, const CellResult&) = default;
};

struct ExperimentResults {
    ExperimentConfig config;
    std::vector<TrialResult> trials;  // sorted by (strategy, configuration, trial)
    std::vector<CellResult> cells;    // sorted by (strategy, configuration)

    const CellResult& cell(StrategyKind s, Configuration c) const;
    /// Test RMSEs of one cell in trial order (failed trials skipped).
    std::vector<double> test_rmses(StrategyKind s, Configuration c) const;

    friend bool operator==(const ExperimentResults&, const ExperimentResults&) = default;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

ExperimentResults run_experiment(const ExperimentConfig& config, const ProgressFn& progress = {});

/// Aggregation and significance flags from finished trials.
std::vector<CellResult> summarize(const ExperimentConfig& config,
                                  const std::vector<TrialResult>& trials);

enum class TableFormat { Csv, Markdown, Json };

TableFormat parse_table_format(std::string_view text);

std::string emit_table(const ExperimentResults& results, TableFormat format);

std::string results_to_json(const ExperimentResults& results);
ExperimentResults results_from_json(std::string_view text);

}  // namespace rvfl
