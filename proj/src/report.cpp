#include "rvfl/errors.hpp"
#include "rvfl/harness.hpp"

#include <json.hpp>

#include <cstdio>
#include <sstream>

namespace rvfl {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

TableFormat parse_table_format(std::string_view text) {
    if (text == "csv") return TableFormat::Csv;
    if (text == "markdown" || text == "md") return TableFormat::Markdown;
    if (text == "json") return TableFormat::Json;
    throw InvalidParameter("unknown table format '" + std::string(text) +
                           "' (expected csv, markdown or json)");
}

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string fixed(double v, int digits) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string shortest(double v) { return json(v).dump(); }

// ---- JSON ----------------------------------------------------------------

ordered_json hyper_json(const Hyperparameters& h) {
    ordered_json j;
    j["m"] = h.m;
    j["strategy"] = std::string(to_string(kind_of(h.init)));
    if (const auto* s = std::get_if<StandardInit>(&h.init)) j["u"] = s->u;
    if (const auto* s = std::get_if<AnchoredInit>(&h.init)) j["u"] = s->u;
    if (const auto* s = std::get_if<SlopeAngleInit>(&h.init)) {
        j["alpha_min_deg"] = s->alpha_min_deg;
        j["alpha_max_deg"] = s->alpha_max_deg;
    }
    return j;
}

Hyperparameters hyper_from(const json& j) {
    Hyperparameters h;
    h.m = j.at("m").get<std::size_t>();
    switch (parse_strategy_kind(j.at("strategy").get<std::string>())) {
        case StrategyKind::Gs: h.init = StandardInit{j.at("u").get<double>()}; break;
        case StrategyKind::Gu: h.init = AnchoredInit{j.at("u").get<double>()}; break;
        case StrategyKind::GAlpha:
            h.init = SlopeAngleInit{j.at("alpha_min_deg").get<double>(),
                                    j.at("alpha_max_deg").get<double>()};
            break;
    }
    return h;
}

ordered_json aggregate_json(const std::optional<AggregateResult>& a) {
    if (!a) return nullptr;
    ordered_json j;
    j["mean"] = a->mean;
    j["std"] = a->std;
    j["count"] = a->count;
    return j;
}

std::optional<AggregateResult> aggregate_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    return AggregateResult{j.at("mean").get<double>(), j.at("std").get<double>(),
                           j.at("count").get<std::size_t>()};
}

ordered_json config_json(const ExperimentConfig& c) {
    ordered_json j;
    j["target"] = std::string(to_string(c.target));
    j["n"] = c.n;
    j["n_train"] = c.n_train;
    j["n_test"] = c.n_test;
    j["trials"] = c.trials;
    j["noise_sigma"] = c.noise_sigma;
    std::vector<std::string> confs;
    for (Configuration x : c.configurations) confs.push_back(to_string(x));
    j["configurations"] = confs;
    std::vector<std::string> strats;
    for (StrategyKind k : c.strategies) strats.emplace_back(to_string(k));
    j["strategies"] = strats;
    j["grid"] = {{"m_values", c.grid.m_values},
                 {"u_values", c.grid.u_values},
                 {"alpha_min_values", c.grid.alpha_min_values},
                 {"alpha_step", c.grid.alpha_step}};
    j["master_seed"] = c.master_seed;
    j["significance_level"] = c.significance_level;
    j["record_timing"] = c.record_timing;
    return j;
}

ExperimentConfig config_from(const json& j) {
    ExperimentConfig c;
    c.target = parse_target(j.at("target").get<std::string>());
    c.n = j.at("n").get<std::size_t>();
    c.n_train = j.at("n_train").get<std::size_t>();
    c.n_test = j.at("n_test").get<std::size_t>();
    c.trials = j.at("trials").get<std::size_t>();
    c.noise_sigma = j.at("noise_sigma").get<double>();
    c.configurations.clear();
    for (const auto& s : j.at("configurations")) {
        c.configurations.push_back(parse_configuration(s.get<std::string>()));
    }
    c.strategies.clear();
    for (const auto& s : j.at("strategies")) {
        c.strategies.push_back(parse_strategy_kind(s.get<std::string>()));
    }
    const json& g = j.at("grid");
    c.grid.m_values = g.at("m_values").get<std::vector<std::size_t>>();
    c.grid.u_values = g.at("u_values").get<std::vector<double>>();
    c.grid.alpha_min_values = g.at("alpha_min_values").get<std::vector<double>>();
    c.grid.alpha_step = g.at("alpha_step").get<double>();
    c.master_seed = j.at("master_seed").get<std::uint64_t>();
    c.significance_level = j.at("significance_level").get<double>();
    c.record_timing = j.at("record_timing").get<bool>();
    return c;
}

// ---- text tables ---------------------------------------------------------

std::string csv_table(const ExperimentResults& r) {
    std::ostringstream os;
    os << "strategy,configuration,rmse_mean,rmse_std,significant,p_value,mean_m,std_m,trials,"
          "failed,incomplete\n";
    for (const CellResult& c : r.cells) {
        os << to_string(c.strategy) << ',' << to_string(c.configuration) << ',';
        if (c.test_rmse) {
            os << shortest(c.test_rmse->mean) << ',' << shortest(c.test_rmse->std) << ',';
        } else {
            os << ",,";
        }
        os << (c.significant ? 1 : 0) << ',';
        if (c.p_value) os << shortest(*c.p_value);
        os << ',';
        if (c.chosen_m) {
            os << shortest(c.chosen_m->mean) << ',' << shortest(c.chosen_m->std);
        } else {
            os << ',';
        }
        os << ',' << c.trials << ',' << c.failed << ',' << (c.incomplete ? 1 : 0) << '\n';
    }
    return os.str();
}

std::string markdown_table(const ExperimentResults& r) {
    std::ostringstream os;
    const ExperimentConfig& cfg = r.config;
    os << "### RMSE for " << to_string(cfg.target) << " (n = " << cfg.n
       << ", N = " << cfg.n_train << ", " << cfg.trials << " trials, noise sigma = "
       << shortest(cfg.noise_sigma) << ")\n\n";
    os << "| Strategy | Variant | RMSE | mean m | p vs -dl-b |\n";
    os << "|---|---|---|---|---|\n";
    StrategyKind current{};
    bool first = true;
    for (const CellResult& c : r.cells) {
        const bool new_group = first || c.strategy != current;
        first = false;
        current = c.strategy;
        os << "| " << (new_group ? std::string(to_string(c.strategy)) : std::string()) << " | "
           << to_string(c.configuration) << " | ";
        if (c.test_rmse) {
            const std::string mean = sci(c.test_rmse->mean);
            os << (c.significant ? "<u>" + mean + "</u>" : mean) << " ± "
               << sci(c.test_rmse->std);
        } else {
            os << "failed";
        }
        if (c.incomplete) os << " (incomplete)";
        os << " | " << (c.chosen_m ? fixed(c.chosen_m->mean, 2) : std::string("-")) << " | "
           << (c.p_value ? fixed(*c.p_value, 4) : std::string("-")) << " |\n";
    }
    os << "\nUnderlined means are significantly lower than -dl-b of the same strategy "
          "(two-sided Wilcoxon signed-rank, level "
       << shortest(cfg.significance_level) << ").\n";
    return os.str();
}

}  // namespace

std::string results_to_json(const ExperimentResults& r) {
    ordered_json j;
    j["config"] = config_json(r.config);
    ordered_json trials = ordered_json::array();
    for (const TrialResult& t : r.trials) {
        ordered_json tj;
        tj["strategy"] = std::string(to_string(t.strategy));
        tj["configuration"] = to_string(t.configuration);
        tj["trial"] = t.trial;
        tj["failed"] = t.failed;
        if (t.failed) {
            tj["error"] = t.error;
        } else {
            tj["chosen"] = hyper_json(t.chosen);
            tj["validation_rmse"] = t.validation_rmse;
            tj["test_rmse"] = t.test_rmse;
        }
        if (r.config.record_timing) tj["wall_seconds"] = t.wall_seconds;
        trials.push_back(std::move(tj));
    }
    j["trials"] = std::move(trials);
    ordered_json cells = ordered_json::array();
    for (const CellResult& c : r.cells) {
        ordered_json cj;
        cj["strategy"] = std::string(to_string(c.strategy));
        cj["configuration"] = to_string(c.configuration);
        cj["test_rmse"] = aggregate_json(c.test_rmse);
        cj["chosen_m"] = aggregate_json(c.chosen_m);
        cj["trials"] = c.trials;
        cj["failed"] = c.failed;
        cj["incomplete"] = c.incomplete;
        cj["baseline"] = c.baseline;
        cj["significant"] = c.significant;
        cj["p_value"] = c.p_value ? ordered_json(*c.p_value) : ordered_json(nullptr);
        cells.push_back(std::move(cj));
    }
    j["cells"] = std::move(cells);
    return j.dump(2) + "\n";
}

ExperimentResults results_from_json(std::string_view text) {
    try {
        const json j = json::parse(text);
        ExperimentResults r;
        r.config = config_from(j.at("config"));
        for (const json& tj : j.at("trials")) {
            TrialResult t;
            t.strategy = parse_strategy_kind(tj.at("strategy").get<std::string>());
            t.configuration = parse_configuration(tj.at("configuration").get<std::string>());
            t.trial = tj.at("trial").get<std::size_t>();
            t.failed = tj.at("failed").get<bool>();
            if (t.failed) {
                t.error = tj.at("error").get<std::string>();
            } else {
                t.chosen = hyper_from(tj.at("chosen"));
                t.validation_rmse = tj.at("validation_rmse").get<double>();
                t.test_rmse = tj.at("test_rmse").get<double>();
            }
            if (tj.contains("wall_seconds")) t.wall_seconds = tj.at("wall_seconds").get<double>();
            r.trials.push_back(std::move(t));
        }
        for (const json& cj : j.at("cells")) {
            CellResult c;
            c.strategy = parse_strategy_kind(cj.at("strategy").get<std::string>());
            c.configuration = parse_configuration(cj.at("configuration").get<std::string>());
            c.test_rmse = aggregate_from(cj.at("test_rmse"));
            c.chosen_m = aggregate_from(cj.at("chosen_m"));
            c.trials = cj.at("trials").get<std::size_t>();
            c.failed = cj.at("failed").get<std::size_t>();
            c.incomplete = cj.at("incomplete").get<bool>();
            c.baseline = cj.at("baseline").get<bool>();
            c.significant = cj.at("significant").get<bool>();
            if (!cj.at("p_value").is_null()) c.p_value = cj.at("p_value").get<double>();
            r.cells.push_back(std::move(c));
        }
        return r;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("results JSON: ") + e.what());
    }
}

std::string emit_table(const ExperimentResults& results, TableFormat format) {
    if (results.cells.empty()) throw InvalidInput("emit_table: no results");
    switch (format) {
        case TableFormat::Csv: return csv_table(results);
        case TableFormat::Markdown: return markdown_table(results);
        case TableFormat::Json: return results_to_json(results);
    }
    throw InvalidParameter("emit_table: unknown format");
}

}  // namespace rvfl
