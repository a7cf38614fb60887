#include "rvfl/cli.hpp"

#include "rvfl/errors.hpp"
#include "rvfl/harness.hpp"
#include "rvfl/model.hpp"
#include "rvfl/selftest.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace rvfl {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << text;
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

double rms(const Vector& v) { return v.size() ? v.norm() / std::sqrt(double(v.size())) : 0.0; }

struct RunOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::size_t> threads;
    std::string out;
    std::string format = "json";
    bool paper_scale = false;
    bool progress = false;
};

int do_run(const RunOptions& o, std::ostream& out, std::ostream& err) {
    ExperimentConfig config;
    try {
        config = load_config(o.config);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    }
    if (o.paper_scale) config.apply_paper_scale();
    if (o.seed) config.master_seed = *o.seed;
    if (o.trials) config.trials = *o.trials;
    if (o.threads) config.parallelism = *o.threads;
    const TableFormat format = parse_table_format(o.format);
    config.validate();

    ProgressFn progress;
    if (o.progress) {
        progress = [&err](std::size_t done, std::size_t total) {
            err << "\r" << done << '/' << total << " trials" << std::flush;
            if (done == total) err << '\n';
        };
    }
    const ExperimentResults results = run_experiment(config, progress);
    write_output(o.out, emit_table(results, format), out);
    if (!o.out.empty()) {
        err << "wrote " << o.out << " (" << results.trials.size() << " trials, "
            << results.cells.size() << " cells)\n";
    }
    return kExitOk;
}

struct TrainOptions {
    std::string target = "NL";
    std::size_t dim = 2;
    std::size_t samples = 2000;
    std::size_t test_samples = 10000;
    double noise = 0.05;
    std::string variant = "+dl+b";
    std::string strategy = "Gu";
    std::size_t m = 50;
    double u = 1.0;
    double alpha_min = 0.0;
    double alpha_max = 90.0;
    std::uint64_t seed = 42;
    std::string data;
    std::string out;
};

int do_train(const TrainOptions& o, std::ostream& out) {
    const TargetFunction tf = parse_target(o.target);
    const Configuration conf = parse_configuration(o.variant);
    InitStrategy strategy;
    switch (parse_strategy_kind(o.strategy)) {
        case StrategyKind::Gs: strategy = StandardInit{o.u}; break;
        case StrategyKind::Gu: strategy = AnchoredInit{o.u}; break;
        case StrategyKind::GAlpha: strategy = SlopeAngleInit{o.alpha_min, o.alpha_max}; break;
    }

    const RngStream root(o.seed);
    Dataset train_set;
    if (!o.data.empty()) {
        std::istringstream in(read_file(o.data));
        train_set = read_csv(in);
    } else {
        train_set = sample_dataset(tf, o.dim, o.samples, o.noise, root.child("train"));
    }
    const std::size_t n = train_set.dim();
    const Dataset test_set = make_test_set(tf, n, o.test_samples, root.child("test"));

    const RngStream init = root.child("init");
    Rng rng = init.engine();
    TrainedModel model = train(Topology(n, o.m, conf), strategy, train_set, rng);
    model.seed = init.key();

    const Decomposition parts = decompose(model, test_set.x);
    out << std::setprecision(6);
    out << "model       " << to_string(conf) << ' ' << describe(strategy) << " m=" << o.m
        << " n=" << n << '\n';
    out << "train RMSE  " << rmse(predict(model, train_set.x), train_set.y) << '\n';
    out << "test RMSE   " << rmse(predict(model, test_set.x), test_set.y) << '\n';
    out << "components (RMS over test set)\n";
    out << "  linear    " << rms(parts.linear) << '\n';
    out << "  nonlinear " << rms(parts.nonlinear) << '\n';
    out << "  bias      " << rms(parts.bias) << '\n';
    if (!o.out.empty()) write_output(o.out, model_to_json(model) + "\n", out);
    return kExitOk;
}

int do_table(const std::string& input, const std::string& format, const std::string& path,
             std::ostream& out) {
    const ExperimentResults results = results_from_json(read_file(input));
    write_output(path, emit_table(results, parse_table_format(format)), out);
    return kExitOk;
}

int do_selftest(std::ostream& out) {
    bool ok = true;
    for (const SelftestCheck& c : run_selftest()) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name;
        if (!c.passed) out << ": " << c.detail;
        out << '\n';
        ok = ok && c.passed;
    }
    return ok ? kExitOk : kExitRuntime;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random vector functional link networks: training and ablation benchmarks",
                 "rvfl"};
    app.require_subcommand(1);

    RunOptions run_opts;
    auto* run = app.add_subcommand("run", "Run an experiment described by a TOML config");
    run->add_option("--config", run_opts.config, "Experiment config (TOML)")->required();
    run->add_option("--seed", run_opts.seed, "Override master_seed");
    run->add_option("--trials", run_opts.trials, "Override trial count")
        ->check(CLI::PositiveNumber);
    run->add_option("--threads", run_opts.threads, "Worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber);
    run->add_option("--out", run_opts.out, "Output file (stdout if omitted)");
    run->add_option("--format", run_opts.format, "csv, markdown or json")
        ->check(CLI::IsMember({"csv", "markdown", "md", "json"}));
    run->add_flag("--paper-scale", run_opts.paper_scale,
                  "100 trials, original training-set sizes and full m grid");
    run->add_flag("--progress", run_opts.progress, "Report finished trials on stderr");

    TrainOptions train_opts;
    auto* tr = app.add_subcommand("train", "Train one model and report its errors");
    tr->add_option("--target", train_opts.target, "NL, NLF, NLF_L or L");
    tr->add_option("--dim", train_opts.dim, "Input dimension")->check(CLI::PositiveNumber);
    tr->add_option("--samples", train_opts.samples, "Training points")->check(CLI::PositiveNumber);
    tr->add_option("--test-samples", train_opts.test_samples, "Noise-free test points")
        ->check(CLI::PositiveNumber);
    tr->add_option("--noise", train_opts.noise, "Training noise sigma");
    tr->add_option("--variant", train_opts.variant, "+dl+b, +dl-b, -dl+b or -dl-b");
    tr->add_option("--strategy", train_opts.strategy, "Gs, Gu or Galpha");
    tr->add_option("-m,--nodes", train_opts.m, "Hidden nodes")->check(CLI::PositiveNumber);
    tr->add_option("--u", train_opts.u, "Weight interval bound for Gs/Gu");
    tr->add_option("--alpha-min", train_opts.alpha_min, "Galpha lower slope angle (degrees)");
    tr->add_option("--alpha-max", train_opts.alpha_max, "Galpha upper slope angle (degrees)");
    tr->add_option("--seed", train_opts.seed, "Master seed");
    tr->add_option("--data", train_opts.data, "Training set CSV (x1..xn,y) instead of sampling");
    tr->add_option("--out", train_opts.out, "Write the trained model as JSON");

    std::string table_input;
    std::string table_format = "markdown";
    std::string table_out;
    auto* table = app.add_subcommand("table", "Re-render stored JSON results");
    table->add_option("results", table_input, "Results JSON written by `run`")->required();
    table->add_option("--format", table_format, "csv, markdown or json")
        ->check(CLI::IsMember({"csv", "markdown", "md", "json"}));
    table->add_option("--out", table_out, "Output file (stdout if omitted)");

    auto* selftest = app.add_subcommand("selftest", "Run oracle and property checks");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*run) return do_run(run_opts, out, err);
        if (*tr) return do_train(train_opts, out);
        if (*table) return do_table(table_input, table_format, table_out, out);
        if (*selftest) return do_selftest(out);
    } catch (const InvalidParameter& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}

}  // namespace rvfl
