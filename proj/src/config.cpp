#include "rvfl/errors.hpp"
#include "rvfl/harness.hpp"

#include <toml++/toml.hpp>

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace rvfl {

namespace {

class Reader {
public:
    explicit Reader(std::string_view source) : source_(source) {}

    [[noreturn]] void fail(const toml::node& node, std::string_view field,
                           const std::string& msg) const {
        std::ostringstream os;
        os << source_ << ':' << node.source().begin.line << ": field '" << field << "': " << msg;
        throw ConfigError(os.str());
    }

    void check_keys(const toml::table& table, std::string_view prefix,
                    const std::set<std::string, std::less<>>& allowed) const {
        for (const auto& [key, node] : table) {
            if (!allowed.contains(key.str())) {
                std::string name = prefix.empty() ? std::string(key.str())
                                                  : std::string(prefix) + "." + std::string(key.str());
                fail(node, name, "unknown key");
            }
        }
    }

    std::uint64_t integer(const toml::node& node, std::string_view field, std::int64_t min) const {
        const auto v = node.value<std::int64_t>();
        if (!node.is_integer() || !v) fail(node, field, "expected an integer");
        if (*v < min) fail(node, field, "must be >= " + std::to_string(min));
        return static_cast<std::uint64_t>(*v);
    }

    double real(const toml::node& node, std::string_view field) const {
        if (!node.is_number()) fail(node, field, "expected a number");
        return *node.value<double>();
    }

    std::string text(const toml::node& node, std::string_view field) const {
        if (!node.is_string()) fail(node, field, "expected a string");
        return *node.value<std::string>();
    }

    const toml::array& array(const toml::node& node, std::string_view field) const {
        const toml::array* a = node.as_array();
        if (!a) fail(node, field, "expected an array");
        if (a->empty()) fail(node, field, "must not be empty");
        return *a;
    }

    bool boolean(const toml::node& node, std::string_view field) const {
        if (!node.is_boolean()) fail(node, field, "expected true or false");
        return *node.value<bool>();
    }

    // Re-throws domain parse errors with location.
    template <typename F>
    auto located(const toml::node& node, std::string_view field, F&& f) const {
        try {
            return f();
        } catch (const InvalidParameter& e) {
            fail(node, field, e.what());
        }
    }

private:
    std::string_view source_;
};

}  // namespace

ExperimentConfig parse_config(std::string_view toml_text, std::string_view source_name) {
    toml::table root;
    try {
        root = toml::parse(toml_text, source_name);
    } catch (const toml::parse_error& e) {
        std::ostringstream os;
        os << source_name << ':' << e.source().begin.line << ": " << e.description();
        throw ConfigError(os.str());
    }

    const Reader rd(source_name);
    rd.check_keys(root, "",
                  {"target", "n", "n_train", "n_test", "trials", "noise_sigma", "configurations",
                   "strategies", "master_seed", "parallelism", "significance_level",
                   "record_timing", "grid"});

    // Default grids depend on the input dimension.
    std::size_t n = 2;
    if (const toml::node* node = root.get("n")) n = rd.integer(*node, "n", 1);
    ExperimentConfig c = ExperimentConfig::desk(TargetFunction::NL, n);

    if (const toml::node* node = root.get("target")) {
        const std::string name = rd.text(*node, "target");
        c.target = rd.located(*node, "target", [&] { return parse_target(name); });
    }
    if (const toml::node* node = root.get("n_train")) c.n_train = rd.integer(*node, "n_train", 1);
    if (const toml::node* node = root.get("n_test")) c.n_test = rd.integer(*node, "n_test", 1);
    if (const toml::node* node = root.get("trials")) c.trials = rd.integer(*node, "trials", 1);
    if (const toml::node* node = root.get("noise_sigma")) {
        c.noise_sigma = rd.real(*node, "noise_sigma");
        if (!(c.noise_sigma >= 0.0)) rd.fail(*node, "noise_sigma", "must be >= 0");
    }
    if (const toml::node* node = root.get("master_seed")) {
        c.master_seed = rd.integer(*node, "master_seed", 0);
    }
    if (const toml::node* node = root.get("parallelism")) {
        c.parallelism = rd.integer(*node, "parallelism", 1);
    }
    if (const toml::node* node = root.get("significance_level")) {
        c.significance_level = rd.real(*node, "significance_level");
        if (!(c.significance_level > 0.0 && c.significance_level < 1.0)) {
            rd.fail(*node, "significance_level", "must lie in (0, 1)");
        }
    }
    if (const toml::node* node = root.get("record_timing")) {
        c.record_timing = rd.boolean(*node, "record_timing");
    }
    if (const toml::node* node = root.get("configurations")) {
        c.configurations.clear();
        for (const toml::node& e : rd.array(*node, "configurations")) {
            const std::string s = rd.text(e, "configurations");
            c.configurations.push_back(
                rd.located(e, "configurations", [&] { return parse_configuration(s); }));
        }
    }
    if (const toml::node* node = root.get("strategies")) {
        c.strategies.clear();
        for (const toml::node& e : rd.array(*node, "strategies")) {
            const std::string s = rd.text(e, "strategies");
            c.strategies.push_back(
                rd.located(e, "strategies", [&] { return parse_strategy_kind(s); }));
        }
    }
    if (const toml::node* node = root.get("grid")) {
        const toml::table* grid = node->as_table();
        if (!grid) rd.fail(*node, "grid", "expected a table");
        rd.check_keys(*grid, "grid", {"m_values", "u_values", "alpha_min_values", "alpha_step"});
        if (const toml::node* g = grid->get("m_values")) {
            c.grid.m_values.clear();
            for (const toml::node& e : rd.array(*g, "grid.m_values")) {
                c.grid.m_values.push_back(rd.integer(e, "grid.m_values", 1));
            }
        }
        if (const toml::node* g = grid->get("u_values")) {
            c.grid.u_values.clear();
            for (const toml::node& e : rd.array(*g, "grid.u_values")) {
                const double u = rd.real(e, "grid.u_values");
                if (!(u > 0.0)) rd.fail(e, "grid.u_values", "entries must be > 0");
                c.grid.u_values.push_back(u);
            }
        }
        if (const toml::node* g = grid->get("alpha_min_values")) {
            c.grid.alpha_min_values.clear();
            for (const toml::node& e : rd.array(*g, "grid.alpha_min_values")) {
                const double a = rd.real(e, "grid.alpha_min_values");
                if (!(a >= 0.0 && a < 90.0)) {
                    rd.fail(e, "grid.alpha_min_values", "entries must lie in [0, 90)");
                }
                c.grid.alpha_min_values.push_back(a);
            }
        }
        if (const toml::node* g = grid->get("alpha_step")) {
            c.grid.alpha_step = rd.real(*g, "grid.alpha_step");
            if (!(c.grid.alpha_step > 0.0)) rd.fail(*g, "grid.alpha_step", "must be > 0");
        }
    }

    try {
        c.validate();
    } catch (const InvalidParameter& e) {
        throw ConfigError(std::string(source_name) + ": " + e.what());
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

}  // namespace rvfl
