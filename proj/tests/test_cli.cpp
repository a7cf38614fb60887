#include "rvfl/cli.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rvfl;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& text = {}) {
    const auto p = std::filesystem::temp_directory_path() / ("rvfl_test_" + name);
    if (!text.empty()) std::ofstream(p) << text;
    return p;
}

const std::string kTiny = R"(target = "NL"
n = 2
n_train = 150
n_test = 300
trials = 2
strategies = ["Gs", "Gu"]

[grid]
m_values = [1, 5, 20]
u_values = [1, 5]
)";

}  // namespace

TEST_CASE("run is byte-identical across repeats and thread counts") {
    const auto cfg = temp_file("tiny.toml", kTiny);
    const Outcome a = cli({"run", "--config", cfg.string(), "--seed", "9"});
    const Outcome b = cli({"run", "--config", cfg.string(), "--seed", "9", "--threads", "3"});
    REQUIRE(a.code == kExitOk);
    REQUIRE(b.code == kExitOk);
    CHECK(a.out == b.out);
    CHECK(a.out.find("\"cells\"") != std::string::npos);
    const Outcome c = cli({"run", "--config", cfg.string(), "--seed", "10"});
    CHECK(c.out != a.out);

    SUBCASE("table re-renders stored results") {
        const auto json = temp_file("results.json", a.out);
        const Outcome md = cli({"table", json.string()});
        CHECK(md.code == kExitOk);
        CHECK(md.out.find("| Gs | +dl+b |") != std::string::npos);
        const Outcome csv = cli({"table", json.string(), "--format", "csv"});
        CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 9);
        const Outcome same = cli({"table", json.string(), "--format", "json"});
        CHECK(same.out == a.out);
        const Outcome direct = cli({"run", "--config", cfg.string(), "--seed", "9", "--format", "csv"});
        CHECK(direct.out == csv.out);
    }
}

TEST_CASE("train reports errors and writes a model") {
    const auto model = temp_file("model.json");
    std::filesystem::remove(model);
    const Outcome r = cli({"train", "--target", "L", "--noise", "0", "--samples", "200",
                           "--test-samples", "500", "-m", "5", "--strategy", "Galpha",
                           "--out", model.string()});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("test RMSE") != std::string::npos);
    CHECK(r.out.find("linear") != std::string::npos);
    CHECK(std::filesystem::exists(model));
}

TEST_CASE("selftest passes") {
    const Outcome r = cli({"selftest"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("PASS") != std::string::npos);
}

TEST_CASE("usage and config errors exit with 1") {
    CHECK(cli({}).code == kExitUsage);
    CHECK(cli({"frobnicate"}).code == kExitUsage);
    CHECK(cli({"run"}).code == kExitUsage);
    CHECK(cli({"run", "--config", "x.toml", "--threads", "0"}).code == kExitUsage);
    CHECK(cli({"run", "--config", "x.toml", "--format", "xml"}).code == kExitUsage);
    CHECK(cli({"train", "--variant", "+dl"}).code == kExitUsage);
    CHECK(cli({"train", "--strategy", "Gz"}).code == kExitUsage);

    const auto bad = temp_file("bad.toml", "trials = 2\nwidth = 3\n");
    const Outcome r = cli({"run", "--config", bad.string()});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find(":2: field 'width'") != std::string::npos);
    CHECK(cli({"run", "--config", "/nonexistent/x.toml"}).code == kExitUsage);
    CHECK(cli({"table", "/nonexistent/results.json"}).code == kExitRuntime);
    CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("shipped example config parses") {
    const Outcome r = cli({"run", "--config", std::string(RVFL_CONFIG_DIR) + "/nl2.toml",
                           "--trials", "1", "--format", "csv"});
    CHECK(r.code == kExitOk);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 13);
}
