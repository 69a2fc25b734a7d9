#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "quasibasis/errors.hpp"
#include "quasibasis/pipeline.hpp"

using namespace quasibasis;
namespace fs = std::filesystem;

namespace {

const std::string kCli = QUASIBASIS_CLI;
const fs::path kScenarios = QUASIBASIS_SCENARIOS;

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("quasibasis_test_" + name);
    fs::remove_all(p);
    return p;
}

int run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + kCli + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

std::map<std::string, std::string> tree(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = slurp(e.path());
    return out;
}

std::string scenario(const std::string& name) { return (kScenarios / (name + ".json")).string(); }

}  // namespace

TEST_CASE("scenario parsing is strict") {
    const Scenario s = bundled_demo("two-intervals");
    CHECK(s.k == 2);
    CHECK(s.boxes.size() == 2);
    const Scenario again = parse_scenario(nlohmann::json::parse(scenario_to_json(s).dump()));
    CHECK(scenario_digest(again) == scenario_digest(s));
    CHECK(scenario_digest(s).size() == 64);

    auto doc = nlohmann::json::parse(scenario_to_json(s).dump());
    doc["colour"] = "blue";
    CHECK_THROWS_AS(parse_scenario(doc), InvalidInput);
    doc.erase("colour");
    doc.erase("seed");
    CHECK_THROWS_AS(parse_scenario(doc), InvalidInput);
    doc["seed"] = 1;
    doc["orders"] = {128, 64};
    CHECK_THROWS_AS(parse_scenario(doc), InvalidInput);
    doc["orders"] = {64};
    doc["boxes"] = {{{0}, {1}}, {{0.5}, {1.5}}};
    CHECK_NOTHROW(parse_scenario(doc));
    CHECK_THROWS_AS(Pipeline(parse_scenario(doc)), InvalidInput);

    auto syn = nlohmann::json::parse(slurp(scenario("synthetic-frac")));
    CHECK_NOTHROW(parse_scenario(syn));
    syn["dim"] = 1;
    CHECK_THROWS_AS(parse_scenario(syn), InvalidInput);
    CHECK_THROWS_AS(bundled_demo("hexagon"), InvalidInput);
}

TEST_CASE("bundled scenario files match the built-in demos") {
    for (const auto& name : bundled_demo_names())
        CHECK(scenario_digest(load_scenario(scenario(name))) == scenario_digest(bundled_demo(name)));
}

TEST_CASE("check-tiling exit codes") {
    CHECK(run("check-tiling --scenario " + scenario("cube") + " --out " + scratch("t1").string()) == 0);
    CHECK(run("check-tiling --scenario " + scenario("two-intervals") + " --out " + scratch("t2").string()) == 0);
    const fs::path out = scratch("t3");
    CHECK(run("check-tiling --scenario " + scenario("two-intervals-k3") + " --out " + out.string()) == 1);
    const auto report = read_json(out / "tiling.json");
    CHECK(report["passed"] == false);
    CHECK(report["failure_count"].get<int>() > 0);
    CHECK(!report["failures"].empty());
}

TEST_CASE("generate writes k rows per block") {
    const fs::path out = scratch("g1");
    CHECK(run("generate --scenario " + scenario("two-intervals") + " --out " + out.string()) == 0);
    std::ifstream in(out / "lambda_star.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "j,n,lambda,delta");
    std::map<long long, int> per_block;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string j, n;
        std::getline(ss, j, ',');
        std::getline(ss, n, ',');
        ++per_block[std::stoll(n)];
    }
    CHECK(per_block.size() == 1001);
    for (const auto& [n, count] : per_block) CHECK(count == 2);
    CHECK(fs::exists(out / "lambda_points.csv"));
    CHECK(fs::exists(out / "lambda_frequencies.csv"));

    CHECK(run("generate --scenario " + scenario("two-intervals-window-zero") + " --out " + scratch("g2").string()) == 1);
    // A failed tiling check blocks generation unless forced.
    CHECK(run("generate --scenario " + scenario("two-intervals-k3") + " --out " + scratch("g3").string()) == 1);
}

TEST_CASE("avdonin exit codes") {
    CHECK(run("avdonin --scenario " + scenario("two-intervals") + " --out " + scratch("a1").string()) == 0);
    CHECK(run("avdonin --scenario " + scenario("two-intervals-perturb") + " --out " + scratch("a2").string()) == 1);
    CHECK(run("avdonin --scenario " + scenario("two-intervals-duplicate") + " --out " + scratch("a3").string()) == 1);
    const fs::path out = scratch("a4");
    CHECK(run("avdonin --scenario " + scenario("synthetic-lattice") + " --out " + out.string()) == 0);
    const auto doc = read_json(out / "avdonin.json");
    CHECK(doc["report"]["smallest_passing_N"] == 1);
    CHECK(doc["kadec_n1"] == true);
}

TEST_CASE("frame exit codes") {
    CHECK(run("frame --scenario " + scenario("cube") + " --out " + scratch("f1").string()) == 0);
    CHECK(run("frame --scenario " + scenario("two-intervals-duplicate") + " --out " + scratch("f2").string()) == 1);
}

TEST_CASE("input errors exit with 2") {
    CHECK(run("demo hexagon --out " + scratch("e1").string()) == 2);
    CHECK(run("avdonin --scenario /nonexistent.json") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("avdonin") == 2);
    const fs::path bad = scratch("e2.json");
    std::ofstream(bad) << "{\"schema_version\": 1, \"name\": \"x\"";
    CHECK(run("avdonin --scenario " + bad.string()) == 2);
}

TEST_CASE("pinned deviation fixtures") {
    const std::map<std::string, long long> pinned{
        {"cube", 1}, {"two-intervals", 10}, {"four-squares", 10}, {"commensurable-intervals", 100}};
    for (const auto& [name, n] : pinned) {
        Pipeline p(bundled_demo(name));
        const AvdoninStage stage = p.avdonin();
        CHECK_FALSE(stage.failure);
        REQUIRE(stage.report.smallest_passing_N);
        CHECK(*stage.report.smallest_passing_N == n);
        REQUIRE(stage.block_identity_residual);
        CHECK(*stage.block_identity_residual <= 1e-9);
    }
}

TEST_CASE("pinned condition numbers for two intervals") {
    Pipeline p(bundled_demo("two-intervals"));
    const FrameStage f = p.frame();
    REQUIRE(f.one_d.rows.size() == 4);
    CHECK(f.one_d.rows[0].gram.condition == doctest::Approx(4.1328035308194204).epsilon(1e-6));
    CHECK(f.one_d.rows[3].gram.condition == doctest::Approx(4.2077945079669012).epsilon(1e-6));
    CHECK(f.rank_ok);
    CHECK(f.duality.both_conditioned);
}

TEST_CASE("demo runs are reproducible") {
    const fs::path a = scratch("d1"), b = scratch("d2"), c = scratch("d3"), t = scratch("d4");
    CHECK(run("demo two-intervals --out " + a.string()) == 0);
    CHECK(run("demo two-intervals --out " + b.string()) == 0);
    CHECK(run("demo two-intervals --out " + t.string(), "QUASIBASIS_THREADS=4") == 0);
    CHECK(tree(a) == tree(b));
    CHECK(tree(a) == tree(t));
    CHECK(run("demo two-intervals --seed 8 --out " + c.string()) == 0);
    CHECK(tree(a)["manifest.json"] != tree(c)["manifest.json"]);
    const auto manifest = read_json(a / "manifest.json");
    CHECK(manifest["stages"].size() == 4);
    for (const auto& s : manifest["stages"]) CHECK(s["status"] == "ok");
}
