// quasibasis command-line tool.
//
//   quasibasis check-tiling --scenario s.json --out dir
//   quasibasis generate     --scenario s.json --out dir [--force]
//   quasibasis avdonin      --scenario s.json --out dir
//   quasibasis frame        --scenario s.json --out dir
//   quasibasis demo <name>  --out dir
//
// Exit codes: 0 success, 1 a check failed, 2 invalid input.

#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "quasibasis/errors.hpp"
#include "quasibasis/pipeline.hpp"

namespace qb = quasibasis;

int main(int argc, char** argv) {
    CLI::App app{"Riesz bases of exponentials from cut-and-project quasicrystals"};
    app.set_version_flag("--version", qb::kToolVersion);
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    bool force = false;
    std::string demo_name;

    auto add_common = [&](CLI::App* sub, bool needs_scenario) {
        if (needs_scenario) sub->add_option("--scenario", scenario_path, "scenario JSON file")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "override the scenario seed");
    };
    CLI::App* tiling = app.add_subcommand("check-tiling", "verify the region multi-tiles by the lattice");
    CLI::App* generate = app.add_subcommand("generate", "enumerate the model set and frequency sequence");
    CLI::App* avdonin = app.add_subcommand("avdonin", "evaluate the Avdonin-type conditions");
    CLI::App* frame = app.add_subcommand("frame", "Gram and frame-bound trends");
    CLI::App* demo = app.add_subcommand("demo", "run a bundled scenario end to end");
    for (CLI::App* sub : {tiling, generate, avdonin, frame}) add_common(sub, true);
    add_common(demo, false);
    generate->add_flag("--force", force, "skip the tiling pre-check");
    demo->add_flag("--force", force, "continue after a failed tiling check");
    demo->add_option("name", demo_name, "demo name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : qb::kExitInputError;
    }

    try {
        qb::RunOptions options{out_dir, force};
        if (demo->parsed()) return qb::cmd_demo(demo_name, options, seed);

        qb::Scenario s = qb::load_scenario(scenario_path);
        if (seed) s.seed = *seed;
        if (tiling->parsed()) return qb::cmd_check_tiling(s, options);
        if (generate->parsed()) return qb::cmd_generate(s, options);
        if (avdonin->parsed()) return qb::cmd_avdonin(s, options);
        return qb::cmd_frame(s, options);
    } catch (const qb::InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return qb::kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return qb::kExitCheckFailed;
    }
}
