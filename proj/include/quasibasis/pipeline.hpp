#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "quasibasis/avdonin.hpp"
#include "quasibasis/geometry.hpp"
#include "quasibasis/quasicrystal.hpp"
#include "quasibasis/riesz.hpp"
#include "quasibasis/scenario.hpp"

namespace quasibasis {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit-code contract of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitInputError = 2 };

// Gram lambda_min at or below this counts as rank collapse.
inline constexpr double kRankCollapse = 1e-8;

struct AvdoninStage {
    AvdoninReport report;
    // Set when a condition failed; the report is still complete.
    std::optional<std::string> failure;
    bool kadec = false;
    // Block-sum identity residual over |r| <= 500 (absent for synthetic input).
    std::optional<double> block_identity_residual;
    std::optional<double> block_identity_range;
};

struct FrameStage {
    TrendReport one_d;
    TrendReport multi_d;
    // Dual-lattice frequencies over the input region; only for k = 1.
    std::optional<TrendReport> fuglede;
    DualityReport duality;
    bool rank_ok = false;
};

// Runs the construction for one scenario, computing each stage on demand and
// caching it.
class Pipeline {
public:
    explicit Pipeline(Scenario scenario);

    const Scenario& scenario() const { return scenario_; }

    // Input region and lattice. Throw InvalidInput for synthetic scenarios.
    const Region& region();
    const Lattice& lattice();

    TilingReport tiling();

    const CutProjectParams& params();
    // Normalized to Z^d and shifted off the orbit {r alpha}.
    const Region& working_region();
    const Mat& pullback();
    const Vec& shift();

    // Block range of the enumeration: wide enough for the deviation grid.
    long long enumeration_range() const;
    const BlockEnumeration& enumeration();
    // Blocks |n| <= scenario n_range only.
    BlockEnumeration exported_enumeration();

    // Model-set points inside the scenario window (normalized frame).
    QuasicrystalPoints lambda_points();
    // Same points mapped by the pullback: frequencies for the input region.
    std::vector<Vec> lambda_frequencies(const QuasicrystalPoints& points);

    AvdoninStage avdonin();
    FrameStage frame();

private:
    void prepare();

    Scenario scenario_;
    std::optional<Region> region_;
    std::optional<Lattice> lattice_;
    std::optional<CutProjectParams> params_;
    std::optional<Region> working_;
    Mat pullback_;
    Vec shift_;
    std::optional<BlockEnumeration> enumeration_;
};

struct RunOptions {
    std::filesystem::path out_dir = ".";
    bool force = false;
};

struct StageStatus {
    std::string name;
    // "ok", "failed" or "skipped".
    std::string status;
    std::string reason;
};

struct RunManifest {
    std::string scenario_name;
    std::string scenario_digest;
    std::string tool_version = kToolVersion;
    std::uint64_t seed = 0;
    std::vector<StageStatus> stages;
    std::vector<std::string> outputs;

    bool all_ok() const;
};

ordered_json to_json(const RunManifest& manifest);

// Command bodies. Each writes its artifacts under options.out_dir and returns
// an exit code; input errors propagate as InvalidInput.
int cmd_check_tiling(const Scenario& scenario, const RunOptions& options);
int cmd_generate(const Scenario& scenario, const RunOptions& options);
int cmd_avdonin(const Scenario& scenario, const RunOptions& options);
int cmd_frame(const Scenario& scenario, const RunOptions& options);
// Full pipeline; writes manifest.json next to the stage artifacts.
RunManifest run_all(const Scenario& scenario, const RunOptions& options);
int cmd_demo(const std::string& name, const RunOptions& options, std::optional<std::uint64_t> seed = {});

}  // namespace quasibasis
