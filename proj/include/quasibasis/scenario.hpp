#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "quasibasis/geometry.hpp"
#include "quasibasis/riesz.hpp"

namespace quasibasis {

using ordered_json = nlohmann::ordered_json;

inline constexpr int kScenarioSchemaVersion = 1;

// A prescribed sequence lambda_j = j/k + perturbation, used to exercise the
// Avdonin checks without a region.
struct SyntheticSequence {
    // "lattice" (no perturbation), "frac" (amplitude * frac(j theta) - amplitude/2),
    // "sine" (amplitude * sin(2 pi theta j)), "alternating" ((-1)^j amplitude).
    std::string kind = "lattice";
    double amplitude = 0.0;
    double theta = 0.0;
    long long n_range = 0;
    double c = 0.0;
    double delta_bound = 1.0;
};

struct Scenario {
    int schema_version = kScenarioSchemaVersion;
    std::string name;
    int dim = 0;
    std::vector<Box> boxes;
    // Columns are the lattice generators.
    Mat lattice_basis;
    int k = 1;
    std::uint64_t seed = 0;
    std::optional<Vec> alpha;
    std::optional<Vec> beta;
    std::size_t samples = 10000;
    double window_radius = 10.0;
    long long n_range = 500;
    std::vector<std::size_t> orders{64, 128, 256, 512};
    std::vector<long long> deviation_grid{1, 10, 100, 1000, 10000};
    FrequencyControl control;
    std::optional<SyntheticSequence> synthetic;

    bool has_region() const { return !synthetic.has_value(); }
};

// Strict parse: unknown fields, missing required fields and out-of-range
// values throw InvalidInput.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& path);

// Canonical serialization; parse_scenario(scenario_to_json(s)) reproduces s.
ordered_json scenario_to_json(const Scenario& scenario);

// Hex SHA-256 of the canonical serialization.
std::string scenario_digest(const Scenario& scenario);

std::vector<std::string> bundled_demo_names();
// Throws InvalidInput for unknown names.
Scenario bundled_demo(const std::string& name);

}  // namespace quasibasis
