#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "quasibasis/avdonin.hpp"
#include "quasibasis/geometry.hpp"
#include "quasibasis/quasicrystal.hpp"
#include "quasibasis/riesz.hpp"

namespace quasibasis {

using ordered_json = nlohmann::ordered_json;

// Full-precision "%.17g"; non-finite values print as inf / -inf / nan.
std::string format_double(double x);

ordered_json to_json(const Vec& v);
ordered_json to_json(const TilingReport& report);
ordered_json to_json(const CutProjectParams& params);
ordered_json to_json(const AvdoninReport& report);
ordered_json to_json(const FrameReport& report);
ordered_json to_json(const TrendReport& report);
ordered_json to_json(const DualityReport& report);
ordered_json to_json(const QuasicrystalPoints& points);
ordered_json to_json(const BlockEnumeration& enumeration);

// UTF-8 CSV with a header row.
std::string points_csv(const std::vector<Vec>& points, const std::string& prefix);
std::string enumeration_csv(const BlockEnumeration& enumeration);
std::string deviation_csv(const AvdoninReport& report);
std::string trend_csv(const std::vector<TrendReport>& trends);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const ordered_json& doc);

}  // namespace quasibasis
