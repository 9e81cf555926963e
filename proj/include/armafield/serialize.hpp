#pragma once

// JSON documents and CSV label grids exchanged by the command-line tool.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "armafield/field.hpp"
#include "armafield/segmenter.hpp"
#include "armafield/synthesis.hpp"
#include "armafield/ywls.hpp"

namespace armafield {

nlohmann::json to_json(const ModelOrder& order);
/// {"i,j": value} in lag order.
nlohmann::json to_json(const LagCoefficients& coefficients);
LagCoefficients coefficients_from_json(const nlohmann::json& doc, int max_i, int max_j);

/// Estimation result:
/// {order, theta, a, b, sigma2, regularized, regression_rows}.
nlohmann::json fit_to_json(const ArmaFit& fit);

/// Synthesis parameter file:
///   {"order": [p1,p2,q1,q2], "a": {"i,j": v}, "b": {...}, "sigma2": s,
///    "rows": N1, "cols": N2, "burn_in": B, "seed": S}
/// Every key except "order" is optional (defaults: zero coefficients,
/// sigma2 1, 256x256, burn-in 64, seed 0).
SynthesisConfig synthesis_config_from_json(const nlohmann::json& doc);
nlohmann::json synthesis_config_to_json(const SynthesisConfig& config);

nlohmann::json segmentation_to_json(const SegmentationMap& map, const BlockFeatures& features);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

struct LabelGrid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<int> labels;  // row-major
};

/// Comma-separated integers, one grid row per line.
std::string label_csv(std::span<const int> labels, std::size_t rows, std::size_t cols);
LabelGrid parse_label_csv(const std::string& text);
LabelGrid read_label_csv(const std::filesystem::path& path);

/// "a,b,c,..." -> integers (used for --order and --ar-approx).
std::vector<int> parse_int_list(const std::string& text);

}  // namespace armafield
