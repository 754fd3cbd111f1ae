#pragma once

#include "hubness/eval.hpp"
#include "hubness/metrics.hpp"
#include "hubness/transforms.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hubness {

/// {k, n_points, k_skewness, robinhood, antihub_count, max_k_occurrence}
nlohmann::json to_json(const HubnessReport& report);
HubnessReport hubness_report_from_json(const nlohmann::json& j);

/// JSON array of {"kind": ..., "seed": ...} objects, seed only on seeded kinds.
nlohmann::json to_json(const Pipeline& pipeline);
/// Parses a pipeline. Seeded kinds without a seed take `default_seed` when given;
/// throws InvalidArgument on unknown kinds or a seed mismatch.
Pipeline parse_pipeline(const nlohmann::json& j, std::optional<std::uint64_t> default_seed = std::nullopt);
Pipeline parse_pipeline(const std::string& text, std::optional<std::uint64_t> default_seed = std::nullopt);

/// {chosen_k, error_rate, n_test, distance_mode, transform_pipeline}
nlohmann::json to_json(const EvalResult& result, const Pipeline& pipeline);
nlohmann::json to_json(const McNemarResult& result);

/// "index,count" lines, one per point.
std::string k_occurrence_csv(const KOccurrence& occ);

/// "row_index,predicted_label" lines.
void write_predictions_csv(const std::vector<int>& predictions, const std::filesystem::path& path);
std::vector<int> read_predictions_csv(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace hubness
