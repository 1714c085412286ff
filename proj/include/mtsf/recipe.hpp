#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mtsf/dataset.hpp"

namespace mtsf {

enum class ResampleOp { Mean, Sum };

struct ResampleStep {
    ResampleOp op = ResampleOp::Mean;
    std::size_t group_size = 1;
};

/// Dataset preparation recipe, read from a JSON document:
///
///     {
///       "source_path": "raw/guangzhou_10min.csv",
///       "missing_policy": "drop",
///       "zero_is_missing": true,
///       "timestamp_column": "timestamp",
///       "resample": {"op": "mean", "group_size": 6},
///       "keep_columns": ["seg_001", "seg_002"],
///       "resolution": "hourly"
///     }
///
/// Relative source paths resolve against the recipe file's directory.
struct PreparationRecipe {
    std::filesystem::path source_path;
    CsvSchema schema;
    std::optional<ResampleStep> resample;
    std::vector<std::string> keep_columns;
};

PreparationRecipe parse_recipe(const std::string& json_text, const std::filesystem::path& base_dir = {});
PreparationRecipe load_recipe(const std::filesystem::path& path);

/// Load, filter, select and resample per the recipe.
SeriesMatrix prepare_dataset(const PreparationRecipe& recipe);

} // namespace mtsf
