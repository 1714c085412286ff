#include "mtsf/recipe.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mtsf {

namespace {

using nlohmann::json;

template <typename T>
T get_key(const json& doc, const std::string& key, const std::string& where) {
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
}

ResampleOp parse_resample_op(const std::string& name) {
    if (name == "mean") {
        return ResampleOp::Mean;
    }
    if (name == "sum") {
        return ResampleOp::Sum;
    }
    throw ConfigError("recipe.resample.op: unknown op '" + name + "' (expected mean or sum)");
}

} // namespace

PreparationRecipe parse_recipe(const std::string& json_text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("recipe: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("recipe: top level must be an object");
    }
    static const std::set<std::string> known = {"source_path",  "missing_policy", "zero_is_missing", "timestamp_column",
                                                "value_columns", "resample",       "keep_columns",    "resolution",
                                                "name",          "description"};
    for (const auto& item : doc.items()) {
        if (known.count(item.key()) == 0) {
            throw ConfigError("recipe." + item.key() + ": unknown key");
        }
    }

    PreparationRecipe recipe;
    std::filesystem::path source = get_key<std::string>(doc, "source_path", "recipe");
    recipe.source_path = source.is_absolute() || base_dir.empty() ? source : base_dir / source;
    if (doc.contains("missing_policy")) {
        recipe.schema.missing_policy = parse_missing_policy(get_key<std::string>(doc, "missing_policy", "recipe"));
    }
    if (doc.contains("zero_is_missing")) {
        recipe.schema.zero_is_missing = get_key<bool>(doc, "zero_is_missing", "recipe");
    }
    if (doc.contains("timestamp_column")) {
        recipe.schema.timestamp_column = get_key<std::string>(doc, "timestamp_column", "recipe");
    }
    if (doc.contains("value_columns")) {
        recipe.schema.value_columns = get_key<std::vector<std::string>>(doc, "value_columns", "recipe");
    }
    if (doc.contains("resolution")) {
        recipe.schema.resolution = get_key<std::string>(doc, "resolution", "recipe");
    }
    if (doc.contains("keep_columns")) {
        recipe.keep_columns = get_key<std::vector<std::string>>(doc, "keep_columns", "recipe");
    }
    if (doc.contains("resample")) {
        const auto& r = doc.at("resample");
        if (!r.is_object()) {
            throw ConfigError("recipe.resample: expected an object");
        }
        ResampleStep step;
        step.op = parse_resample_op(get_key<std::string>(r, "op", "recipe.resample"));
        const auto size = get_key<long long>(r, "group_size", "recipe.resample");
        if (size < 1) {
            throw ConfigError("recipe.resample.group_size: must be at least 1");
        }
        step.group_size = static_cast<std::size_t>(size);
        recipe.resample = step;
    }
    return recipe;
}

PreparationRecipe load_recipe(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open recipe '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_recipe(buffer.str(), path.parent_path());
}

SeriesMatrix prepare_dataset(const PreparationRecipe& recipe) {
    SeriesMatrix m = load_csv(recipe.source_path, recipe.schema);
    if (!recipe.keep_columns.empty()) {
        m = select_columns(m, recipe.keep_columns);
    }
    if (recipe.resample) {
        m = recipe.resample->op == ResampleOp::Mean ? resample_mean(m, recipe.resample->group_size)
                                                    : resample_sum(m, recipe.resample->group_size);
    }
    return m;
}

} // namespace mtsf
