#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "mdboost/core.hpp"

namespace mdboost {

struct Model {
    std::string algorithm = "mdboost";
    double delta = kDefaultDelta;
    Ensemble ensemble;
};

// {"algorithm", "delta", "d_param", "members": [{weight, feature_index, threshold, polarity}]}
nlohmann::json to_json(const Model& model);
Model model_from_json(const nlohmann::json& doc);

void save_model(const std::filesystem::path& path, const Model& model);
Model load_model(const std::filesystem::path& path);

} // namespace mdboost
