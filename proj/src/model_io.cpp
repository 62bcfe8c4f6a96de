#include "mdboost/model_io.hpp"

#include <fstream>

#include "mdboost/error.hpp"

namespace mdboost {

nlohmann::json to_json(const Model& model)
{
    nlohmann::json members = nlohmann::json::array();
    for (const auto& m : model.ensemble.members)
        members.push_back({{"weight", m.weight},
                           {"feature_index", m.stump.feature},
                           {"threshold", m.stump.threshold},
                           {"polarity", m.stump.polarity}});
    return {{"algorithm", model.algorithm},
            {"delta", model.delta},
            {"d_param", model.ensemble.weight_sum_target},
            {"members", std::move(members)}};
}

Model model_from_json(const nlohmann::json& doc)
{
    try {
        Model model;
        model.algorithm = doc.value("algorithm", std::string("mdboost"));
        model.delta = doc.at("delta").get<double>();
        model.ensemble.weight_sum_target = doc.at("d_param").get<double>();
        for (const auto& m : doc.at("members")) {
            WeightedStump member;
            member.weight = m.at("weight").get<double>();
            member.stump.feature = m.at("feature_index").get<std::size_t>();
            member.stump.threshold = m.at("threshold").get<double>();
            member.stump.polarity = m.at("polarity").get<int>();
            if (member.stump.polarity != 1 && member.stump.polarity != -1)
                throw Error("stump polarity must be -1 or +1");
            if (!(member.weight >= 0.0))
                throw Error("member weights must be nonnegative");
            model.ensemble.members.push_back(member);
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed model document: ") + e.what());
    }
}

void save_model(const std::filesystem::path& path, const Model& model)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open " + path.string() + " for writing");
    out << to_json(model).dump(2) << '\n';
    if (!out)
        throw Error("failed writing " + path.string());
}

Model load_model(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open model " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error("cannot parse model " + path.string() + ": " + e.what());
    }
    return model_from_json(doc);
}

} // namespace mdboost
