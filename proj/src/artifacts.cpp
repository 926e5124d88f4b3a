#include "rankbench/artifacts.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rankbench/error.hpp"

namespace rankbench {

namespace {

using nlohmann::json;

constexpr int kArtifactVersion = 1;

json parse_checked(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& err) {
        throw ValidationError(what + ": " + err.what());
    }
}

void require_schema(const json& j, const std::string& schema, const std::string& what) {
    if (j.value("schema", "") != schema) {
        throw ValidationError(what + ": bad schema header, expected '" + schema + "'");
    }
    if (j.value("version", 0) != kArtifactVersion) {
        throw ValidationError(what + ": unsupported version");
    }
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("failed writing '" + path + "'");
}

Feature feature_checked(const std::string& name, const std::string& what) {
    const auto feature = feature_from_name(name);
    if (!feature) throw ValidationError(what + ": unknown feature '" + name + "'");
    return *feature;
}

} // namespace

std::string factor_model_to_json(const FactorModel& model) {
    json factors = json::array();
    for (const auto& factor : model.factors) {
        json loadings = json::object();
        for (const auto& [feature, loading] : factor.loadings) {
            loadings[feature_names()[static_cast<int>(feature)]] = loading;
        }
        factors.push_back({{"name", factor.name}, {"loadings", loadings}});
    }
    const json j = {{"schema", "rankbench.factors"},
                    {"version", kArtifactVersion},
                    {"dataset", model.dataset},
                    {"provenance", to_string(model.provenance)},
                    {"factors", factors}};
    return j.dump(2) + "\n";
}

FactorModel factor_model_from_json(const std::string& text) {
    const json j = parse_checked(text, "factor model");
    require_schema(j, "rankbench.factors", "factor model");
    FactorModel model;
    model.dataset = j.value("dataset", "");
    model.provenance = provenance_from_string(j.at("provenance").get<std::string>());
    for (const auto& factor_json : j.at("factors")) {
        FactorSpec factor;
        factor.name = factor_json.at("name").get<std::string>();
        for (const auto& [name, loading] : factor_json.at("loadings").items()) {
            factor.loadings[feature_checked(name, "factor model")] = loading.get<double>();
        }
        model.factors.push_back(std::move(factor));
    }
    model.check();
    return model;
}

void save_factor_model(const std::string& path, const FactorModel& model) {
    spill(path, factor_model_to_json(model));
}

FactorModel load_factor_model(const std::string& path) {
    return factor_model_from_json(slurp(path));
}

std::string weight_model_to_json(const WeightModel& model) {
    json terms = json::object();
    for (const auto& [term, weight] : model.terms) terms[term] = weight;
    const json j = {{"schema", "rankbench.weights"},
                    {"version", kArtifactVersion},
                    {"dataset", model.dataset},
                    {"provenance", to_string(model.provenance)},
                    {"terms", terms}};
    return j.dump(2) + "\n";
}

WeightModel weight_model_from_json(const std::string& text) {
    const json j = parse_checked(text, "weight model");
    require_schema(j, "rankbench.weights", "weight model");
    WeightModel model;
    model.dataset = j.value("dataset", "");
    model.provenance = provenance_from_string(j.at("provenance").get<std::string>());
    for (const auto& [term, weight] : j.at("terms").items()) {
        model.terms[term] = weight.get<double>();
    }
    model.check();
    return model;
}

void save_weight_model(const std::string& path, const WeightModel& model) {
    spill(path, weight_model_to_json(model));
}

WeightModel load_weight_model(const std::string& path) {
    return weight_model_from_json(slurp(path));
}

void write_features(std::ostream& out, const FeatureExport& data) {
    json feature_list = json::array();
    for (Feature f : data.set.list()) feature_list.push_back(feature_names()[static_cast<int>(f)]);
    const json header = {{"schema", "rankbench.features"},
                         {"version", kArtifactVersion},
                         {"dataset", data.dataset},
                         {"mode", to_string(data.mode)},
                         {"features", feature_list}};
    out << header.dump() << '\n';

    const auto features = data.set.list();
    for (const auto& row : data.rows) {
        json values = json::array();
        for (Feature f : features) values.push_back(row.zscored.get(f));
        const json line = {{"match_id", row.match_id}, {"player", row.player},
                           {"rank", row.rank},         {"team_count", row.team_count},
                           {"won", row.won},           {"drawn", row.drawn},
                           {"values", values}};
        out << line.dump() << '\n';
    }
}

FeatureExport read_features(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("feature export is empty");
    const json header = parse_checked(line, "feature export header");
    require_schema(header, "rankbench.features", "feature export");

    FeatureExport data;
    data.dataset = header.value("dataset", "");
    data.mode = mode_from_string(header.at("mode").get<std::string>());
    std::vector<Feature> features;
    for (const auto& name : header.at("features")) {
        const Feature f = feature_checked(name.get<std::string>(), "feature export");
        features.push_back(f);
        data.set.available[static_cast<int>(f)] = true;
    }

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const json j = parse_checked(line, "feature export line " + std::to_string(line_no));
        DesignRow row;
        row.match_id = j.at("match_id").get<std::string>();
        row.player = j.at("player").get<std::string>();
        row.rank = j.at("rank").get<int>();
        row.team_count = j.at("team_count").get<int>();
        row.won = j.at("won").get<bool>();
        row.drawn = j.at("drawn").get<bool>();
        const auto& values = j.at("values");
        if (values.size() != features.size()) {
            throw ValidationError("feature export line " + std::to_string(line_no) +
                                  ": value count mismatch");
        }
        row.zscored.zscored = true;
        for (std::size_t i = 0; i < features.size(); ++i) {
            row.zscored.set(features[i], values[i].get<double>());
        }
        data.rows.push_back(std::move(row));
    }
    return data;
}

void save_features(const std::string& path, const FeatureExport& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_features(out, data);
    if (!out) throw IoError("failed writing '" + path + "'");
}

FeatureExport load_features(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_features(in);
}

} // namespace rankbench
