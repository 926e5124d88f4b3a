#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rankbench/behavioral.hpp"
#include "rankbench/features.hpp"
#include "rankbench/replay.hpp"

namespace rankbench {

std::string factor_model_to_json(const FactorModel& model);
FactorModel factor_model_from_json(const std::string& text);
void save_factor_model(const std::string& path, const FactorModel& model);
FactorModel load_factor_model(const std::string& path);

std::string weight_model_to_json(const WeightModel& model);
WeightModel weight_model_from_json(const std::string& text);
void save_weight_model(const std::string& path, const WeightModel& model);
WeightModel load_weight_model(const std::string& path);

// Feature-export file: one header line naming the exported feature columns,
// then one line per player-match observation.
struct FeatureExport {
    std::string dataset;
    Mode mode = Mode::HeadToHead;
    FeatureSet set;
    std::vector<DesignRow> rows;
};

void write_features(std::ostream& out, const FeatureExport& data);
FeatureExport read_features(std::istream& in);
void save_features(const std::string& path, const FeatureExport& data);
FeatureExport load_features(const std::string& path);

} // namespace rankbench
