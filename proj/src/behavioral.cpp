#include "rankbench/behavioral.hpp"

#include <cmath>
#include <set>

#include "rankbench/error.hpp"

namespace rankbench {

std::string to_string(Provenance p) {
    return p == Provenance::Fitted ? "fitted" : "paper_fixture";
}

Provenance provenance_from_string(const std::string& s) {
    if (s == "fitted") return Provenance::Fitted;
    if (s == "paper_fixture") return Provenance::PaperFixture;
    throw ValidationError("unknown provenance '" + s + "'");
}

void FactorModel::check() const {
    std::set<Feature> assigned;
    for (const auto& factor : factors) {
        double abs_sum = 0.0;
        for (const auto& [feature, loading] : factor.loadings) {
            abs_sum += std::fabs(loading);
            if (!assigned.insert(feature).second) {
                throw ValidationError("factor model: feature '" +
                                      feature_names()[static_cast<int>(feature)] +
                                      "' appears in more than one factor");
            }
        }
        // inclusive boundary: tables print 6 decimals, so 0.999999 must pass
        if (std::fabs(abs_sum - 1.0) > 1e-6 + 1e-12) {
            throw ValidationError("factor '" + factor.name +
                                  "': normalized loadings do not sum to 1");
        }
    }
}

const FactorSpec* FactorModel::find(const std::string& name) const {
    for (const auto& factor : factors) {
        if (factor.name == name) return &factor;
    }
    return nullptr;
}

void WeightModel::check() const {
    double abs_sum = 0.0;
    for (const auto& [term, weight] : terms) abs_sum += std::fabs(weight);
    if (std::fabs(abs_sum - 1.0) > 1e-6 + 1e-12) {
        throw ValidationError("weight model: normalized weights do not sum to 1");
    }
}

double single_factor(const FeatureVector& zscored, Feature feature) {
    if (!zscored.has(feature)) {
        throw ValidationError("single_factor: feature '" +
                              feature_names()[static_cast<int>(feature)] + "' not present");
    }
    return zscored.get(feature);
}

double naive_hybrid(const FeatureVector& zscored) {
    double sum = 0.0;
    for (int i = 0; i < kFeatureCount; ++i) {
        auto idx = static_cast<std::size_t>(i);
        if (zscored.present[idx]) sum += zscored.values[idx];
    }
    return sum;
}

double factor_score(const FeatureVector& zscored, const FactorModel& model,
                    const std::string& factor_name) {
    const FactorSpec* factor = model.find(factor_name);
    if (factor == nullptr) {
        throw ValidationError("factor_score: unknown factor '" + factor_name + "'");
    }
    double sum = 0.0;
    for (const auto& [feature, loading] : factor->loadings) {
        if (!zscored.has(feature)) {
            throw ValidationError("factor_score: feature '" +
                                  feature_names()[static_cast<int>(feature)] +
                                  "' missing from vector");
        }
        sum += loading * zscored.get(feature);
    }
    return sum;
}

double weighted_hybrid(const std::map<std::string, double>& terms, const WeightModel& model) {
    double sum = 0.0;
    for (const auto& [term, weight] : model.terms) {
        auto it = terms.find(term);
        if (it == terms.end()) {
            throw ValidationError("weighted_hybrid: missing term '" + term + "'");
        }
        sum += weight * it->second;
    }
    return sum;
}

namespace {

FactorModel make_factors(const std::string& dataset,
                         std::vector<std::pair<std::string, std::vector<std::pair<Feature, double>>>> specs) {
    FactorModel model;
    model.dataset = dataset;
    model.provenance = Provenance::PaperFixture;
    for (auto& [name, loadings] : specs) {
        FactorSpec factor;
        factor.name = name;
        for (auto& [feature, loading] : loadings) factor.loadings[feature] = loading;
        model.factors.push_back(std::move(factor));
    }
    model.check();
    return model;
}

WeightModel make_weights(const std::string& dataset,
                         std::vector<std::pair<std::string, double>> terms) {
    WeightModel model;
    model.dataset = dataset;
    model.provenance = Provenance::PaperFixture;
    for (auto& [term, weight] : terms) model.terms[term] = weight;
    model.check();
    return model;
}

} // namespace

std::optional<FactorModel> fixture_factors(const std::string& dataset) {
    if (dataset == "halo_slayer") {
        return make_factors(dataset,
                            {{"skill",
                              {{Feature::KdRatio, 0.200283},
                               {Feature::KillingSpree, 0.188712},
                               {Feature::Survival, 0.178849},
                               {Feature::WinningRate, 0.171211},
                               {Feature::GrenadeKills, 0.099063},
                               {Feature::Accuracy, 0.082214},
                               {Feature::MeleeKills, 0.079668}}}});
    }
    if (dataset == "halo_ctf") {
        return make_factors(dataset,
                            {{"skill",
                              {{Feature::KdRatio, 0.293236},
                               {Feature::Accuracy, 0.234795},
                               {Feature::WinningRate, 0.192326},
                               {Feature::GrenadeKills, 0.142356},
                               {Feature::KillAssist, 0.137287}}}});
    }
    if (dataset == "csgo") {
        return make_factors(dataset,
                            {{"skill",
                              {{Feature::DamageDealt, 0.387052},
                               {Feature::KdRatio, 0.270683},
                               {Feature::Accuracy, 0.183797},
                               {Feature::WinningRate, 0.158467}}},
                             {"support",
                              {{Feature::KillAssist, 0.669590},
                               {Feature::FlashAssist, 0.330410}}}});
    }
    if (dataset == "pubg_duo") {
        return make_factors(dataset,
                            {{"skill",
                              {{Feature::DamageDealt, 0.344754},
                               {Feature::KdRatio, 0.331903},
                               {Feature::Dbno, 0.323343}}},
                             {"strategy",
                              {{Feature::Survival, 0.396166},
                               {Feature::WalkingDistance, 0.337053},
                               {Feature::RidingDistance, 0.266781}}}});
    }
    return std::nullopt;
}

std::optional<WeightModel> fixture_weights(const std::string& dataset) {
    if (dataset == "halo_slayer") {
        return make_weights(dataset, {{"skill", 0.330654},
                                      {"experience", 0.320160},
                                      {"kill_assist", 0.249425},
                                      {"betrayal", -0.065018},
                                      {"suicide", -0.034743}});
    }
    if (dataset == "halo_ctf") {
        return make_weights(dataset, {{"skill", 0.330904},
                                      {"steal", 0.249424},
                                      {"experience", 0.219003},
                                      {"betrayal", -0.076678},
                                      {"melee_kills", 0.073562},
                                      {"suicide", -0.050429}});
    }
    if (dataset == "csgo") {
        return make_weights(dataset, {{"skill", 0.552309},
                                      {"experience", 0.276699},
                                      {"support", 0.170992}});
    }
    if (dataset == "pubg_duo") {
        return make_weights(dataset, {{"strategy", 0.351819},
                                      {"experience", 0.283292},
                                      {"skill", 0.257153},
                                      {"rank_ratio", 0.107736}});
    }
    return std::nullopt;
}

std::vector<std::string> fixture_datasets() {
    return {"halo_slayer", "halo_ctf", "csgo", "pubg_duo"};
}

} // namespace rankbench
