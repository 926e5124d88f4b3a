#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rankbench/features.hpp"

namespace rankbench {

enum class Provenance { Fitted, PaperFixture };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

struct FactorSpec {
    std::string name;
    std::map<Feature, double> loadings; // normalized, sum of |.| == 1
};

// Invariants: per factor sum |loading| == 1 (1e-6); each feature belongs to
// at most one factor. check() throws on violation.
struct FactorModel {
    std::string dataset;
    Provenance provenance = Provenance::Fitted;
    std::vector<FactorSpec> factors;

    void check() const;
    const FactorSpec* find(const std::string& name) const;
};

// Term ids are factor names or feature ids; sum |weight| == 1 (1e-6).
struct WeightModel {
    std::string dataset;
    Provenance provenance = Provenance::Fitted;
    std::map<std::string, double> terms;

    void check() const;
};

// mu: the normalized feature value itself. Throws on a feature absent from
// the vector.
double single_factor(const FeatureVector& zscored, Feature feature);

// eta: plain sum of every present normalized feature value.
double naive_hybrid(const FeatureVector& zscored);

// F: loading-weighted sum of the factor's features. Throws on unknown
// factor or a missing underlying feature.
double factor_score(const FeatureVector& zscored, const FactorModel& model,
                    const std::string& factor_name);

// Omega: weight-weighted sum over precomputed terms. Throws on a missing term.
double weighted_hybrid(const std::map<std::string, double>& terms, const WeightModel& model);

// Loading and weight tables shipped as versioned fixtures, keyed by dataset
// schema name (halo_slayer, halo_ctf, csgo, pubg_duo).
std::optional<FactorModel> fixture_factors(const std::string& dataset);
std::optional<WeightModel> fixture_weights(const std::string& dataset);
std::vector<std::string> fixture_datasets();

} // namespace rankbench
