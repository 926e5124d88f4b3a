#pragma once

#include <array>
#include <cstdint>

#include "rankbench/features.hpp"

namespace rankbench {

// Welford accumulator.
struct RunningMoments {
    int64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0; // sum of squared deviations

    void add(double x) {
        count += 1;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }
    double variance() const { return count > 0 ? m2 / static_cast<double>(count) : 0.0; }
    double stddev() const;
};

// Per-feature normalization statistics over the observed population.
struct PopulationMoments {
    std::array<RunningMoments, kFeatureCount> per_feature{};

    const RunningMoments& of(Feature f) const { return per_feature[static_cast<int>(f)]; }
};

// One new observation per feature present in the vector.
void update_moments(PopulationMoments& moments, const FeatureVector& raw);

// (x - mean) / std per feature; 0 when std is 0 or fewer than 2 observations.
// Throws if a feature in the vector has no moments entry at all.
FeatureVector zscore(const FeatureVector& raw, const PopulationMoments& moments);

} // namespace rankbench
