#include "rankbench/moments.hpp"

#include <cmath>

#include "rankbench/error.hpp"

namespace rankbench {

double RunningMoments::stddev() const {
    return std::sqrt(variance());
}

void update_moments(PopulationMoments& moments, const FeatureVector& raw) {
    for (int i = 0; i < kFeatureCount; ++i) {
        auto idx = static_cast<std::size_t>(i);
        if (raw.present[idx]) moments.per_feature[idx].add(raw.values[idx]);
    }
}

FeatureVector zscore(const FeatureVector& raw, const PopulationMoments& moments) {
    FeatureVector out;
    out.zscored = true;
    for (int i = 0; i < kFeatureCount; ++i) {
        auto idx = static_cast<std::size_t>(i);
        if (!raw.present[idx]) continue;
        const RunningMoments& m = moments.per_feature[idx];
        if (m.count == 0) {
            throw ValidationError("zscore: no moments for feature '" + feature_names()[idx] + "'");
        }
        const double sd = m.stddev();
        double z = 0.0;
        if (m.count >= 2 && sd > 0.0) {
            z = (raw.values[idx] - m.mean) / sd;
        }
        out.values[idx] = z;
        out.present[idx] = true;
    }
    return out;
}

} // namespace rankbench
