#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rankbench/types.hpp"

namespace rankbench {

enum class Feature : int {
    KdRatio = 0,
    KillingSpree,
    DamageDealt,
    Accuracy,
    Dbno,
    MeleeKills,
    GrenadeKills,
    WinningRate,
    RankRatio,
    Survival,
    WalkingDistance,
    RidingDistance,
    KillAssist,
    FlashAssist,
    Steal,
    Betrayal,
    Suicide,
    Experience,
};
inline constexpr int kFeatureCount = 18;

const std::array<std::string, kFeatureCount>& feature_names();
std::optional<Feature> feature_from_name(const std::string& name);

// The features a dataset can derive, given which raw stats it records and
// whether its matches are free-for-all (rank_ratio needs multi-team ranks).
struct FeatureSet {
    std::array<bool, kFeatureCount> available{};

    bool has(Feature f) const { return available[static_cast<int>(f)]; }
    std::vector<Feature> list() const;
    static FeatureSet from_raw_stats(const std::array<bool, kRawStatCount>& stats, Mode mode);
};

struct FeatureVector {
    std::array<double, kFeatureCount> values{};
    std::array<bool, kFeatureCount> present{};
    bool zscored = false;

    void set(Feature f, double v) {
        values[static_cast<int>(f)] = v;
        present[static_cast<int>(f)] = true;
    }
    bool has(Feature f) const { return present[static_cast<int>(f)]; }
    double get(Feature f) const { return values[static_cast<int>(f)]; }
};

// Running per-player aggregates. Starts all-zero; new players rate 0.
struct PlayerProfile {
    int64_t games_played = 0;
    int64_t wins = 0;
    std::array<double, kRawStatCount> totals{};
    double rank_percentile_sum = 0.0; // free-for-all only
};

struct MatchContext {
    int rank = 1;
    int team_count = 2;
    bool won = false;
    Mode mode = Mode::HeadToHead;
};

// 1 - (rank-1)/(T-1); 1 = winner, 0 = last. Throws on rank outside 1..T.
double rank_percentile(int rank, int team_count);

void update_profile(PlayerProfile& profile, const RawMatchStats& stats, const MatchContext& ctx);

// Raw feature values for one profile. Averages divide by max(1, games) and
// KD by max(1, deaths) so a zero-game profile derives to all zeros.
FeatureVector derive_features(const PlayerProfile& profile, const FeatureSet& set);

} // namespace rankbench
