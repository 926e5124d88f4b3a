#include "rankbench/features.hpp"

#include <algorithm>

#include "rankbench/error.hpp"

namespace rankbench {

const std::array<std::string, kFeatureCount>& feature_names() {
    static const std::array<std::string, kFeatureCount> names = {
        "kd_ratio",      "killing_spree", "damage_dealt",   "accuracy",
        "dbno",          "melee_kills",   "grenade_kills",  "winning_rate",
        "rank_ratio",    "survival",      "walking_distance", "riding_distance",
        "kill_assist",   "flash_assist",  "steal",          "betrayal",
        "suicide",       "experience",
    };
    return names;
}

std::optional<Feature> feature_from_name(const std::string& name) {
    const auto& names = feature_names();
    for (int i = 0; i < kFeatureCount; ++i) {
        if (names[static_cast<std::size_t>(i)] == name) return static_cast<Feature>(i);
    }
    return std::nullopt;
}

std::vector<Feature> FeatureSet::list() const {
    std::vector<Feature> out;
    for (int i = 0; i < kFeatureCount; ++i) {
        if (available[static_cast<std::size_t>(i)]) out.push_back(static_cast<Feature>(i));
    }
    return out;
}

namespace {

// Averaged features backed 1:1 by a raw stat.
struct StatFeature {
    Feature feature;
    RawStat stat;
};

constexpr StatFeature kStatFeatures[] = {
    {Feature::KillingSpree, RawStat::LongestSpree},
    {Feature::DamageDealt, RawStat::DamageDealt},
    {Feature::Accuracy, RawStat::Headshots},
    {Feature::Dbno, RawStat::Dbno},
    {Feature::MeleeKills, RawStat::MeleeKills},
    {Feature::GrenadeKills, RawStat::GrenadeKills},
    {Feature::Survival, RawStat::TimeAlive},
    {Feature::WalkingDistance, RawStat::WalkDistance},
    {Feature::RidingDistance, RawStat::RideDistance},
    {Feature::KillAssist, RawStat::KillAssists},
    {Feature::FlashAssist, RawStat::FlashAssists},
    {Feature::Steal, RawStat::FlagSteals},
    {Feature::Betrayal, RawStat::Betrayals},
    {Feature::Suicide, RawStat::Suicides},
};

} // namespace

FeatureSet FeatureSet::from_raw_stats(const std::array<bool, kRawStatCount>& stats, Mode mode) {
    FeatureSet set;
    auto has = [&](RawStat s) { return stats[static_cast<std::size_t>(static_cast<int>(s))]; };
    for (const auto& sf : kStatFeatures) {
        if (has(sf.stat)) set.available[static_cast<int>(sf.feature)] = true;
    }
    if (has(RawStat::Kills) && has(RawStat::Deaths)) {
        set.available[static_cast<int>(Feature::KdRatio)] = true;
    }
    set.available[static_cast<int>(Feature::WinningRate)] = true;
    set.available[static_cast<int>(Feature::Experience)] = true;
    if (mode == Mode::FreeForAll) {
        set.available[static_cast<int>(Feature::RankRatio)] = true;
    }
    return set;
}

double rank_percentile(int rank, int team_count) {
    if (team_count < 2) throw ValidationError("rank_percentile requires at least 2 teams");
    if (rank < 1 || rank > team_count) {
        throw ValidationError("rank " + std::to_string(rank) + " outside 1.." +
                              std::to_string(team_count));
    }
    return 1.0 - static_cast<double>(rank - 1) / static_cast<double>(team_count - 1);
}

void update_profile(PlayerProfile& profile, const RawMatchStats& stats, const MatchContext& ctx) {
    profile.games_played += 1;
    if (ctx.won) profile.wins += 1;
    for (int i = 0; i < kRawStatCount; ++i) {
        auto idx = static_cast<std::size_t>(i);
        if (stats.present[idx]) profile.totals[idx] += stats.values[idx];
    }
    if (ctx.mode == Mode::FreeForAll) {
        profile.rank_percentile_sum += rank_percentile(ctx.rank, ctx.team_count);
    }
}

FeatureVector derive_features(const PlayerProfile& profile, const FeatureSet& set) {
    FeatureVector vec;
    const double games = static_cast<double>(std::max<int64_t>(1, profile.games_played));
    auto total = [&](RawStat s) { return profile.totals[static_cast<std::size_t>(static_cast<int>(s))]; };

    for (const auto& sf : kStatFeatures) {
        if (set.has(sf.feature)) vec.set(sf.feature, total(sf.stat) / games);
    }
    if (set.has(Feature::KdRatio)) {
        vec.set(Feature::KdRatio, total(RawStat::Kills) / std::max(1.0, total(RawStat::Deaths)));
    }
    if (set.has(Feature::WinningRate)) {
        vec.set(Feature::WinningRate, static_cast<double>(profile.wins) / games);
    }
    if (set.has(Feature::RankRatio)) {
        vec.set(Feature::RankRatio, profile.rank_percentile_sum / games);
    }
    if (set.has(Feature::Experience)) {
        vec.set(Feature::Experience, static_cast<double>(profile.games_played));
    }
    return vec;
}

} // namespace rankbench
