#include "rankbench/types.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "rankbench/error.hpp"

namespace rankbench {

std::string to_string(Mode mode) {
    return mode == Mode::HeadToHead ? "head_to_head" : "free_for_all";
}

Mode mode_from_string(const std::string& s) {
    if (s == "head_to_head") return Mode::HeadToHead;
    if (s == "free_for_all") return Mode::FreeForAll;
    throw ValidationError("unknown mode '" + s + "'");
}

const std::array<std::string, kRawStatCount>& raw_stat_names() {
    static const std::array<std::string, kRawStatCount> names = {
        "kills",        "deaths",       "headshots",    "damage_dealt",
        "dbno",         "melee_kills",  "grenade_kills", "time_alive",
        "walk_distance", "ride_distance", "kill_assists", "flash_assists",
        "flag_steals",  "betrayals",    "suicides",     "longest_spree",
    };
    return names;
}

std::optional<RawStat> raw_stat_from_name(const std::string& name) {
    const auto& names = raw_stat_names();
    for (int i = 0; i < kRawStatCount; ++i) {
        if (names[static_cast<std::size_t>(i)] == name) return static_cast<RawStat>(i);
    }
    return std::nullopt;
}

bool MatchRecord::is_draw() const {
    if (mode != Mode::HeadToHead || teams.size() != 2) return false;
    return teams[0].rank == teams[1].rank;
}

namespace {

[[noreturn]] void fail(const MatchRecord& r, const std::string& rule) {
    throw ValidationError("match '" + r.match_id + "': " + rule);
}

} // namespace

const MatchRecord& validate_match(const MatchRecord& record) {
    if (record.match_id.empty()) {
        throw ValidationError("match with empty match_id");
    }
    const int t = record.team_count();
    if (t < 2) fail(record, "fewer than 2 teams");
    if (record.mode == Mode::HeadToHead && t != 2) {
        fail(record, "head_to_head requires exactly 2 teams");
    }

    std::unordered_set<int> slots;
    std::unordered_set<PlayerId> seen_players;
    std::vector<int> ranks;
    ranks.reserve(record.teams.size());
    for (const auto& team : record.teams) {
        if (!slots.insert(team.slot).second) fail(record, "duplicate team slot");
        if (team.members.empty()) fail(record, "empty roster");
        ranks.push_back(team.rank);
        for (const auto& [player, stats] : team.members) {
            if (player.empty()) fail(record, "empty player id");
            if (!seen_players.insert(player).second) {
                fail(record, "duplicate player '" + player + "' across teams");
            }
            for (int i = 0; i < kRawStatCount; ++i) {
                auto idx = static_cast<std::size_t>(i);
                if (!stats.present[idx]) continue;
                const double v = stats.values[idx];
                if (!std::isfinite(v)) {
                    fail(record, "non-finite statistic '" + raw_stat_names()[idx] +
                                     "' for player '" + player + "'");
                }
                if (v < 0.0) {
                    fail(record, "negative statistic '" + raw_stat_names()[idx] +
                                     "' for player '" + player + "'");
                }
            }
        }
    }

    // Ranks must collapse to 1..T under competition ranking: sorted, the
    // first is 1 and each next either ties its predecessor or equals its
    // 1-based position.
    std::sort(ranks.begin(), ranks.end());
    if (ranks.front() != 1) fail(record, "rank set does not cover 1..T (no rank 1)");
    for (std::size_t i = 1; i < ranks.size(); ++i) {
        if (ranks[i] != ranks[i - 1] && ranks[i] != static_cast<int>(i) + 1) {
            fail(record, "rank set does not cover 1..T");
        }
    }
    return record;
}

} // namespace rankbench
