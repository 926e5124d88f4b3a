#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rankbench {

using PlayerId = std::string;

enum class Mode { HeadToHead, FreeForAll };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& s);

// Per-match raw quantities recorded by the game. A dataset that does not
// record a quantity leaves it unset; unset is distinct from zero.
enum class RawStat : int {
    Kills = 0,
    Deaths,
    Headshots,
    DamageDealt,
    Dbno,
    MeleeKills,
    GrenadeKills,
    TimeAlive,
    WalkDistance,
    RideDistance,
    KillAssists,
    FlashAssists,
    FlagSteals,
    Betrayals,
    Suicides,
    LongestSpree,
};
inline constexpr int kRawStatCount = 16;

const std::array<std::string, kRawStatCount>& raw_stat_names();
std::optional<RawStat> raw_stat_from_name(const std::string& name);

struct RawMatchStats {
    std::array<double, kRawStatCount> values{};
    std::array<bool, kRawStatCount> present{};

    void set(RawStat s, double v) {
        values[static_cast<int>(s)] = v;
        present[static_cast<int>(s)] = true;
    }
    bool has(RawStat s) const { return present[static_cast<int>(s)]; }
    double get(RawStat s) const { return values[static_cast<int>(s)]; }
};

struct TeamEntry {
    int slot = 0;
    int rank = 0; // observed rank, 1 = winner; tied teams share a rank
    std::vector<std::pair<PlayerId, RawMatchStats>> members;
};

struct MatchRecord {
    std::string match_id;
    int64_t timestamp_ms = 0;
    Mode mode = Mode::HeadToHead;
    std::vector<TeamEntry> teams;

    int team_count() const { return static_cast<int>(teams.size()); }
    // Head-to-head with both teams at rank 1.
    bool is_draw() const;
};

struct TeamRating {
    int slot = 0;
    double value = 0.0;
};

// Checks every MatchRecord invariant; throws ValidationError naming the
// match_id and the violated rule. Returns the record unchanged on success.
const MatchRecord& validate_match(const MatchRecord& record);

} // namespace rankbench
