#pragma once

#include <string>
#include <vector>

#include "rankbench/types.hpp"

namespace rankbench::testutil {

inline RawMatchStats stats_kd(double kills, double deaths) {
    RawMatchStats s;
    s.set(RawStat::Kills, kills);
    s.set(RawStat::Deaths, deaths);
    return s;
}

// Two-team match with one player per side and a decisive outcome.
inline MatchRecord duel(const std::string& id, int64_t ts, const PlayerId& winner,
                        const PlayerId& loser) {
    MatchRecord m;
    m.match_id = id;
    m.timestamp_ms = ts;
    m.mode = Mode::HeadToHead;
    TeamEntry a;
    a.slot = 0;
    a.rank = 1;
    a.members.emplace_back(winner, stats_kd(5, 2));
    TeamEntry b;
    b.slot = 1;
    b.rank = 2;
    b.members.emplace_back(loser, stats_kd(2, 5));
    m.teams = {a, b};
    return m;
}

inline MatchRecord match_with_ranks(const std::string& id, Mode mode,
                                    const std::vector<std::vector<PlayerId>>& rosters,
                                    const std::vector<int>& ranks) {
    MatchRecord m;
    m.match_id = id;
    m.timestamp_ms = 1000;
    m.mode = mode;
    for (std::size_t t = 0; t < rosters.size(); ++t) {
        TeamEntry team;
        team.slot = static_cast<int>(t);
        team.rank = ranks[t];
        for (const auto& p : rosters[t]) team.members.emplace_back(p, stats_kd(1, 1));
        m.teams.push_back(std::move(team));
    }
    return m;
}

} // namespace rankbench::testutil
