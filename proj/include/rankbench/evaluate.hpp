#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "rankbench/types.hpp"

namespace rankbench {

struct PredictionRecord {
    std::string match_id;
    std::string source_id;
    Mode mode = Mode::HeadToHead;
    std::map<int, int> predicted_ranks; // slot -> rank, permutation of 1..T
    std::map<int, int> observed_ranks;  // slot -> rank, ties share a rank
    std::map<int, double> team_values;  // pre-match ratings
    uint64_t tie_break_seed = 0;
};

enum class SetupKind { AllPlayers, TopTier, Frequent };

struct SetupSpec {
    SetupKind kind = SetupKind::AllPlayers;
    int top_count = 50;  // top_tier
    int min_games = 10;  // strict: selected players played MORE than this
    int window = 10;     // evaluate each selected player's first N games

    static SetupSpec all_players() { return {SetupKind::AllPlayers, 0, 0, 0}; }
    static SetupSpec top_tier() { return {SetupKind::TopTier, 50, 10, 10}; }
    static SetupSpec frequent() { return {SetupKind::Frequent, 0, 100, 100}; }
    std::string name() const;
};

SetupKind setup_kind_from_string(const std::string& s);

// Descending sort of team values into ranks 1..T; exact ties are permuted
// uniformly by the provided stream. Throws on non-finite values or T < 2.
std::map<int, int> predict_ranks(const std::map<int, double>& team_values, std::mt19937_64& rng);

// Fraction of head-to-head records whose predicted winner matches the
// observed winner. Throws on free-for-all or drawn records, or empty input.
double accuracy(std::span<const PredictionRecord> records);

// relevance[i] scored at predicted position order[i]; discount log2(pos+1).
double ndcg_score(std::span<const double> relevance, std::span<const std::size_t> order);

// NDCG of one free-for-all record with relevance T - observed_rank.
double ndcg(const PredictionRecord& record);

struct PlayerStanding {
    PlayerId player;
    int64_t games_played = 0;
    double selection_value = 0.0; // conservative TrueSkill
};

struct Selection {
    std::vector<PlayerId> players;
    int window = 0; // per-player first-N-games evaluation window
};

// Top `top_count` by conservative TrueSkill among players with strictly more
// than `min_games`; all qualifiers when fewer. Ties order by player id.
Selection select_top_tier(const std::vector<PlayerStanding>& standings, const SetupSpec& spec);

// Everyone with strictly more than `min_games`.
Selection select_frequent(const std::vector<PlayerStanding>& standings, const SetupSpec& spec);

} // namespace rankbench
