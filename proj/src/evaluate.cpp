#include "rankbench/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rankbench/error.hpp"
#include "rankbench/rng.hpp"

namespace rankbench {

std::string SetupSpec::name() const {
    switch (kind) {
    case SetupKind::AllPlayers: return "all_players";
    case SetupKind::TopTier: return "top_tier";
    case SetupKind::Frequent: return "frequent";
    }
    return "all_players";
}

SetupKind setup_kind_from_string(const std::string& s) {
    if (s == "all_players") return SetupKind::AllPlayers;
    if (s == "top_tier") return SetupKind::TopTier;
    if (s == "frequent") return SetupKind::Frequent;
    throw ValidationError("unknown setup kind '" + s + "'");
}

std::map<int, int> predict_ranks(const std::map<int, double>& team_values, std::mt19937_64& rng) {
    if (team_values.size() < 2) throw ValidationError("predict_ranks: need at least 2 teams");
    std::vector<std::pair<int, double>> entries(team_values.begin(), team_values.end());
    for (const auto& [slot, value] : entries) {
        if (!std::isfinite(value)) {
            throw ValidationError("predict_ranks: non-finite rating for slot " +
                                  std::to_string(slot));
        }
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });

    // Uniform random order within each run of exactly equal values.
    std::size_t i = 0;
    while (i < entries.size()) {
        std::size_t j = i + 1;
        while (j < entries.size() && entries[j].second == entries[i].second) ++j;
        if (j - i > 1) {
            std::vector<std::pair<int, double>> run(entries.begin() + static_cast<long>(i),
                                                    entries.begin() + static_cast<long>(j));
            shuffle_inplace(run, rng);
            std::copy(run.begin(), run.end(), entries.begin() + static_cast<long>(i));
        }
        i = j;
    }

    std::map<int, int> ranks;
    for (std::size_t pos = 0; pos < entries.size(); ++pos) {
        ranks[entries[pos].first] = static_cast<int>(pos) + 1;
    }
    return ranks;
}

double accuracy(std::span<const PredictionRecord> records) {
    if (records.empty()) throw ValidationError("accuracy: no evaluable matches");
    int correct = 0;
    for (const auto& record : records) {
        if (record.mode != Mode::HeadToHead) {
            throw ValidationError("accuracy: free-for-all record '" + record.match_id + "'");
        }
        int predicted_winner = -1;
        int observed_winner = -1;
        int observed_firsts = 0;
        for (const auto& [slot, rank] : record.predicted_ranks) {
            if (rank == 1) predicted_winner = slot;
        }
        for (const auto& [slot, rank] : record.observed_ranks) {
            if (rank == 1) {
                observed_winner = slot;
                observed_firsts += 1;
            }
        }
        if (observed_firsts != 1) {
            throw ValidationError("accuracy: drawn record '" + record.match_id + "'");
        }
        correct += predicted_winner == observed_winner ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(records.size());
}

double ndcg_score(std::span<const double> relevance, std::span<const std::size_t> order) {
    double dcg = 0.0;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        dcg += relevance[order[pos]] / std::log2(static_cast<double>(pos) + 2.0);
    }
    std::vector<double> ideal(relevance.begin(), relevance.end());
    std::sort(ideal.begin(), ideal.end(), std::greater<>());
    double idcg = 0.0;
    for (std::size_t pos = 0; pos < ideal.size(); ++pos) {
        idcg += ideal[pos] / std::log2(static_cast<double>(pos) + 2.0);
    }
    return idcg > 0.0 ? dcg / idcg : 1.0;
}

double ndcg(const PredictionRecord& record) {
    const std::size_t t = record.observed_ranks.size();
    if (t < 2) throw ValidationError("ndcg: need at least 2 teams");

    std::vector<int> slots;
    slots.reserve(t);
    for (const auto& [slot, rank] : record.observed_ranks) slots.push_back(slot);

    std::vector<double> relevance(t);
    for (std::size_t i = 0; i < t; ++i) {
        relevance[i] = static_cast<double>(static_cast<int>(t) -
                                           record.observed_ranks.at(slots[i]));
    }
    // order[pos] = index of the team predicted at position pos+1
    std::vector<std::size_t> order(t);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return record.predicted_ranks.at(slots[a]) < record.predicted_ranks.at(slots[b]);
    });
    return ndcg_score(relevance, order);
}

namespace {

Selection select_filtered(const std::vector<PlayerStanding>& standings, const SetupSpec& spec,
                          bool capped) {
    std::vector<const PlayerStanding*> qualified;
    for (const auto& standing : standings) {
        if (standing.games_played > spec.min_games) qualified.push_back(&standing);
    }
    std::sort(qualified.begin(), qualified.end(), [](const auto* a, const auto* b) {
        if (a->selection_value != b->selection_value) {
            return a->selection_value > b->selection_value;
        }
        return a->player < b->player;
    });
    if (capped && qualified.size() > static_cast<std::size_t>(spec.top_count)) {
        qualified.resize(static_cast<std::size_t>(spec.top_count));
    }

    Selection out;
    out.window = spec.window;
    for (const auto* standing : qualified) out.players.push_back(standing->player);
    return out;
}

} // namespace

Selection select_top_tier(const std::vector<PlayerStanding>& standings, const SetupSpec& spec) {
    return select_filtered(standings, spec, true);
}

Selection select_frequent(const std::vector<PlayerStanding>& standings, const SetupSpec& spec) {
    return select_filtered(standings, spec, false);
}

} // namespace rankbench
