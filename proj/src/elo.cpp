#include <cmath>

#include "rankbench/error.hpp"
#include "rankbench/ratings.hpp"

namespace rankbench {

double team_rating(std::span<const double> member_values) {
    if (member_values.empty()) throw ValidationError("team_rating: empty roster");
    double best = member_values[0];
    for (double v : member_values) {
        if (v > best) best = v;
    }
    return best;
}

double elo_expected(double r_a, double r_b) {
    return 1.0 / (1.0 + std::pow(10.0, (r_b - r_a) / 400.0));
}

namespace {

double pair_score(int rank_i, int rank_j) {
    if (rank_i < rank_j) return 1.0;
    if (rank_i > rank_j) return 0.0;
    return 0.5;
}

double team_value(const RatedTeam<EloState>& team) {
    if (team.members.empty()) throw ValidationError("elo_update: empty roster");
    double best = team.members[0].rating;
    for (const auto& m : team.members) {
        if (m.rating > best) best = m.rating;
    }
    return best;
}

} // namespace

std::vector<double> elo_update(const std::vector<RatedTeam<EloState>>& teams,
                               const SystemConfig& cfg) {
    const std::size_t t = teams.size();
    std::vector<double> values(t);
    for (std::size_t i = 0; i < t; ++i) values[i] = team_value(teams[i]);

    std::vector<double> deltas(t, 0.0);
    for (std::size_t i = 0; i < t; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < t; ++j) {
            if (j == i) continue;
            const double expected = elo_expected(values[i], values[j]);
            const double score = pair_score(teams[i].rank, teams[j].rank);
            sum += cfg.elo_k * (score - expected);
        }
        deltas[i] = sum / static_cast<double>(t - 1);
    }
    return deltas;
}

} // namespace rankbench
