#include <cmath>

#include "rankbench/error.hpp"
#include "rankbench/ratings.hpp"

namespace rankbench {

namespace {

constexpr double kPi = 3.14159265358979323846;

double g_of(double rd, double q) {
    return 1.0 / std::sqrt(1.0 + 3.0 * q * q * rd * rd / (kPi * kPi));
}

double expected(double r, double r_j, double g_j) {
    return 1.0 / (1.0 + std::pow(10.0, -g_j * (r - r_j) / 400.0));
}

double pair_score(int rank_i, int rank_j) {
    if (rank_i < rank_j) return 1.0;
    if (rank_i > rank_j) return 0.0;
    return 0.5;
}

// Team representative: the max-rated member carries the team's rating and RD.
const GlickoState& representative(const RatedTeam<GlickoState>& team) {
    if (team.members.empty()) throw ValidationError("glicko_update: empty roster");
    const GlickoState* best = &team.members[0];
    for (const auto& m : team.members) {
        if (m.rating > best->rating) best = &m;
    }
    return *best;
}

} // namespace

GlickoState glicko_rate(const GlickoState& state, std::span<const GlickoOpponent> opponents,
                        const SystemConfig& cfg) {
    if (opponents.empty()) return state;
    const double q = cfg.glicko_q;

    double d2_inv_acc = 0.0;
    double score_acc = 0.0;
    for (const auto& opp : opponents) {
        const double g_j = g_of(opp.deviation, q);
        const double e_j = expected(state.rating, opp.rating, g_j);
        d2_inv_acc += g_j * g_j * e_j * (1.0 - e_j);
        score_acc += g_j * (opp.score - e_j);
    }
    const double d2_inv = q * q * d2_inv_acc;
    const double rd2_inv = 1.0 / (state.deviation * state.deviation);
    const double denom = rd2_inv + d2_inv;

    GlickoState next;
    next.rating = state.rating + (q / denom) * score_acc;
    next.deviation = std::min(std::sqrt(1.0 / denom), cfg.glicko_rd_cap);
    return next;
}

GlickoState glicko_inactivity(const GlickoState& state, int periods, const SystemConfig& cfg) {
    GlickoState next = state;
    const double t = static_cast<double>(periods);
    next.deviation = std::min(
        std::sqrt(state.deviation * state.deviation + cfg.glicko_c * cfg.glicko_c * t),
        cfg.glicko_rd_cap);
    return next;
}

std::vector<RatedTeam<GlickoState>> glicko_update(const std::vector<RatedTeam<GlickoState>>& teams,
                                                  const SystemConfig& cfg) {
    const std::size_t t = teams.size();
    std::vector<GlickoState> reps(t);
    for (std::size_t i = 0; i < t; ++i) reps[i] = representative(teams[i]);

    std::vector<RatedTeam<GlickoState>> out = teams;
    for (std::size_t i = 0; i < t; ++i) {
        std::vector<GlickoOpponent> opponents;
        opponents.reserve(t - 1);
        for (std::size_t j = 0; j < t; ++j) {
            if (j == i) continue;
            opponents.push_back({reps[j].rating, reps[j].deviation,
                                 pair_score(teams[i].rank, teams[j].rank)});
        }
        for (auto& member : out[i].members) {
            member = glicko_rate(member, opponents, cfg);
        }
    }
    return out;
}

} // namespace rankbench
