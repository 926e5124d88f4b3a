#pragma once

#include <span>
#include <vector>

namespace rankbench {

struct EloState {
    double rating = 1500.0;
};

struct GlickoState {
    double rating = 1500.0;
    double deviation = 350.0;
};

struct TrueSkillState {
    double mean = 25.0;
    double sigma = 25.0 / 3.0;

    // Leaderboard / selection scalar.
    double conservative() const { return mean - 3.0 * sigma; }
};

struct SystemConfig {
    double elo_k = 32.0;
    double glicko_q = 0.0057564627324851145; // ln(10)/400
    double glicko_c = 34.64101615137755;     // RD 50 -> 350 over ~100 idle periods
    double glicko_rd_cap = 350.0;
    double trueskill_beta = 25.0 / 6.0;
    double trueskill_tau = 25.0 / 300.0;
    double draw_probability = 0.10;
};

// One competing team, ordered member states plus the observed rank.
template <typename State>
struct RatedTeam {
    std::vector<State> members;
    int rank = 1;
};

// Max of member values. Empty rosters are rejected upstream by validation;
// here it is an assertion-level contract.
double team_rating(std::span<const double> member_values);

// --- Elo ---

double elo_expected(double r_a, double r_b);

// Per-team rating delta, applied uniformly to every member. Head-to-head is
// K*(S - E) against the opposing team rating; free-for-all decomposes into
// pairwise games and averages the deltas over the T-1 pairings.
std::vector<double> elo_update(const std::vector<RatedTeam<EloState>>& teams,
                               const SystemConfig& cfg);

// --- Glicko-1 ---

struct GlickoOpponent {
    double rating = 1500.0;
    double deviation = 350.0;
    double score = 0.0; // 1 win, 0.5 draw, 0 loss
};

// One rating period for one player against a series of opponents.
GlickoState glicko_rate(const GlickoState& state, std::span<const GlickoOpponent> opponents,
                        const SystemConfig& cfg);

// RD growth across idle periods, capped.
GlickoState glicko_inactivity(const GlickoState& state, int periods, const SystemConfig& cfg);

// Each member runs one rating period against the opposing teams'
// representatives (the max-rated member of each other team); free-for-all
// puts the T-1 pairings in that single period.
std::vector<RatedTeam<GlickoState>> glicko_update(const std::vector<RatedTeam<GlickoState>>& teams,
                                                  const SystemConfig& cfg);

// --- TrueSkill ---

// Two-team exact mean/variance update; multi-team applies the adjacent-pairs
// chain over the rank-sorted teams. Team performance is the sum over member
// means; each member moves in proportion to its variance share. Sigma is
// clamped at 1e-6 from below.
std::vector<RatedTeam<TrueSkillState>> trueskill_update(
    const std::vector<RatedTeam<TrueSkillState>>& teams, const SystemConfig& cfg);

} // namespace rankbench
