#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include "rankbench/error.hpp"
#include "rankbench/gaussian.hpp"
#include "rankbench/ratings.hpp"

namespace rankbench {

namespace {

constexpr double kSigmaFloor = 1e-6;

struct MemberWork {
    double mean = 0.0;
    double var = 0.0; // sigma^2 + tau^2
    double mean_delta = 0.0;
    double var_factor = 1.0;
};

struct TeamWork {
    std::vector<std::size_t> member_index; // into the flat member array
    int rank = 1;
    double mean_sum = 0.0;
    double var_sum = 0.0;
};

// One two-team factor update accumulated into the members. Sign convention:
// `first` is the higher-ranked (or tied) side.
void apply_pair(std::vector<MemberWork>& members, const TeamWork& first, const TeamWork& second,
                bool drawn, const SystemConfig& cfg) {
    const double beta2 = cfg.trueskill_beta * cfg.trueskill_beta;
    const std::size_t n = first.member_index.size() + second.member_index.size();
    const double c2 = first.var_sum + second.var_sum + static_cast<double>(n) * beta2;
    const double c = std::sqrt(c2);
    const double draw_margin = normal_inv_cdf(0.5 * (cfg.draw_probability + 1.0)) *
                               std::sqrt(static_cast<double>(n)) * cfg.trueskill_beta;

    const double diff = (first.mean_sum - second.mean_sum) / c;
    const double margin = draw_margin / c;
    const double v = drawn ? v_draw(diff, margin) : v_win(diff, margin);
    const double w = drawn ? w_draw(diff, margin) : w_win(diff, margin);

    auto push = [&](const TeamWork& team, double sign) {
        for (std::size_t idx : team.member_index) {
            MemberWork& m = members[idx];
            m.mean_delta += sign * (m.var / c) * v;
            m.var_factor *= std::max(0.0, 1.0 - (m.var / c2) * w);
        }
    };
    push(first, +1.0);
    push(second, -1.0);
}

} // namespace

std::vector<RatedTeam<TrueSkillState>> trueskill_update(
    const std::vector<RatedTeam<TrueSkillState>>& teams, const SystemConfig& cfg) {
    const double tau2 = cfg.trueskill_tau * cfg.trueskill_tau;

    std::vector<MemberWork> members;
    std::vector<TeamWork> work(teams.size());
    for (std::size_t i = 0; i < teams.size(); ++i) {
        if (teams[i].members.empty()) throw ValidationError("trueskill_update: empty roster");
        work[i].rank = teams[i].rank;
        for (const auto& state : teams[i].members) {
            MemberWork m;
            m.mean = state.mean;
            m.var = state.sigma * state.sigma + tau2;
            work[i].member_index.push_back(members.size());
            work[i].mean_sum += m.mean;
            work[i].var_sum += m.var;
            members.push_back(m);
        }
    }

    // Rank-sorted team order; equal ranks keep input order and draw.
    std::vector<std::size_t> order(teams.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return work[a].rank < work[b].rank; });

    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        const TeamWork& hi = work[order[k]];
        const TeamWork& lo = work[order[k + 1]];
        apply_pair(members, hi, lo, hi.rank == lo.rank, cfg);
    }

    std::vector<RatedTeam<TrueSkillState>> out = teams;
    for (std::size_t i = 0; i < teams.size(); ++i) {
        for (std::size_t j = 0; j < out[i].members.size(); ++j) {
            const MemberWork& m = members[work[i].member_index[j]];
            TrueSkillState& state = out[i].members[j];
            state.mean = m.mean + m.mean_delta;
            const double sigma = std::sqrt(m.var * m.var_factor);
            if (sigma < kSigmaFloor) {
                std::cerr << "warning: trueskill sigma underflow, clamped to " << kSigmaFloor
                          << "\n";
            }
            state.sigma = std::max(kSigmaFloor, sigma);
        }
    }
    return out;
}

} // namespace rankbench
