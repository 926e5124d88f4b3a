#include "rankbench/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "rankbench/error.hpp"
#include "rankbench/rng.hpp"

namespace rankbench {

namespace {

using nlohmann::json;

double clamp0(double v) {
    return v < 0.0 ? 0.0 : v;
}

double count0(double v) {
    return clamp0(std::round(v));
}

// Stat recipe: base + skill_gain * skill + noise_scale * eta.
RawMatchStats draw_stats(double skill, std::mt19937_64& rng) {
    auto eta = [&] { return normal_draw(rng); };
    RawMatchStats s;
    s.set(RawStat::Kills, count0(3.0 + 1.5 * skill + eta()));
    s.set(RawStat::Deaths, count0(3.0 - 1.2 * skill + eta()));
    s.set(RawStat::Headshots, count0(1.0 + 0.8 * skill + 0.6 * eta()));
    s.set(RawStat::DamageDealt, clamp0(300.0 + 120.0 * skill + 80.0 * eta()));
    s.set(RawStat::Dbno, count0(1.0 + 0.6 * skill + 0.7 * eta()));
    s.set(RawStat::MeleeKills, count0(0.5 + 0.3 * skill + 0.5 * eta()));
    s.set(RawStat::GrenadeKills, count0(0.4 + 0.25 * skill + 0.5 * eta()));
    s.set(RawStat::TimeAlive, clamp0(400.0 + 80.0 * skill + 60.0 * eta()));
    s.set(RawStat::WalkDistance, clamp0(1200.0 + 150.0 * skill + 200.0 * eta()));
    s.set(RawStat::RideDistance, clamp0(500.0 + 300.0 * eta())); // pure noise
    s.set(RawStat::KillAssists, count0(1.2 + 0.5 * skill + 0.8 * eta()));
    s.set(RawStat::FlashAssists, count0(0.5 + 0.3 * skill + 0.6 * eta()));
    s.set(RawStat::FlagSteals, count0(0.3 + 0.2 * skill + 0.5 * eta()));
    s.set(RawStat::Betrayals, count0(0.5 - 0.35 * skill + 0.6 * eta()));
    s.set(RawStat::Suicides, count0(0.4 - 0.3 * skill + 0.5 * eta()));
    s.set(RawStat::LongestSpree, count0(1.5 + 0.8 * skill + 0.8 * eta()));
    return s;
}

} // namespace

SynthConfig synth_config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& err) {
        throw ValidationError(std::string("synth config: ") + err.what());
    }
    SynthConfig cfg;
    cfg.players = j.value("players", cfg.players);
    cfg.matches = j.value("matches", cfg.matches);
    cfg.teams_per_match = j.value("teams_per_match", cfg.teams_per_match);
    cfg.team_size = j.value("team_size", cfg.team_size);
    if (j.contains("mode")) cfg.mode = mode_from_string(j.at("mode").get<std::string>());
    cfg.rank_noise = j.value("rank_noise", cfg.rank_noise);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.base_timestamp_ms = j.value("base_timestamp_ms", cfg.base_timestamp_ms);
    cfg.step_ms = j.value("step_ms", cfg.step_ms);
    return cfg;
}

MatchLog synthesize(const SynthConfig& cfg, std::map<PlayerId, double>* latent_skills) {
    if (cfg.players <= 0 || cfg.matches <= 0 || cfg.teams_per_match < 2 || cfg.team_size <= 0) {
        throw ValidationError("synth: counts must be positive and teams_per_match >= 2");
    }
    if (cfg.mode == Mode::HeadToHead && cfg.teams_per_match != 2) {
        throw ValidationError("synth: head_to_head needs exactly 2 teams per match");
    }
    const int needed = cfg.teams_per_match * cfg.team_size;
    if (needed > cfg.players) {
        throw ValidationError("synth: not enough players to fill one match");
    }

    std::mt19937_64 rng(cfg.seed);
    std::vector<double> skill(static_cast<std::size_t>(cfg.players));
    std::vector<PlayerId> ids(static_cast<std::size_t>(cfg.players));
    for (int p = 0; p < cfg.players; ++p) {
        skill[static_cast<std::size_t>(p)] = normal_draw(rng);
        std::string id = std::to_string(p + 1);
        const std::size_t pad = id.size() < 6 ? 6 - id.size() : 0;
        ids[static_cast<std::size_t>(p)] = "p" + std::string(pad, '0') + id;
    }

    if (latent_skills != nullptr) {
        latent_skills->clear();
        for (int p = 0; p < cfg.players; ++p) {
            (*latent_skills)[ids[static_cast<std::size_t>(p)]] = skill[static_cast<std::size_t>(p)];
        }
    }

    MatchLog log;
    log.dataset = "synthetic";
    log.mode = cfg.mode;

    std::vector<std::size_t> pool(static_cast<std::size_t>(cfg.players));
    std::iota(pool.begin(), pool.end(), 0);

    for (int m = 0; m < cfg.matches; ++m) {
        shuffle_inplace(pool, rng);

        MatchRecord record;
        std::string id = std::to_string(m + 1);
        const std::size_t pad = id.size() < 7 ? 7 - id.size() : 0;
        record.match_id = "m" + std::string(pad, '0') + id;
        record.timestamp_ms = cfg.base_timestamp_ms + cfg.step_ms * m;
        record.mode = cfg.mode;

        std::vector<double> strength(static_cast<std::size_t>(cfg.teams_per_match));
        std::size_t cursor = 0;
        for (int t = 0; t < cfg.teams_per_match; ++t) {
            TeamEntry team;
            team.slot = t;
            double best = -1e30;
            for (int k = 0; k < cfg.team_size; ++k) {
                const std::size_t p = pool[cursor++];
                team.members.emplace_back(ids[p], draw_stats(skill[p], rng));
                best = std::max(best, skill[p]);
            }
            strength[static_cast<std::size_t>(t)] = best + cfg.rank_noise * normal_draw(rng);
            record.teams.push_back(std::move(team));
        }

        std::vector<int> order(static_cast<std::size_t>(cfg.teams_per_match));
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            const double sa = strength[static_cast<std::size_t>(a)];
            const double sb = strength[static_cast<std::size_t>(b)];
            if (sa != sb) return sa > sb;
            return a < b;
        });
        for (std::size_t pos = 0; pos < order.size(); ++pos) {
            record.teams[static_cast<std::size_t>(order[pos])].rank = static_cast<int>(pos) + 1;
        }

        validate_match(record);
        log.matches.push_back(std::move(record));
    }
    return log;
}

} // namespace rankbench
