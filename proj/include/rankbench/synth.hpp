#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "rankbench/match_log.hpp"

namespace rankbench {

// Deterministic synthetic match-log generator. Players carry a latent skill;
// per-match stats are noisy monotone functions of it (a few intentionally
// anti-correlated or pure noise), and team ranks follow max member skill
// plus rank_noise.
struct SynthConfig {
    int players = 100;
    int matches = 500;
    int teams_per_match = 2;
    int team_size = 4;
    Mode mode = Mode::HeadToHead;
    double rank_noise = 0.4;
    uint64_t seed = 1;
    int64_t base_timestamp_ms = 1577836800000; // 2020-01-01
    int64_t step_ms = 60000;
};

SynthConfig synth_config_from_json_text(const std::string& text);

MatchLog synthesize(const SynthConfig& cfg, std::map<PlayerId, double>* latent_skills = nullptr);

} // namespace rankbench
