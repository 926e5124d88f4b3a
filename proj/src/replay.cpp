#include "rankbench/replay.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rankbench/error.hpp"
#include "rankbench/rng.hpp"

namespace rankbench {

SourceSpec SourceSpec::parse(const std::string& id) {
    SourceSpec spec;
    spec.id = id;
    if (id == "elo") {
        spec.kind = Kind::Elo;
    } else if (id == "glicko") {
        spec.kind = Kind::Glicko;
    } else if (id == "trueskill") {
        spec.kind = Kind::TrueSkill;
    } else if (id == "naive") {
        spec.kind = Kind::NaiveHybrid;
    } else if (id == "weighted") {
        spec.kind = Kind::WeightedHybrid;
    } else if (id.rfind("mu:", 0) == 0) {
        const auto feature = feature_from_name(id.substr(3));
        if (!feature) throw ValidationError("unknown source id '" + id + "'");
        spec.kind = Kind::SingleFeature;
        spec.feature = *feature;
    } else {
        throw ValidationError("unknown source id '" + id + "'");
    }
    return spec;
}

std::vector<PlayerStanding> ReplayResult::standings() const {
    std::vector<PlayerStanding> out;
    out.reserve(profiles.size());
    for (const auto& [player, profile] : profiles) {
        PlayerStanding standing;
        standing.player = player;
        standing.games_played = profile.games_played;
        auto it = trueskill.find(player);
        standing.selection_value =
            it != trueskill.end() ? it->second.conservative() : TrueSkillState{}.conservative();
        out.push_back(std::move(standing));
    }
    return out;
}

ReplayEngine::ReplayEngine(ReplayConfig cfg) : cfg_(std::move(cfg)) {
    result_.dataset = cfg_.dataset;
    result_.mode = cfg_.mode;
    for (const auto& source : cfg_.sources) {
        result_.source_ids.push_back(source.id);
        if (source.kind == SourceSpec::Kind::SingleFeature &&
            !cfg_.features.has(source.feature)) {
            throw ValidationError("source '" + source.id + "' needs feature '" +
                                  feature_names()[static_cast<int>(source.feature)] +
                                  "', unavailable in dataset '" + cfg_.dataset + "'");
        }
        if (source.kind == SourceSpec::Kind::WeightedHybrid) {
            if (!cfg_.weights) {
                throw ValidationError("source 'weighted' requires a weight model");
            }
            cfg_.weights->check();
            for (const auto& [term, weight] : cfg_.weights->terms) {
                const bool is_factor = cfg_.factors && cfg_.factors->find(term) != nullptr;
                const auto feature = feature_from_name(term);
                const bool is_feature = feature && cfg_.features.has(*feature);
                if (!is_factor && !is_feature) {
                    throw ValidationError("weight model term '" + term +
                                          "' is neither a fitted factor nor an available feature");
                }
            }
            if (cfg_.factors) cfg_.factors->check();
        }
    }
}

double ReplayEngine::source_value(const SourceSpec& source, const PlayerId& player,
                                  const FeatureVector& zscored) const {
    switch (source.kind) {
    case SourceSpec::Kind::Elo: {
        auto it = result_.elo.find(player);
        return it != result_.elo.end() ? it->second.rating : EloState{}.rating;
    }
    case SourceSpec::Kind::Glicko: {
        auto it = result_.glicko.find(player);
        return it != result_.glicko.end() ? it->second.rating : GlickoState{}.rating;
    }
    case SourceSpec::Kind::TrueSkill: {
        auto it = result_.trueskill.find(player);
        return it != result_.trueskill.end() ? it->second.conservative()
                                             : TrueSkillState{}.conservative();
    }
    case SourceSpec::Kind::SingleFeature:
        return single_factor(zscored, source.feature);
    case SourceSpec::Kind::NaiveHybrid:
        return naive_hybrid(zscored);
    case SourceSpec::Kind::WeightedHybrid: {
        std::map<std::string, double> terms;
        for (const auto& [term, weight] : cfg_.weights->terms) {
            if (cfg_.factors && cfg_.factors->find(term) != nullptr) {
                terms[term] = factor_score(zscored, *cfg_.factors, term);
            } else {
                terms[term] = single_factor(zscored, *feature_from_name(term));
            }
        }
        return weighted_hybrid(terms, *cfg_.weights);
    }
    }
    return 0.0;
}

void ReplayEngine::refresh_snapshot() {
    snapshot_moments_ = PopulationMoments{};
    for (const auto& [player, profile] : result_.profiles) {
        update_moments(snapshot_moments_, derive_features(profile, cfg_.features));
    }
}

void ReplayEngine::process(const MatchRecord& match) {
    validate_match(match);
    if (any_processed_) {
        const bool ordered = match.timestamp_ms > last_timestamp_ ||
                             (match.timestamp_ms == last_timestamp_ &&
                              match.match_id > last_match_id_);
        if (!ordered) {
            throw ValidationError("replay input unsorted at match '" + match.match_id + "'");
        }
    }
    any_processed_ = true;
    last_timestamp_ = match.timestamp_ms;
    last_match_id_ = match.match_id;

    const PopulationMoments& norm =
        cfg_.zscore.mode == ZscoreConfig::Mode::Incremental ? live_moments_ : snapshot_moments_;

    // Pre-match feature snapshot per participant.
    std::map<PlayerId, FeatureVector> zscores;
    for (const auto& team : match.teams) {
        for (const auto& [player, stats] : team.members) {
            const PlayerProfile& profile = result_.profiles[player]; // default when unseen
            FeatureVector raw = derive_features(profile, cfg_.features);
            FeatureVector z;
            z.zscored = true;
            for (int i = 0; i < kFeatureCount; ++i) {
                auto idx = static_cast<std::size_t>(i);
                if (!raw.present[idx]) continue;
                const RunningMoments& m = norm.per_feature[idx];
                double value = 0.0;
                if (m.count >= 2) {
                    const double sd = m.stddev();
                    if (sd > 0.0) value = (raw.values[idx] - m.mean) / sd;
                }
                z.values[idx] = value;
                z.present[idx] = true;
            }
            zscores[player] = z;
        }
    }

    // Predictions, one record per source.
    for (const auto& source : cfg_.sources) {
        PredictionRecord record;
        record.match_id = match.match_id;
        record.source_id = source.id;
        record.mode = match.mode;
        for (const auto& team : match.teams) {
            std::vector<double> values;
            values.reserve(team.members.size());
            for (const auto& [player, stats] : team.members) {
                values.push_back(source_value(source, player, zscores[player]));
            }
            record.team_values[team.slot] = team_rating(values);
            record.observed_ranks[team.slot] = team.rank;
        }
        record.tie_break_seed = derive_seed(cfg_.seed, source.id, match.match_id);
        std::mt19937_64 rng(record.tie_break_seed);
        record.predicted_ranks = predict_ranks(record.team_values, rng);
        result_.records.push_back(std::move(record));
    }

    // Design rows use the same pre-match snapshot the sources saw.
    const bool drawn = match.is_draw();
    int rank_one_teams = 0;
    for (const auto& team : match.teams) {
        if (team.rank == 1) rank_one_teams += 1;
    }
    if (cfg_.collect_design_rows) {
        for (const auto& team : match.teams) {
            for (const auto& [player, stats] : team.members) {
                const PlayerProfile& profile = result_.profiles[player];
                if (profile.games_played < cfg_.design_min_games) continue;
                DesignRow row;
                row.match_id = match.match_id;
                row.player = player;
                row.zscored = zscores[player];
                row.rank = team.rank;
                row.team_count = match.team_count();
                row.won = team.rank == 1 && rank_one_teams == 1;
                row.drawn = drawn;
                result_.design_rows.push_back(std::move(row));
            }
        }
    }

    // Rating-system updates.
    {
        std::vector<RatedTeam<EloState>> elo_teams;
        std::vector<RatedTeam<GlickoState>> glicko_teams;
        std::vector<RatedTeam<TrueSkillState>> ts_teams;
        for (const auto& team : match.teams) {
            RatedTeam<EloState> e;
            RatedTeam<GlickoState> g;
            RatedTeam<TrueSkillState> t;
            e.rank = g.rank = t.rank = team.rank;
            for (const auto& [player, stats] : team.members) {
                e.members.push_back(result_.elo.try_emplace(player).first->second);
                g.members.push_back(result_.glicko.try_emplace(player).first->second);
                t.members.push_back(result_.trueskill.try_emplace(player).first->second);
            }
            elo_teams.push_back(std::move(e));
            glicko_teams.push_back(std::move(g));
            ts_teams.push_back(std::move(t));
        }
        const std::vector<double> deltas = elo_update(elo_teams, cfg_.systems);
        const auto glicko_next = glicko_update(glicko_teams, cfg_.systems);
        const auto ts_next = trueskill_update(ts_teams, cfg_.systems);
        for (std::size_t i = 0; i < match.teams.size(); ++i) {
            const auto& team = match.teams[i];
            for (std::size_t j = 0; j < team.members.size(); ++j) {
                const PlayerId& player = team.members[j].first;
                result_.elo[player].rating += deltas[i];
                result_.glicko[player] = glicko_next[i].members[j];
                result_.trueskill[player] = ts_next[i].members[j];
            }
        }
    }

    // Profile and moment updates.
    MatchTrace trace;
    trace.match_id = match.match_id;
    trace.mode = match.mode;
    trace.drawn = drawn;
    for (const auto& team : match.teams) {
        for (const auto& [player, stats] : team.members) {
            PlayerProfile& profile = result_.profiles[player];
            MatchContext ctx;
            ctx.rank = team.rank;
            ctx.team_count = match.team_count();
            ctx.won = team.rank == 1 && rank_one_teams == 1;
            ctx.mode = match.mode;
            update_profile(profile, stats, ctx);
            trace.player_games.emplace_back(player, profile.games_played);
            if (cfg_.zscore.mode == ZscoreConfig::Mode::Incremental) {
                update_moments(live_moments_, derive_features(profile, cfg_.features));
            }
        }
    }
    result_.matches.push_back(std::move(trace));

    matches_seen_ += 1;
    if (cfg_.zscore.mode == ZscoreConfig::Mode::Snapshot &&
        matches_seen_ % cfg_.zscore.snapshot_interval == 0) {
        refresh_snapshot();
    }
    result_.moments =
        cfg_.zscore.mode == ZscoreConfig::Mode::Incremental ? live_moments_ : snapshot_moments_;
}

ReplayResult run_replay(std::span<const MatchRecord> matches, const ReplayConfig& cfg) {
    ReplayEngine engine(cfg);
    for (const auto& match : matches) engine.process(match);
    return engine.take_result();
}

SetupReport score_setup(const ReplayResult& result, const SetupSpec& spec) {
    SetupReport report;
    report.name = spec.name();
    report.metric = result.mode == Mode::FreeForAll ? "ndcg" : "accuracy";

    std::vector<bool> qualifies(result.matches.size(), true);
    if (spec.kind != SetupKind::AllPlayers) {
        const auto standings = result.standings();
        const Selection selection = spec.kind == SetupKind::TopTier
                                        ? select_top_tier(standings, spec)
                                        : select_frequent(standings, spec);
        report.players_selected = static_cast<int>(selection.players.size());
        const std::set<PlayerId> selected(selection.players.begin(), selection.players.end());
        for (std::size_t i = 0; i < result.matches.size(); ++i) {
            bool in_window = false;
            for (const auto& [player, game] : result.matches[i].player_games) {
                if (game <= selection.window && selected.count(player) > 0) {
                    in_window = true;
                    break;
                }
            }
            qualifies[i] = in_window;
        }
    }

    const std::size_t n_sources = result.source_ids.size();
    for (std::size_t s = 0; s < n_sources; ++s) {
        const std::string& source = result.source_ids[s];
        std::vector<PredictionRecord> scored;
        for (std::size_t i = 0; i < result.matches.size(); ++i) {
            if (!qualifies[i]) continue;
            if (result.mode != Mode::FreeForAll && result.matches[i].drawn) continue;
            scored.push_back(result.records[i * n_sources + s]);
        }
        if (s == 0) report.matches_scored = static_cast<int>(scored.size());
        if (scored.empty()) {
            report.scores[source] = std::nullopt;
            continue;
        }
        if (result.mode == Mode::FreeForAll) {
            double total = 0.0;
            for (const auto& record : scored) total += ndcg(record);
            report.scores[source] = total / static_cast<double>(scored.size());
        } else {
            report.scores[source] = accuracy(scored);
        }
    }
    return report;
}

DesignMatrix features_design(std::span<const DesignRow> rows, const FeatureSet& set) {
    DesignMatrix out;
    const auto features = set.list();
    for (Feature f : features) out.column_ids.push_back(feature_names()[static_cast<int>(f)]);
    out.values.reserve(rows.size() * features.size());
    for (const auto& row : rows) {
        for (Feature f : features) out.values.push_back(row.zscored.get(f));
        out.group.push_back(row.match_id);
    }
    return out;
}

DesignMatrix regression_design(std::span<const DesignRow> rows, const FeatureSet& set,
                               const FactorModel& factors, Mode mode, int ordinal_levels) {
    DesignMatrix out;
    std::set<Feature> absorbed;
    for (const auto& factor : factors.factors) {
        out.column_ids.push_back(factor.name);
        for (const auto& [feature, loading] : factor.loadings) absorbed.insert(feature);
    }
    std::vector<Feature> loose;
    for (Feature f : set.list()) {
        if (absorbed.count(f) == 0) {
            loose.push_back(f);
            out.column_ids.push_back(feature_names()[static_cast<int>(f)]);
        }
    }

    for (const auto& row : rows) {
        if (mode == Mode::HeadToHead && row.drawn) continue;
        for (const auto& factor : factors.factors) {
            out.values.push_back(factor_score(row.zscored, factors, factor.name));
        }
        for (Feature f : loose) out.values.push_back(row.zscored.get(f));
        if (mode == Mode::HeadToHead) {
            out.target.push_back(row.won ? 1 : 0);
        } else {
            const double percentile = rank_percentile(row.rank, row.team_count);
            const int level = 1 + std::min(ordinal_levels - 1,
                                           static_cast<int>(percentile *
                                                            static_cast<double>(ordinal_levels)));
            out.target.push_back(level);
        }
        out.group.push_back(row.match_id);
        out.observed_rank.push_back(row.rank);
        out.group_team_count.push_back(row.team_count);
    }
    return out;
}

} // namespace rankbench
