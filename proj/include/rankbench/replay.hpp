#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rankbench/behavioral.hpp"
#include "rankbench/design.hpp"
#include "rankbench/evaluate.hpp"
#include "rankbench/features.hpp"
#include "rankbench/moments.hpp"
#include "rankbench/ratings.hpp"
#include "rankbench/types.hpp"

namespace rankbench {

struct ZscoreConfig {
    enum class Mode { Incremental, Snapshot };
    Mode mode = Mode::Incremental;
    int snapshot_interval = 1000;
};

// A rating stream to predict from: a classical system or a behavioral rating.
struct SourceSpec {
    enum class Kind { Elo, Glicko, TrueSkill, SingleFeature, NaiveHybrid, WeightedHybrid };
    Kind kind = Kind::Elo;
    Feature feature = Feature::KdRatio; // SingleFeature only
    std::string id;

    // "elo" | "glicko" | "trueskill" | "naive" | "weighted" | "mu:<feature>"
    static SourceSpec parse(const std::string& id);
};

struct ReplayConfig {
    std::string dataset;
    Mode mode = Mode::HeadToHead;
    FeatureSet features;
    SystemConfig systems;
    ZscoreConfig zscore;
    uint64_t seed = 0;
    std::vector<SourceSpec> sources;
    std::optional<FactorModel> factors; // WeightedHybrid inputs
    std::optional<WeightModel> weights;
    bool collect_design_rows = false;
    int64_t design_min_games = 1; // pre-match games required to emit a row
};

// Pre-match feature snapshot of one participant, plus the match outcome.
struct DesignRow {
    std::string match_id;
    PlayerId player;
    FeatureVector zscored;
    int rank = 1;
    int team_count = 2;
    bool won = false;
    bool drawn = false;
};

struct MatchTrace {
    std::string match_id;
    Mode mode = Mode::HeadToHead;
    bool drawn = false;
    std::vector<std::pair<PlayerId, int64_t>> player_games; // game number, 1-based
};

struct ReplayResult {
    std::string dataset;
    Mode mode = Mode::HeadToHead;
    std::vector<std::string> source_ids;
    std::vector<MatchTrace> matches;
    std::vector<PredictionRecord> records; // match-major, one per source
    std::vector<DesignRow> design_rows;
    std::map<PlayerId, PlayerProfile> profiles;
    std::map<PlayerId, EloState> elo;
    std::map<PlayerId, GlickoState> glicko;
    std::map<PlayerId, TrueSkillState> trueskill;
    PopulationMoments moments;

    std::vector<PlayerStanding> standings() const;
};

// Streaming replay: predict with every source, then update every rating
// store and profile. Matches must arrive in (timestamp, match_id) order.
class ReplayEngine {
public:
    explicit ReplayEngine(ReplayConfig cfg);

    void process(const MatchRecord& match);
    const ReplayResult& result() const { return result_; }
    ReplayResult take_result() { return std::move(result_); }

private:
    double source_value(const SourceSpec& source, const PlayerId& player,
                        const FeatureVector& zscored) const;
    void refresh_snapshot();

    ReplayConfig cfg_;
    ReplayResult result_;
    PopulationMoments live_moments_;     // incremental accumulator
    PopulationMoments snapshot_moments_; // frozen view used in snapshot mode
    int64_t matches_seen_ = 0;
    int64_t last_timestamp_ = 0;
    std::string last_match_id_;
    bool any_processed_ = false;
};

ReplayResult run_replay(std::span<const MatchRecord> matches, const ReplayConfig& cfg);

struct SetupReport {
    std::string name;
    std::string metric; // "accuracy" or "ndcg"
    int matches_scored = 0;
    int players_selected = -1; // -1 for all_players
    std::map<std::string, std::optional<double>> scores;
};

SetupReport score_setup(const ReplayResult& result, const SetupSpec& spec);

// Feature columns only, for factor extraction.
DesignMatrix features_design(std::span<const DesignRow> rows, const FeatureSet& set);

// Factor columns plus features not absorbed into any factor. Binary targets
// (head-to-head, drawn rows skipped) or ordinal percentile levels.
DesignMatrix regression_design(std::span<const DesignRow> rows, const FeatureSet& set,
                               const FactorModel& factors, Mode mode, int ordinal_levels);

} // namespace rankbench
